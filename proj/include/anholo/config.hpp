#pragma once

#include <optional>
#include <string>

#include "anholo/generators.hpp"
#include "anholo/report.hpp"

namespace anholo {

// Parsed config document. Function-valued entries are expression strings over
// x1, x2, t, y and the [constants] table.
struct Config {
  std::string text;  // raw document, hashed into provenance
  Constants constants;

  std::string generator;  // type1..type4, desitter, prime; empty when absent
  QuadratureSettings quad;
  Type1Spec type1;
  Type2Spec type2;
  Type3Spec type3;
  Type4Spec type4;
  DesitterParams desitter;

  std::optional<NAdaptedMetric> prime;
  std::optional<Polarizations> polarizations;
  std::optional<SourceSpec> source;

  std::optional<std::string> grid;
  double interior_margin = 0.0;
  std::optional<double> tol_residual, tol_lc;
  int failure_budget = 0;

  std::string out_metric, out_report, out_csv;
  std::optional<std::string> mode;
};

Config parse_config(const std::string& text, const std::string& origin = "config");
Config load_config(const std::string& path);

// the metric the config describes: a generator run, or prime plus polarizations
GeneratedSolution build_from_config(const Config& c);

std::string hash_hex(const std::string& text);

}  // namespace anholo
