#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "anholo/constraints.hpp"
#include "anholo/metric.hpp"

namespace anholo {

struct GridSpec {
  // count 1 marks an inactive axis held at min
  std::array<AxisSpec, 4> axes{AxisSpec{0.5, 0.5, 1}, AxisSpec{0.5, 0.5, 1}, AxisSpec{1, 1, 1}, AxisSpec{0, 0, 1}};
  double interior_margin = 0.0;  // fraction of each active range excluded at both ends

  // "AXIS=min:max:count[,...]"; axes not named keep their current values
  void parse(const std::string& text);
  void validate() const;
  std::vector<Point> points() const;
  // inactive axes at the midpoint of a provenance domain, when present
  static GridSpec defaults_for(const NAdaptedMetric& m);
};

enum class Mode { DConn, Coordinate };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct Tolerances {
  double residual = 1e-8;
  double lc = 1e-8;
  int failure_budget = 0;
};

struct EquationStat {
  std::string name;
  ResidualStat stat;
};

struct ResidualReport {
  Json provenance;
  Mode mode = Mode::DConn;
  std::vector<EquationStat> equations;
  LcResiduals lc;
  bool lc_ok = true;  // false when the lc block could not be evaluated
  double lc_exact_max = 0;
  Json source;
  Tolerances tolerances;
  int failures = 0;
  std::vector<std::string> failure_messages;
  bool pass = false;
  double wall_time = 0;
  // per point residuals, one row per grid point (NaN when the point failed)
  std::vector<Point> points;
  std::vector<std::vector<double>> rows;
};

ResidualReport grid_report(const NAdaptedMetric& m, const SourceSpec& src, const GridSpec& grid, Mode mode,
                           const Tolerances& tol);

bool lc_pass(const ResidualReport& r);

Json report_to_json(const ResidualReport& r, bool include_lc_only = false);
void write_csv(const ResidualReport& r, std::ostream& out);

int thread_count();

}  // namespace anholo
