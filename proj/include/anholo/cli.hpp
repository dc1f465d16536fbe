#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "anholo/metric.hpp"

namespace anholo {

struct CatalogParams {
  double p1 = 2.0 / 3, p2 = 2.0 / 3, p3 = -1.0 / 3;
  std::string a = "1";  // FRW scale factor expression, or the Godel parameter
  int kappa = 0;
};

// frw, frw-cartesian, kasner, godel
NAdaptedMetric catalog_by_name(const std::string& name, const CatalogParams& p, const Constants& c = {});

// exit status: 0 pass, 2 residual failure, 1 usage or evaluation error
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace anholo
