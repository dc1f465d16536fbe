#pragma once

#include <string>
#include <utility>
#include <vector>

#include "anholo/metric.hpp"

namespace anholo {

struct ResidualStat {
  double max_abs = 0.0, mean_abs = 0.0;
  Point argmax{};
  int count = 0;

  void add(double v, const Point& p);
  void finish();  // turns the running sum into a mean
  void merge_max(const ResidualStat& o);

 private:
  double sum_ = 0.0;
};

// The four extraction conditions:
// (a) w_i* - e_i ln|h4|, (b) e_k w_i - e_i w_k, (c) n_i*, (d) d_i n_k - d_k n_i
struct LcResiduals {
  ResidualStat w_star, w_curl, n_star, n_curl;
  double max() const;
  bool pass(double tol) const { return max() <= tol; }
};

LcResiduals lc_residuals(const NAdaptedMetric& m, const std::vector<Point>& pts);

// Conditions under which torsion and distortion of the canonical d-connection vanish for
// the diagonal-block ansatz: e_i ln|h4| = 0, 2 w_i* = e_i ln|h3|, n_i* = 0,
// Omega^3_12 = Omega^4_12 = 0, g_i independent of t (no omega or q factor).
struct LcExactResiduals {
  std::vector<std::pair<std::string, ResidualStat>> terms;
  double max() const;
};

LcExactResiduals lc_exact(const NAdaptedMetric& m, const std::vector<Point>& pts);

// |e_k omega| = |d_k omega - w_k omega* - n_k d_y omega|, k = 1, 2
struct OmegaResidual {
  ResidualStat k1, k2;
  double max() const { return std::max(k1.max_abs, k2.max_abs); }
};

OmegaResidual omega_residual(const NAdaptedMetric& m, const std::vector<Point>& pts);

// |d_i q - w_i q*| for the conformal factor
ResidualStat q_residual(const NAdaptedMetric& m, const std::vector<Point>& pts);

}  // namespace anholo
