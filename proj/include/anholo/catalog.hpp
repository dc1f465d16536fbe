#pragma once

#include <array>
#include <optional>
#include <vector>

#include "anholo/constraints.hpp"
#include "anholo/metric.hpp"

namespace anholo {

enum class FrwChart { Spherical, Cartesian };

// spherical: x1 = r, x2 = theta, y = phi; probe, when given, is checked for a > 0 and 1 - kappa r^2 > 0
NAdaptedMetric frw_metric(const ScalarField& a, int kappa, FrwChart chart, const std::optional<Box>& probe = {});

struct FriedmannResiduals {
  ResidualStat fr1, fr2, continuity;
  double max() const { return std::max({fr1.max_abs, fr2.max_abs, continuity.max_abs}); }
};

// |H^2 - rho/3 + kappa/a^2|, |a**/a + (rho + 3p)/6|, |rho* + 3H(rho + p)|
FriedmannResiduals friedmann_residuals(const ScalarField& a, const ScalarField& rho, const ScalarField& p, int kappa,
                                       const std::vector<double>& ts);

// max |G^a_b - diag(p, p, -rho, p)| from the coordinate curvature
double frw_fluid_residual(const NAdaptedMetric& m, double rho, double p, const Point& pt);

struct KasnerExponents {
  double p1 = 0, p2 = 0, p3 = 0;
};

NAdaptedMetric kasner_metric(const KasnerExponents& k);

struct KasnerCondition {
  bool holds = false;
  double lhs = 0, rhs = 0;
};

KasnerCondition kasner_condition(const KasnerExponents& k);

struct GodelModel {
  NAdaptedMetric metric;
  double a = 1;
  double omega_sq = 0, eps_8piG = 0, lambda = 0;
};

GodelModel godel_metric(double a);

// max |R_bd - g_bd R/2 + lambda g_bd - eps u_b u_d|, u = a^{-1} d_t
double godel_residual(const GodelModel& g, const Point& p);

struct BianchiData {
  std::array<std::array<ScalarField, 3>, 3> n;  // n^{tau gamma}(t)
  std::array<ScalarField, 3> b;
};

using Table3x3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

// w^g_ab = eps_{ab tau} n^{tau g} + delta^g_b b_a - delta^g_a b_b, as [g][a][b]
Table3x3 bianchi_structure_constants(const BianchiData& d, double t);

}  // namespace anholo
