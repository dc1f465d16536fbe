#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>

#include "anholo/constraints.hpp"
#include "anholo/metric.hpp"
#include "anholo/poisson.hpp"
#include "anholo/quadrature.hpp"

namespace anholo {

struct PoissonProblem {
  Rect domain;
  ScalarField bc;
  int n1 = 33, n2 = 33;
};

// psi for g1 = g2 = e^psi: an expression, or solved from upsilon4
struct PsiChoice {
  ScalarField expr;
  std::optional<PoissonProblem> solve;
};

using FieldPair = std::array<ScalarField, 2>;

struct Type1Spec {
  ScalarField phi;
  SourceSpec source;
  ScalarField h4_0;
  FieldPair n1_fns, n2_fns;  // 1n_k, 2n_k
  int sign3 = 0, sign4 = 0;  // 0: enumerate
  PsiChoice psi;
  Box probe;
  int probe_n = 5;
};

struct Type2Spec {
  ScalarField h3 = ScalarField::constant(-1), w1, w2, h4_0 = ScalarField::constant(1);
  FieldPair n1_fns, n2_fns;
  SourceSpec source;
  PsiChoice psi;
  Box probe;
  int probe_n = 5;
};

struct Type3Spec {
  ScalarField h3_0 = ScalarField::constant(-1);
  SourceSpec source;
  ScalarField h4_init = ScalarField::constant(1), h4s_init = ScalarField::constant(1);  // at t0
  FieldPair n1_fns, n2_fns;
  PsiChoice psi;
  double t_min = 1, t_max = 2;
  int nt = 201;
  // x lattice used only when the data depend on x
  AxisSpec x1{0, 1, 17}, x2{0, 1, 17};
  OdeSettings ode;
  Box probe;
  int probe_n = 5;
};

struct Type4Spec {
  ScalarField f;
  SourceSpec source;
  double h0 = 1.0;
  double sigma40 = 1.0;  // +1 or -1
  FieldPair n1_fns, n2_fns;
  ScalarField w1, w2;  // free when upsilon2 vanishes
  PsiChoice psi;
  Box probe;
  int probe_n = 5;
};

struct DesitterParams {
  double a0 = 1.0, H = 1.0;
  FieldPair tw, sw;  // w_i = tw_i(t) + sw_i(x)
  ScalarField eta3 = ScalarField::constant(1);
  ScalarField h4_0 = ScalarField::constant(1);
  FieldPair n1_fns;
  Box probe;
  int probe_n = 5;
};

struct GeneratedSolution {
  NAdaptedMetric metric;
  std::string type;
  int sign3 = 0, sign4 = 0;
  bool signs_enumerated = false;
  // estimated error bounds per tabulated or integrated field
  std::map<std::string, double> diagnostics;
  bool lc_mode = false;
  std::optional<LcResiduals> lc;
  std::optional<double> q_residual;

  double integrator_error() const;
};

GeneratedSolution generate_type1(const Type1Spec& spec, const QuadratureSettings& q = {});
GeneratedSolution generate_type2(const Type2Spec& spec, const QuadratureSettings& q = {});
GeneratedSolution generate_type3(const Type3Spec& spec, const QuadratureSettings& q = {});
GeneratedSolution generate_type4(const Type4Spec& spec, const QuadratureSettings& q = {});
GeneratedSolution build_desitter(const DesitterParams& params);

// ln|h4* / sqrt|h3 h4||
double phi_tilde(const NAdaptedMetric& m, const Point& p);

}  // namespace anholo
