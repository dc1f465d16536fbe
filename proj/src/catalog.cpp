#include "anholo/catalog.hpp"

#include <cmath>
#include <sstream>

#include "anholo/connection.hpp"
#include "anholo/error.hpp"

namespace anholo {

namespace {

ScalarField num(double v) { return ScalarField::constant(v); }
ScalarField var(int axis) { return ScalarField(Expression::variable(axis), nullptr); }

}  // namespace

NAdaptedMetric frw_metric(const ScalarField& a, int kappa, FrwChart chart, const std::optional<Box>& probe) {
  if (kappa < -1 || kappa > 1) fail(ErrorKind::Precondition, "kappa must be -1, 0 or +1");
  if (a.depends_on(X1) || a.depends_on(X2) || a.depends_on(Y)) fail(ErrorKind::Precondition, "a must depend on t only");
  if (chart == FrwChart::Cartesian && kappa != 0)
    fail(ErrorKind::Precondition, "the Cartesian chart is for kappa = 0");
  NAdaptedMetric m;
  const ScalarField a2 = a * a;
  m.h3 = num(-1);
  if (chart == FrwChart::Cartesian) {
    m.g1 = m.g2 = m.h4 = a2;
  } else {
    const ScalarField r = var(X1);
    const ScalarField sin_th = apply(Func::Sin, var(X2));
    m.g1 = a2 / (num(1) - num(kappa) * r * r);
    m.g2 = a2 * r * r;
    m.h4 = a2 * r * r * sin_th * sin_th;
  }
  m.provenance = Json{{"catalog", chart == FrwChart::Cartesian ? "frw-cartesian" : "frw"},
                      {"kappa", kappa},
                      {"a", a.text()}};
  if (probe) {
    for (const Point& p : lattice(*probe, 5)) {
      std::ostringstream os;
      os << "at (x1=" << p[X1] << ", t=" << p[T] << ")";
      if (!(a.value(p) > 0)) fail(ErrorKind::Domain, "a(t) must be positive " + os.str());
      if (chart == FrwChart::Spherical && !(1 - kappa * p[X1] * p[X1] > 0))
        fail(ErrorKind::Domain, "1 - kappa r^2 must be positive " + os.str());
    }
    m.provenance["domain"] = Json{{"x1", {probe->lo[X1], probe->hi[X1]}},
                                  {"x2", {probe->lo[X2], probe->hi[X2]}},
                                  {"t", {probe->lo[T], probe->hi[T]}}};
  }
  return m;
}

FriedmannResiduals friedmann_residuals(const ScalarField& a, const ScalarField& rho, const ScalarField& p, int kappa,
                                       const std::vector<double>& ts) {
  FriedmannResiduals r;
  for (double t : ts) {
    const Point pt{0, 0, t, 0};
    const Jet2 A = a.jet(pt), R = rho.jet(pt);
    if (!(A.v > 0)) fail(ErrorKind::Domain, "a(t) must be positive");
    const double P = p.value(pt);
    const double H = A.d(T) / A.v;
    r.fr1.add(H * H - R.v / 3 + kappa / (A.v * A.v), pt);
    r.fr2.add(A.dd(T, T) / A.v + (R.v + 3 * P) / 6, pt);
    r.continuity.add(R.d(T) + 3 * H * (R.v + P), pt);
  }
  r.fr1.finish();
  r.fr2.finish();
  r.continuity.finish();
  return r;
}

double frw_fluid_residual(const NAdaptedMetric& m, double rho, double p, const Point& pt) {
  auto cc = coordinate_einstein(m, pt);
  Eigen::Matrix4d target = Eigen::Vector4d(p, p, -rho, p).asDiagonal();
  return (cc.einstein_mixed - target).cwiseAbs().maxCoeff();
}

NAdaptedMetric kasner_metric(const KasnerExponents& k) {
  NAdaptedMetric m;
  const ScalarField t = var(T);
  m.g1 = pow(t, 2 * k.p1);
  m.g2 = pow(t, 2 * k.p3);
  m.h3 = num(-1);
  m.h4 = pow(t, 2 * k.p2);
  m.provenance = Json{{"catalog", "kasner"}, {"p1", k.p1}, {"p2", k.p2}, {"p3", k.p3},
                      {"domain", {{"x1", {0.1, 0.9}}, {"x2", {0.1, 0.9}}, {"t", {1.0, 2.0}}}}};
  return m;
}

KasnerCondition kasner_condition(const KasnerExponents& k) {
  const double P3 = k.p1 * k.p2 + k.p2 * k.p3 + k.p1 * k.p3;
  const double P2 = k.p1 + k.p2 + k.p3;
  const double P1 = std::sqrt(k.p1 * k.p1 + k.p2 * k.p2 + k.p3 * k.p3);
  KasnerCondition c;
  c.lhs = 2 * P3;
  c.rhs = P2 - P1;
  c.holds = std::fabs(c.lhs - c.rhs) < 1e-12;
  return c;
}

GodelModel godel_metric(double a) {
  if (!(a > 0)) fail(ErrorKind::Precondition, "Godel parameter a must be positive");
  GodelModel g;
  g.a = a;
  const double a2 = a * a;
  NAdaptedMetric& m = g.metric;
  const ScalarField ex = apply(Func::Exp, var(X1));
  m.g1 = num(a2);
  m.g2 = num(a2 / 2) * ex * ex;
  m.h3 = num(-a2);
  m.h4 = num(a2);
  m.w2 = -ex;
  m.provenance = Json{{"catalog", "godel"}, {"a", a},
                      {"domain", {{"x1", {-0.5, 0.5}}, {"x2", {-0.5, 0.5}}, {"t", {0.0, 1.0}}}}};
  g.omega_sq = 1 / (2 * a2);
  g.lambda = -1 / (2 * a2);
  g.eps_8piG = 1 / a2;
  return g;
}

double godel_residual(const GodelModel& g, const Point& p) {
  auto cc = coordinate_einstein(g.metric, p);
  Eigen::Vector4d uup(0, 0, 1 / g.a, 0);
  Eigen::Vector4d u = cc.metric * uup;
  Eigen::Matrix4d lhs = cc.einstein + g.lambda * cc.metric;
  Eigen::Matrix4d rhs = g.eps_8piG * u * u.transpose();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

Table3x3 bianchi_structure_constants(const BianchiData& d, double t) {
  const Point pt{0, 0, t, 0};
  double n[3][3], b[3];
  for (int i = 0; i < 3; ++i) {
    b[i] = d.b[i].value(pt);
    for (int j = 0; j < 3; ++j) {
      n[i][j] = d.n[i][j].value(pt);
      if (i != j && n[i][j] != 0.0) fail(ErrorKind::Precondition, "Bianchi n-tensor must be diagonal");
    }
  }
  auto eps = [](int i, int j, int k) -> double {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
  };
  Table3x3 w{};
  for (int g = 0; g < 3; ++g)
    for (int a = 0; a < 3; ++a)
      for (int bb = 0; bb < 3; ++bb) {
        double s = 0;
        for (int tau = 0; tau < 3; ++tau) s += eps(a, bb, tau) * n[tau][g];
        if (g == bb) s += b[a];
        if (g == a) s -= b[bb];
        w[g][a][bb] = s;
      }
  return w;
}

}  // namespace anholo
