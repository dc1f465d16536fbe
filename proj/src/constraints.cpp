#include "anholo/constraints.hpp"

#include <cmath>
#include <limits>

#include "anholo/error.hpp"

namespace anholo {

void ResidualStat::add(double v, const Point& p) {
  double a = std::isfinite(v) ? std::fabs(v) : std::numeric_limits<double>::infinity();
  if (count == 0 || a > max_abs) {
    max_abs = a;
    argmax = p;
  }
  sum_ += a;
  ++count;
}

void ResidualStat::finish() { mean_abs = count ? sum_ / count : 0.0; }

void ResidualStat::merge_max(const ResidualStat& o) {
  if (o.count && (count == 0 || o.max_abs > max_abs)) {
    max_abs = o.max_abs;
    argmax = o.argmax;
  }
}

double LcResiduals::max() const {
  return std::max({w_star.max_abs, w_curl.max_abs, n_star.max_abs, n_curl.max_abs});
}

LcResiduals lc_residuals(const NAdaptedMetric& m, const std::vector<Point>& pts) {
  LcResiduals r;
  for (const Point& p : pts) {
    MetricJets mj = metric_jets(m, p);
    const Jet2& h4 = mj.base[3];
    if (std::fabs(h4.v) < 1e-14) fail(ErrorKind::Domain, "h4 vanishes; ln|h4| undefined");
    double a = 0, c = 0;
    for (int i = 0; i < 2; ++i) {
      a = std::max(a, std::fabs(mj.N[i][T].d(T) - mj.e(i, h4) / h4.v));
      c = std::max(c, std::fabs(mj.N[i][Y].d(T)));
    }
    double b = mj.e(1, mj.N[0][T]) - mj.e(0, mj.N[1][T]);
    double d = mj.N[1][Y].d(X1) - mj.N[0][Y].d(X2);
    r.w_star.add(a, p);
    r.w_curl.add(b, p);
    r.n_star.add(c, p);
    r.n_curl.add(d, p);
  }
  r.w_star.finish();
  r.w_curl.finish();
  r.n_star.finish();
  r.n_curl.finish();
  return r;
}

double LcExactResiduals::max() const {
  double m = 0;
  for (auto& [n, s] : terms) m = std::max(m, s.max_abs);
  return m;
}

LcExactResiduals lc_exact(const NAdaptedMetric& m, const std::vector<Point>& pts) {
  ResidualStat h4x, h3w, nst, om3, om4, gt;
  for (const Point& p : pts) {
    MetricJets mj = metric_jets(m, p);
    const Jet2 &h3 = mj.base[2], &h4 = mj.base[3];
    if (std::fabs(h4.v) < 1e-14 || std::fabs(h3.v) < 1e-14) fail(ErrorKind::Domain, "vertical block vanishes");
    double a = 0, b = 0, c = 0, g = 0;
    for (int i = 0; i < 2; ++i) {
      a = std::max(a, std::fabs(mj.e(i, h4) / h4.v));
      b = std::max(b, std::fabs(2 * mj.N[i][T].d(T) - mj.e(i, h3) / h3.v));
      c = std::max(c, std::fabs(mj.N[i][Y].d(T)));
      g = std::max(g, std::fabs(mj.base[i].d(T)));
    }
    auto A = anholonomy(mj);
    h4x.add(a, p);
    h3w.add(b, p);
    nst.add(c, p);
    om3.add(A.Omega(T, 0, 1), p);
    om4.add(A.Omega(Y, 0, 1), p);
    gt.add(g, p);
  }
  LcExactResiduals r;
  for (auto* s : {&h4x, &h3w, &nst, &om3, &om4, &gt}) s->finish();
  r.terms = {{"e_i ln|h4|", h4x}, {"2w_i* - e_i ln|h3|", h3w}, {"n_i*", nst},
             {"Omega^3_12", om3}, {"Omega^4_12", om4},      {"g_i*", gt}};
  if (m.omega || m.qfactor) {
    // the conditions above are derived without the extra factors
    ResidualStat extra;
    for (const Point& p : pts) {
      MetricJets mj = metric_jets(m, p);
      double v = 0;
      for (int a = 0; a < 4; ++a) {
        if (mj.has_omega) v = std::max(v, std::fabs(mj.omega.d(a)));
        if (mj.has_q) v = std::max(v, std::fabs(mj.q.d(a)));
      }
      extra.add(v, p);
    }
    extra.finish();
    r.terms.emplace_back("d(omega, q)", extra);
  }
  return r;
}

OmegaResidual omega_residual(const NAdaptedMetric& m, const std::vector<Point>& pts) {
  if (!m.omega) fail(ErrorKind::Precondition, "metric has no omega factor");
  OmegaResidual r;
  for (const Point& p : pts) {
    MetricJets mj = metric_jets(m, p);
    // e_k omega, with the minus signs of the N-elongated derivative
    r.k1.add(mj.e(0, mj.omega), p);
    r.k2.add(mj.e(1, mj.omega), p);
  }
  r.k1.finish();
  r.k2.finish();
  return r;
}

ResidualStat q_residual(const NAdaptedMetric& m, const std::vector<Point>& pts) {
  if (!m.qfactor) fail(ErrorKind::Precondition, "metric has no q factor");
  ResidualStat r;
  for (const Point& p : pts) {
    MetricJets mj = metric_jets(m, p);
    double v = 0;
    for (int i = 0; i < 2; ++i) v = std::max(v, std::fabs(mj.q.d(i) - mj.N[i][T].v * mj.q.d(T)));
    r.add(v, p);
  }
  r.finish();
  return r;
}

}  // namespace anholo
