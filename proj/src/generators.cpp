#include "anholo/generators.hpp"

#include <cmath>
#include <sstream>

#include "anholo/error.hpp"

namespace anholo {

namespace {

ScalarField num(double v) { return ScalarField::constant(v); }

std::string where(const Point& p) {
  std::ostringstream os;
  os << "(x1=" << p[0] << ", x2=" << p[1] << ", t=" << p[2] << ")";
  return os.str();
}

Json box_json(const Box& b) {
  return Json{{"x1", {b.lo[X1], b.hi[X1]}}, {"x2", {b.lo[X2], b.hi[X2]}}, {"t", {b.lo[T], b.hi[T]}}};
}

bool vanishes(const ScalarField& f, const std::vector<Point>& pts) {
  if (f.is_zero()) return true;
  for (const Point& p : pts)
    if (f.value(p) != 0.0) return false;
  return true;
}

void require_nonvanishing(const ScalarField& f, const std::vector<Point>& pts, const std::string& msg) {
  for (const Point& p : pts)
    if (!(std::fabs(f.value(p)) >= 1e-14)) fail(ErrorKind::Precondition, msg + " at " + where(p));
}

void require_x_only(const ScalarField& f, const std::string& name) {
  if (f.depends_on(T) || f.depends_on(Y)) fail(ErrorKind::Precondition, name + " must depend on (x1, x2) only");
}

// sign changes between probe points are reported as a crossing
void require_fixed_sign(const ScalarField& f, const std::vector<Point>& pts, const std::string& name) {
  const Point* first = nullptr;
  double s0 = 0;
  for (const Point& p : pts) {
    double v = f.value(p);
    if (!std::isfinite(v)) fail(ErrorKind::Domain, name + " not finite at " + where(p));
    if (std::fabs(v) < 1e-14) fail(ErrorKind::Domain, name + " vanishes at " + where(p));
    if (!first) {
      first = &p;
      s0 = v;
    } else if ((v > 0) != (s0 > 0)) {
      fail(ErrorKind::Domain, name + " crosses zero between " + where(*first) + " and " + where(p));
    }
  }
}

double max_quad_err(const ScalarField& f, const std::vector<Point>& pts) {
  double m = 0;
  for (const Point& p : pts) {
    double e = 0;
    f.jet(p, &e);
    m = std::max(m, e);
  }
  return m;
}

ScalarField psi_field(const PsiChoice& c, const SourceSpec& src) {
  if (c.solve) return solve_psi(src.upsilon4, c.solve->domain, c.solve->bc, c.solve->n1, c.solve->n2);
  return c.expr;
}

ScalarField n_field(const ScalarField& n1, const ScalarField& n2, const ScalarField& integrand,
                    const QuadratureSettings& q) {
  if (n2.is_zero()) return n1;
  return n1 + n2 * tint(integrand, q.t0, q.abs_tol, q.rel_tol);
}

void check_quadrature(const QuadratureSettings& q, const Box& probe) {
  if (!(q.abs_tol > 0 && q.rel_tol > 0)) fail(ErrorKind::Precondition, "quadrature tolerances must be positive");
  if (q.t0 < probe.lo[T] || q.t0 > probe.hi[T])
    fail(ErrorKind::Precondition, "t0 must lie inside the t-domain");
}

void fill_common(GeneratedSolution& s, const std::string& type, const Box& probe, const QuadratureSettings& q) {
  s.type = type;
  s.metric.provenance = Json{{"type", type},
                             {"t0", q.t0},
                             {"tolerances", {{"abs_tol", q.abs_tol}, {"rel_tol", q.rel_tol}}},
                             {"domain", box_json(probe)}};
}

void record_fields(GeneratedSolution& s, const std::vector<Point>& pts) {
  const NAdaptedMetric& m = s.metric;
  const std::pair<const char*, const ScalarField*> fields[] = {
      {"h3", &m.h3}, {"h4", &m.h4}, {"w1", &m.w1}, {"w2", &m.w2}, {"n1", &m.n1}, {"n2", &m.n2}};
  for (auto& [name, f] : fields) {
    GridRegistry grids;
    f->expr().collect_grids(grids);
    if (!grids.empty() || unparse(f->expr()).find("tint") != std::string::npos)
      s.diagnostics[name] = std::max(s.diagnostics[name], max_quad_err(*f, pts));
  }
}

}  // namespace

double GeneratedSolution::integrator_error() const {
  double m = 0;
  for (auto& [k, v] : diagnostics)
    if (k.rfind("check:", 0) != 0) m = std::max(m, v);
  return m;
}

GeneratedSolution generate_type1(const Type1Spec& spec, const QuadratureSettings& q) {
  check_quadrature(q, spec.probe);
  const auto pts = lattice(spec.probe, spec.probe_n);
  if (!spec.phi.depends_on(T))
    fail(ErrorKind::Precondition, "phi must be nonconstant in t (phi* = 0 everywhere)");
  const ScalarField phis = spec.phi.derivative(T);
  require_nonvanishing(phis, pts, "phi* vanishes (a nonconstant phi is required)");
  const ScalarField& u2 = spec.source.upsilon2;
  require_nonvanishing(u2, pts, "upsilon2 vanishes");
  require_x_only(spec.h4_0, "0h4");

  const ScalarField h3_base = apply(Func::Abs, phis) / u2;
  const ScalarField e2phi = apply(Func::Exp, num(2) * spec.phi);
  // integral of (e^{2 phi})*/upsilon2 from t0
  ScalarField integral;
  bool closed = false;
  if (!u2.depends_on(T)) {
    try {
      ScalarField phi0(substitute(spec.phi.expr(), T, q.t0), spec.phi.constants_ptr());
      integral = (e2phi - apply(Func::Exp, num(2) * phi0)) / u2;
      closed = true;
    } catch (const Error&) {
    }
  }
  if (!closed) integral = tint(e2phi.derivative(T) / u2, q.t0, q.abs_tol, q.rel_tol);

  std::vector<std::pair<int, int>> combos;
  for (int s3 : {1, -1})
    for (int s4 : {1, -1})
      if ((spec.sign3 == 0 || spec.sign3 == s3) && (spec.sign4 == 0 || spec.sign4 == s4)) combos.emplace_back(s3, s4);
  const bool enumerate = combos.size() > 1;

  GeneratedSolution sol;
  fill_common(sol, "type1", spec.probe, q);
  NAdaptedMetric& m = sol.metric;
  const ScalarField psi = psi_field(spec.psi, spec.source);
  m.g1 = m.g2 = apply(Func::Exp, psi);
  for (int i = 0; i < 2; ++i) {
    ScalarField w = -(spec.phi.derivative(i) / phis);
    (i == 0 ? m.w1 : m.w2) = w;
  }

  std::string tried;
  bool found = false;
  for (auto [s3, s4] : combos) {
    m.h3 = num(s3) * h3_base;
    m.h4 = spec.h4_0 + num(2.0 * s4) * integral;
    if (enumerate) {
      SignatureReport r;
      try {
        r = check_signature(m, pts);
      } catch (const Error& e) {
        r.ok = false;
        r.first_violation = e.what();
      }
      if (!r.ok) {
        tried += " (" + std::to_string(s3) + "," + std::to_string(s4) + "): " + r.first_violation + ";";
        continue;
      }
    } else {
      require_fixed_sign(m.h4, pts, "h4");
    }
    sol.sign3 = s3;
    sol.sign4 = s4;
    found = true;
    break;
  }
  if (!found) fail(ErrorKind::Signature, "no sign choice yields (+,+,-,+):" + tried);
  sol.signs_enumerated = enumerate;

  const ScalarField integrand = m.h3 / pow(apply(Func::Abs, m.h4), 1.5);
  m.n1 = n_field(spec.n1_fns[0], spec.n2_fns[0], integrand, q);
  m.n2 = n_field(spec.n1_fns[1], spec.n2_fns[1], integrand, q);
  m.provenance["signs"] = {{"sign3", sol.sign3}, {"sign4", sol.sign4}, {"enumerated", enumerate}};
  m.provenance["h4_closed_form"] = closed;
  record_fields(sol, pts);
  return sol;
}

GeneratedSolution generate_type2(const Type2Spec& spec, const QuadratureSettings& q) {
  check_quadrature(q, spec.probe);
  const auto pts = lattice(spec.probe, spec.probe_n);
  if (!vanishes(spec.source.upsilon2, pts))
    fail(ErrorKind::Precondition, "Type 2 requires upsilon2 = 0");
  require_x_only(spec.h4_0, "0h4");
  require_nonvanishing(spec.h4_0, pts, "0h4 vanishes");
  require_nonvanishing(spec.h3, pts, "h3 vanishes");

  GeneratedSolution sol;
  fill_common(sol, "type2", spec.probe, q);
  NAdaptedMetric& m = sol.metric;
  m.g1 = m.g2 = apply(Func::Exp, psi_field(spec.psi, spec.source));
  m.h3 = spec.h3;
  m.h4 = spec.h4_0;
  m.w1 = spec.w1;
  m.w2 = spec.w2;
  m.n1 = n_field(spec.n1_fns[0], spec.n2_fns[0], spec.h3, q);
  m.n2 = n_field(spec.n1_fns[1], spec.n2_fns[1], spec.h3, q);
  record_fields(sol, pts);
  return sol;
}

GeneratedSolution generate_type3(const Type3Spec& spec, const QuadratureSettings& q) {
  if (!(spec.t_min < spec.t_max) || spec.nt < 4) fail(ErrorKind::Precondition, "bad t-range for the ODE table");
  if (q.t0 < spec.t_min || q.t0 > spec.t_max) fail(ErrorKind::Precondition, "t0 must lie inside the t-range");
  require_x_only(spec.h3_0, "0h3");
  require_x_only(spec.h4_init, "h4(t0)");
  require_x_only(spec.h4s_init, "h4*(t0)");
  const ScalarField& u2 = spec.source.upsilon2;
  auto xdep = [](const ScalarField& f) { return f.depends_on(X1) || f.depends_on(X2); };
  const bool dep = xdep(spec.h3_0) || xdep(spec.h4_init) || xdep(spec.h4s_init) || xdep(u2);
  if (dep && (spec.x1.count < 4 || spec.x2.count < 4))
    fail(ErrorKind::Precondition, "x-dependent Type 3 data need at least 4 x-nodes per axis");

  const AxisSpec ax1 = dep ? spec.x1 : AxisSpec{0, 0, 1};
  const AxisSpec ax2 = dep ? spec.x2 : AxisSpec{0, 0, 1};
  const AxisSpec at{spec.t_min, spec.t_max, spec.nt};
  const size_t total = static_cast<size_t>(ax1.count) * ax2.count * at.count;
  std::vector<double> H(total), Hs(total), Hss(total), Hsss(total), I(total), Is(total), Iss(total);
  double ode_err = 0;

  for (int i1 = 0; i1 < ax1.count; ++i1)
    for (int i2 = 0; i2 < ax2.count; ++i2) {
      const double x1 = ax1.node(i1), x2 = ax2.node(i2);
      const Point p0{x1, x2, q.t0, 0};
      const double h30 = spec.h3_0.value(p0);
      if (std::fabs(h30) < 1e-14) fail(ErrorKind::Precondition, "0h3 vanishes at " + where(p0));
      const double y0 = spec.h4_init.value(p0), ys0 = spec.h4s_init.value(p0);
      if (std::fabs(y0) < 1e-14) fail(ErrorKind::Precondition, "h4(t0) vanishes at " + where(p0));
      const double sgn = y0 > 0 ? 1.0 : -1.0;
      auto rhs2 = [&](double t, double h, double hs) {
        return hs * hs / (2 * h) + 2 * h30 * h * u2.value({x1, x2, t, 0});
      };
      OdeRhs f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        if (!(y[0] * sgn > 0)) fail(ErrorKind::Domain, "h4 crosses zero near t=" + std::to_string(t));
        dy[0] = y[1];
        dy[1] = rhs2(t, y[0], y[1]);
        dy[2] = std::pow(std::fabs(y[0]), -1.5);
      };
      auto store = [&](int it, const std::vector<double>& y) {
        const double t = at.node(it);
        const size_t k = (static_cast<size_t>(i1) * ax2.count + i2) * at.count + it;
        const Jet2 u = u2.jet({x1, x2, t, 0});
        const double h = y[0], hs = y[1], hss = rhs2(t, h, hs);
        if (!(h * sgn > 0)) fail(ErrorKind::Domain, "h4 crosses zero near " + where({x1, x2, t, 0}));
        if (std::fabs(hs) < 1e-14)
          fail(ErrorKind::Domain, "h4* vanishes at " + where({x1, x2, t, 0}) + "; phi~ is undefined");
        H[k] = h;
        Hs[k] = hs;
        Hss[k] = hss;
        Hsss[k] = hs * hss / h - hs * hs * hs / (2 * h * h) + 2 * h30 * (hs * u.v + h * u.d(T));
        I[k] = y[2];
        Is[k] = std::pow(std::fabs(h), -1.5);
        Iss[k] = -1.5 * std::pow(std::fabs(h), -2.5) * sgn * hs;
      };
      // first node at or above t0
      int up = 0;
      while (up < at.count && at.node(up) < q.t0) ++up;
      for (int dir : {+1, -1}) {
        std::vector<double> y{y0, ys0, 0.0};
        double t = q.t0;
        OdeStats st;
        for (int it = dir > 0 ? up : up - 1; it >= 0 && it < at.count; it += dir) {
          rk45_integrate(f, t, at.node(it), y, spec.ode, st);
          t = at.node(it);
          store(it, y);
        }
        ode_err = std::max(ode_err, st.err_sum);
      }
    }

  const std::array<AxisSpec, 3> axes{ax1, ax2, at};
  auto H4 = std::make_shared<GridTable>("h4", axes, H, Hs, Hss);
  H4->set_order(5);
  auto Ig = std::make_shared<GridTable>("int_h4", axes, I, Is, Iss);
  Ig->set_order(5);

  GeneratedSolution sol;
  Box dom = spec.probe;
  if (dep) {
    dom.lo[X1] = spec.x1.min, dom.hi[X1] = spec.x1.max;
    dom.lo[X2] = spec.x2.min, dom.hi[X2] = spec.x2.max;
  }
  dom.lo[T] = spec.t_min, dom.hi[T] = spec.t_max;
  fill_common(sol, "type3", dom, q);
  sol.metric.provenance["ode"] = {{"abs_tol", spec.ode.abs_tol}, {"rel_tol", spec.ode.rel_tol}, {"nt", spec.nt}};
  NAdaptedMetric& m = sol.metric;
  m.g1 = m.g2 = apply(Func::Exp, psi_field(spec.psi, spec.source));
  m.h3 = spec.h3_0;
  m.h4 = ScalarField::from_grid(H4);
  if (dep) {
    // w_i = -d_i phi~ / phi~*, with x-derivatives from splines of the tables
    auto Hsg = std::make_shared<GridTable>("h4s", axes, Hs, Hss, Hsss);
    std::vector<double> W1(total), W2(total);
    for (int i1 = 0; i1 < ax1.count; ++i1)
      for (int i2 = 0; i2 < ax2.count; ++i2)
        for (int it = 0; it < at.count; ++it) {
          const Point p{ax1.node(i1), ax2.node(i2), at.node(it), 0};
          const size_t k = H4->index(i1, i2, it);
          const Jet2 h = H4->jet(p), hs = Hsg->jet(p), h30 = spec.h3_0.jet(p);
          const double pts_ = Hss[k] / Hs[k] - Hs[k] / (2 * H[k]);
          if (std::fabs(pts_) < 1e-14) fail(ErrorKind::Domain, "phi~* vanishes at " + where(p));
          for (int i = 0; i < 2; ++i) {
            double dphi = hs.d(i) / hs.v - h30.d(i) / (2 * h30.v) - h.d(i) / (2 * h.v);
            (i == 0 ? W1 : W2)[k] = -dphi / pts_;
          }
        }
    m.w1 = ScalarField::from_grid(std::make_shared<GridTable>("w1", axes, W1));
    m.w2 = ScalarField::from_grid(std::make_shared<GridTable>("w2", axes, W2));
  }
  const ScalarField Ifield = ScalarField::from_grid(Ig);
  for (int k = 0; k < 2; ++k) {
    ScalarField n = spec.n2_fns[k].is_zero() ? spec.n1_fns[k] : spec.n1_fns[k] + spec.n2_fns[k] * Ifield;
    (k == 0 ? m.n1 : m.n2) = n;
  }
  sol.diagnostics["h4"] = ode_err;
  sol.diagnostics["n1"] = sol.diagnostics["n2"] = ode_err;
  if (dep) sol.diagnostics["w1"] = sol.diagnostics["w2"] = ode_err;
  return sol;
}

GeneratedSolution generate_type4(const Type4Spec& spec, const QuadratureSettings& q) {
  check_quadrature(q, spec.probe);
  const auto pts = lattice(spec.probe, spec.probe_n);
  if (spec.sigma40 != 1.0 && spec.sigma40 != -1.0) fail(ErrorKind::Precondition, "sigma_4[0] must be +1 or -1");
  if (!spec.f.depends_on(T)) fail(ErrorKind::Precondition, "f* vanishes (f must depend on t)");
  const ScalarField fs = spec.f.derivative(T);
  require_nonvanishing(fs, pts, "f* vanishes");
  require_fixed_sign(spec.f, pts, "f");
  const ScalarField& u2 = spec.source.upsilon2;
  const double h02 = spec.h0 * spec.h0;

  GeneratedSolution sol;
  fill_common(sol, "type4", spec.probe, q);
  NAdaptedMetric& m = sol.metric;
  ScalarField sigma;
  if (vanishes(u2, pts)) {
    sigma = num(spec.sigma40);
    m.w1 = spec.w1;
    m.w2 = spec.w2;
  } else {
    const ScalarField f2 = spec.f * spec.f;
    sigma = num(spec.sigma40) - num(h02 / 16.0) * tint(u2 * f2 * f2, q.t0, q.abs_tol, q.rel_tol);
    const ScalarField sigmas = -(num(h02 / 16.0) * u2 * f2 * f2);
    require_nonvanishing(sigmas, pts, "sigma* vanishes where w_i is requested");
    m.w1 = -(sigma.derivative(X1) / sigmas);
    m.w2 = -(sigma.derivative(X2) / sigmas);
  }
  m.g1 = m.g2 = apply(Func::Exp, psi_field(spec.psi, spec.source));
  m.h3 = -(num(h02) * fs * fs * apply(Func::Abs, sigma));
  m.h4 = spec.f * spec.f;
  const ScalarField integrand = fs * fs / (spec.f * spec.f) * sigma;
  m.n1 = n_field(spec.n1_fns[0], spec.n2_fns[0], integrand, q);
  m.n2 = n_field(spec.n1_fns[1], spec.n2_fns[1], integrand, q);

  // sqrt|h3| = h0 |sigma|^{1/2} |f*| as assembled
  double ident = 0;
  for (const Point& p : pts) {
    double lhs = std::sqrt(std::fabs(m.h3.value(p)));
    double rhs = std::fabs(spec.h0) * std::sqrt(std::fabs(sigma.value(p))) * std::fabs(fs.value(p));
    ident = std::max(ident, std::fabs(lhs - rhs));
  }
  sol.diagnostics["check:type4_identity"] = ident;
  m.provenance["sigma40"] = spec.sigma40;
  record_fields(sol, pts);
  return sol;
}

GeneratedSolution build_desitter(const DesitterParams& prm) {
  const auto pts = lattice(prm.probe, prm.probe_n);
  for (int i = 0; i < 2; ++i) {
    if (prm.tw[i].depends_on(X1) || prm.tw[i].depends_on(X2) || prm.tw[i].depends_on(Y))
      fail(ErrorKind::Precondition, "tw_i must depend on t only");
    require_x_only(prm.sw[i], "sw_i");
    require_x_only(prm.n1_fns[i], "1n_i");
  }
  require_x_only(prm.h4_0, "0h4");
  if (prm.eta3.depends_on(Y)) fail(ErrorKind::Precondition, "eta3 must not depend on y");
  const ScalarField sw_curl = prm.sw[0].derivative(X2) - prm.sw[1].derivative(X1);
  const ScalarField n_curl = prm.n1_fns[0].derivative(X2) - prm.n1_fns[1].derivative(X1);
  for (const Point& p : pts) {
    if (std::fabs(sw_curl.value(p)) > 1e-10)
      fail(ErrorKind::Precondition, "d_k sw_i is not symmetric at " + where(p));
    if (std::fabs(n_curl.value(p)) > 1e-10)
      fail(ErrorKind::Precondition, "d_k 1n_i is not symmetric at " + where(p));
    for (int k = 0; k < 2; ++k) {
      double c = prm.sw[k].value(p) + prm.h4_0.derivative(k).value(p);
      if (std::fabs(c) > 1e-10) fail(ErrorKind::Precondition, "sw_k != -d_k 0h4 at " + where(p));
    }
  }
  if (!(prm.a0 > 0)) fail(ErrorKind::Precondition, "a0 must be positive");

  GeneratedSolution sol;
  sol.type = "desitter";
  NAdaptedMetric& m = sol.metric;
  m.g1 = m.g2 = num(1);
  const ScalarField t = ScalarField(Expression::variable(T), nullptr);
  m.h3 = -(prm.eta3 * apply(Func::Exp, num(-2 * prm.H) * t) / num(prm.a0 * prm.a0));
  m.h4 = prm.h4_0;
  m.w1 = prm.tw[0] + prm.sw[0];
  m.w2 = prm.tw[1] + prm.sw[1];
  m.n1 = prm.n1_fns[0];
  m.n2 = prm.n1_fns[1];
  // ln q~ = H * (line integral of sw) = -H 0h4 under the closure
  m.qfactor = apply(Func::Exp, num(-prm.H) * prm.h4_0) * num(prm.a0) * apply(Func::Exp, num(prm.H) * t);
  m.provenance = Json{{"type", "desitter"}, {"a0", prm.a0}, {"H", prm.H}, {"domain", box_json(prm.probe)}};
  auto sig = check_signature(m, pts);
  if (!sig.ok) fail(ErrorKind::Signature, "de Sitter data violate (+,+,-,+): " + sig.first_violation);
  sol.lc_mode = true;
  sol.q_residual = q_residual(m, pts).max_abs;
  sol.lc = lc_residuals(m, pts);
  return sol;
}

double phi_tilde(const NAdaptedMetric& m, const Point& p) {
  MetricJets mj = metric_jets(m, p);
  double r = mj.base[3].d(T) / std::sqrt(std::fabs(mj.base[2].v * mj.base[3].v));
  if (!(std::fabs(r) > 0) || !std::isfinite(r)) fail(ErrorKind::Domain, "phi~ undefined at " + where(p));
  return std::log(std::fabs(r));
}

}  // namespace anholo
