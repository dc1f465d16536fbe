#include "anholo/metric.hpp"

#include <cmath>
#include <sstream>

#include "anholo/error.hpp"

namespace anholo {

std::vector<Point> lattice(const Box& b, int n, bool include_y) {
  std::vector<Point> out;
  auto axis = [&](int a) {
    std::vector<double> v;
    if (b.lo[a] == b.hi[a] || n == 1) {
      v.push_back(n == 1 ? 0.5 * (b.lo[a] + b.hi[a]) : b.lo[a]);
      return v;
    }
    for (int i = 0; i < n; ++i) v.push_back(b.lo[a] + (b.hi[a] - b.lo[a]) * i / (n - 1));
    return v;
  };
  auto X = axis(X1), Z = axis(X2), Tt = axis(T);
  std::vector<double> Yv = include_y ? axis(Y) : std::vector<double>{b.lo[Y]};
  for (double x : X)
    for (double z : Z)
      for (double t : Tt)
        for (double y : Yv) out.push_back({x, z, t, y});
  return out;
}

NAdaptedMetric NAdaptedMetric::minkowski() {
  NAdaptedMetric m;
  m.g1 = ScalarField::constant(1);
  m.g2 = ScalarField::constant(1);
  m.h3 = ScalarField::constant(-1);
  m.h4 = ScalarField::constant(1);
  m.provenance = {{"source", "minkowski"}};
  return m;
}

bool NAdaptedMetric::has_grid_fields() const {
  for (const ScalarField* f : {&g1, &g2, &h3, &h4, &w1, &w2, &n1, &n2})
    if (f->is_grid_backed()) return true;
  if (omega && omega->is_grid_backed()) return true;
  if (qfactor && qfactor->is_grid_backed()) return true;
  return false;
}

MetricJets metric_jets(const NAdaptedMetric& m, const Point& p, double* qe) {
  MetricJets mj;
  mj.base = {m.g1.jet(p, qe), m.g2.jet(p, qe), m.h3.jet(p, qe), m.h4.jet(p, qe)};
  for (int i = 0; i < 2; ++i) {
    mj.N[i][T] = m.w(i).jet(p, qe);
    mj.N[i][Y] = m.n(i).jet(p, qe);
  }
  if (m.omega) {
    mj.omega = m.omega->jet(p, qe);
    mj.has_omega = true;
  }
  if (m.qfactor) {
    mj.q = m.qfactor->jet(p, qe);
    mj.has_q = true;
  }
  Jet2 q2 = mj.has_q ? mj.q * mj.q : Jet2(1.0);
  Jet2 w2 = mj.has_omega ? mj.omega * mj.omega : Jet2(1.0);
  mj.G[0] = mj.has_q ? q2 * mj.base[0] : mj.base[0];
  mj.G[1] = mj.has_q ? q2 * mj.base[1] : mj.base[1];
  Jet2 vf = mj.has_q || mj.has_omega ? q2 * w2 : Jet2(1.0);
  mj.G[2] = mj.has_q || mj.has_omega ? vf * mj.base[2] : mj.base[2];
  mj.G[3] = mj.has_q || mj.has_omega ? vf * mj.base[3] : mj.base[3];
  return mj;
}

Polarizations Polarizations::identity(Mode m) {
  Polarizations p;
  p.mode = m;
  if (m == Mode::Multiplicative) {
    p.etaN31 = p.etaN32 = p.etaN41 = p.etaN42 = ScalarField::constant(1);
  }
  return p;
}

SourceSpec::SourceSpec(ScalarField u2, ScalarField u4) : upsilon2(std::move(u2)), upsilon4(std::move(u4)) {
  if (upsilon4.depends_on(T) || upsilon4.depends_on(Y))
    fail(ErrorKind::Precondition, "upsilon4 must depend on (x1, x2) only");
  if (upsilon2.depends_on(Y)) fail(ErrorKind::Precondition, "upsilon2 must not depend on y");
}

namespace {
std::string where(const Point& p) {
  std::ostringstream os;
  os << "(x1=" << p[0] << ", x2=" << p[1] << ", t=" << p[2] << ", y=" << p[3] << ")";
  return os.str();
}
}  // namespace

SignatureReport check_signature(const NAdaptedMetric& m, const std::vector<Point>& pts) {
  SignatureReport r;
  for (const Point& p : pts) {
    ++r.probed;
    std::string bad;
    double g1 = m.g1.value(p), g2 = m.g2.value(p), h3 = m.h3.value(p), h4 = m.h4.value(p);
    if (!(g1 > 0)) bad = "g1 <= 0";
    else if (!(g2 > 0)) bad = "g2 <= 0";
    else if (!(h3 < 0)) bad = "h3 >= 0";
    else if (!(h4 > 0)) bad = "h4 <= 0";
    else if (m.omega && !(m.omega->value(p) > 0)) bad = "omega <= 0";
    if (!bad.empty()) {
      ++r.violations;
      if (r.first_violation.empty()) r.first_violation = bad + " at " + where(p);
    }
  }
  r.ok = r.violations == 0;
  return r;
}

NAdaptedMetric apply_polarizations(const NAdaptedMetric& prime, const Polarizations& pol, const Box& probe,
                                   int probe_n) {
  NAdaptedMetric t;
  t.g1 = pol.eta1 * prime.g1;
  t.g2 = pol.eta2 * prime.g2;
  t.h3 = pol.eta3 * prime.h3;
  t.h4 = pol.eta4 * prime.h4;
  const bool add = pol.mode == Polarizations::Mode::Additive;
  auto combine = [&](const ScalarField& eta, const ScalarField& base) { return add ? eta + base : eta * base; };
  t.w1 = combine(pol.etaN31, prime.w1);
  t.w2 = combine(pol.etaN32, prime.w2);
  t.n1 = combine(pol.etaN41, prime.n1);
  t.n2 = combine(pol.etaN42, prime.n2);
  t.omega = prime.omega;
  t.qfactor = prime.qfactor;
  Json pj;
  pj["mode"] = add ? "additive" : "multiplicative";
  pj["eta"] = {pol.eta1.text(), pol.eta2.text(), pol.eta3.text(), pol.eta4.text()};
  pj["etaN"] = {pol.etaN31.text(), pol.etaN32.text(), pol.etaN41.text(), pol.etaN42.text()};
  t.provenance = {{"prime", prime.provenance}, {"polarizations", pj}};

  SignatureReport sr;
  try {
    sr = check_signature(t, lattice(probe, probe_n));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Domain)
      fail(ErrorKind::Domain, std::string("prime and polarizations do not share the probe domain: ") + e.what());
    throw;
  }
  if (!sr.ok) fail(ErrorKind::Signature, "target metric violates (+,+,-,+): " + sr.first_violation);
  return t;
}

std::array<std::array<Jet2, 4>, 4> coordinate_matrix_jets(const NAdaptedMetric& m, const Point& p) {
  MetricJets mj = metric_jets(m, p);
  Jet2 q2 = mj.has_q ? mj.q * mj.q : Jet2(1.0);
  Jet2 w2 = mj.has_omega ? mj.omega * mj.omega : Jet2(1.0);
  Jet2 h3 = w2 * mj.base[2], h4 = w2 * mj.base[3];
  std::array<std::array<Jet2, 4>, 4> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Jet2 v = mj.N[i][T] * mj.N[j][T] * h3 + mj.N[i][Y] * mj.N[j][Y] * h4;
      if (i == j) v = v + mj.base[i];
      g[i][j] = q2 * v;
    }
  for (int i = 0; i < 2; ++i) {
    g[i][T] = g[T][i] = q2 * (mj.N[i][T] * h3);
    g[i][Y] = g[Y][i] = q2 * (mj.N[i][Y] * h4);
  }
  g[T][T] = q2 * h3;
  g[Y][Y] = q2 * h4;
  g[T][Y] = g[Y][T] = Jet2(0.0);
  return g;
}

Eigen::Matrix4d to_coordinate_matrix(const NAdaptedMetric& m, const Point& p) {
  auto g = coordinate_matrix_jets(m, p);
  Eigen::Matrix4d out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out(a, b) = g[a][b].v;
  return out;
}

Anholonomy anholonomy(const MetricJets& mj) {
  Anholonomy A;
  for (int a = 2; a < 4; ++a) {
    double v = mj.e(1, mj.N[0][a]) - mj.e(0, mj.N[1][a]);  // W^a_01 = e_1 N_0 - e_0 N_1
    A.W[a][0][1] = v;
    A.W[a][1][0] = -v;
  }
  for (int i = 0; i < 2; ++i)
    for (int a = 2; a < 4; ++a)
      for (int b = 2; b < 4; ++b) {
        A.W[b][i][a] = mj.N[i][b].g[a];
        A.W[b][a][i] = -mj.N[i][b].g[a];
      }
  return A;
}

Anholonomy anholonomy(const NAdaptedMetric& m, const Point& p) { return anholonomy(metric_jets(m, p)); }

double frame_apply(const NAdaptedMetric& m, const ScalarField& f, int i, const Point& p) {
  Jet2 fj = f.jet(p);
  return fj.g[i] - m.w(i).value(p) * fj.g[T] - m.n(i).value(p) * fj.g[Y];
}

// ---------------------------------------------------------------- JSON

Json grid_to_json(const GridTable& g) {
  Json j;
  static const char* names[] = {"x1", "x2", "t"};
  Json dom = Json::object();
  Json shape = Json::array();
  for (int a = 0; a < 3; ++a) {
    dom[names[a]] = {g.axes()[a].min, g.axes()[a].max};
    shape.push_back(g.axes()[a].count);
  }
  j["domain"] = dom;
  j["shape"] = shape;
  j["values"] = g.values();
  if (!g.dt().empty()) {
    j["dt"] = g.dt();
    j["dtt"] = g.dtt();
  }
  j["order"] = g.order();
  return j;
}

std::shared_ptr<GridTable> grid_from_json(const std::string& name, const Json& j) {
  static const char* names[] = {"x1", "x2", "t"};
  std::array<AxisSpec, 3> axes;
  if (!j.contains("shape") || !j.contains("values") || !j.contains("domain"))
    fail(ErrorKind::Config, "grid '" + name + "' needs domain, shape and values");
  for (int a = 0; a < 3; ++a) {
    axes[a].count = j["shape"].at(a).get<int>();
    auto d = j["domain"].at(names[a]);
    axes[a].min = d.at(0).get<double>();
    axes[a].max = d.at(1).get<double>();
  }
  std::vector<double> dt, dtt;
  if (j.contains("dt")) {
    dt = j["dt"].get<std::vector<double>>();
    dtt = j["dtt"].get<std::vector<double>>();
  }
  auto g = std::make_shared<GridTable>(name, axes, j["values"].get<std::vector<double>>(), dt, dtt);
  if (j.contains("order")) g->set_order(j["order"].get<int>());
  return g;
}

namespace {
const char* kCoeffNames[] = {"g1", "g2", "h3", "h4", "w1", "w2", "n1", "n2"};

std::array<ScalarField*, 8> coeffs(NAdaptedMetric& m) { return {&m.g1, &m.g2, &m.h3, &m.h4, &m.w1, &m.w2, &m.n1, &m.n2}; }
std::array<const ScalarField*, 8> coeffs(const NAdaptedMetric& m) {
  return {&m.g1, &m.g2, &m.h3, &m.h4, &m.w1, &m.w2, &m.n1, &m.n2};
}
}  // namespace

Json metric_to_json(const NAdaptedMetric& m) {
  Json doc;
  doc["signature"] = m.signature;
  Json co = Json::object();
  Constants consts;
  GridRegistry grids;
  auto put = [&](const char* key, const ScalarField& f) {
    for (auto& [k, v] : f.constants()) consts[k] = v;
    const Node& r = f.expr().root();
    if (r.kind == NodeKind::Grid) {
      co[key] = grid_to_json(*r.grid);
      return;
    }
    f.expr().collect_grids(grids);
    co[key] = f.text();
  };
  auto cs = coeffs(m);
  for (int i = 0; i < 8; ++i) put(kCoeffNames[i], *cs[i]);
  if (m.omega) put("omega", *m.omega);
  if (m.qfactor) put("qfactor", *m.qfactor);
  doc["coefficients"] = co;
  doc["constants"] = consts;
  if (!grids.empty()) {
    Json gj = Json::object();
    for (auto& [k, g] : grids) gj[k] = grid_to_json(*g);
    doc["grids"] = gj;
  }
  doc["provenance"] = m.provenance;
  return doc;
}

NAdaptedMetric metric_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("coefficients"))
    fail(ErrorKind::Config, "metric document needs a 'coefficients' object");
  Constants consts;
  if (doc.contains("constants"))
    for (auto& [k, v] : doc["constants"].items()) consts[k] = v.get<double>();
  GridRegistry grids;
  if (doc.contains("grids"))
    for (auto& [k, v] : doc["grids"].items()) grids[k] = grid_from_json(k, v);
  ParseOptions opts;
  opts.extensions = true;
  opts.grids = &grids;
  auto cp = std::make_shared<const Constants>(consts);
  auto read = [&](const std::string& key, const Json& v) -> ScalarField {
    if (v.is_string()) {
      try {
        return ScalarField(parse(v.get<std::string>(), *cp, opts), cp);
      } catch (const Error& e) {
        throw Error(e.kind(), "coefficient '" + key + "': " + e.what());
      }
    }
    if (v.is_number()) return ScalarField::constant(v.get<double>());
    if (v.is_object()) return ScalarField::from_grid(grid_from_json(key, v));
    fail(ErrorKind::Config, "coefficient '" + key + "' must be an expression string, number or grid object");
  };
  NAdaptedMetric m;
  const Json& co = doc["coefficients"];
  auto cs = coeffs(m);
  for (int i = 0; i < 8; ++i) {
    if (!co.contains(kCoeffNames[i])) {
      // N-coefficients default to zero; the diagonal is required
      if (i < 4) fail(ErrorKind::Config, std::string("metric document lacks coefficient ") + kCoeffNames[i]);
      continue;
    }
    *cs[i] = read(kCoeffNames[i], co[kCoeffNames[i]]);
  }
  if (co.contains("omega")) m.omega = read("omega", co["omega"]);
  if (co.contains("qfactor")) m.qfactor = read("qfactor", co["qfactor"]);
  if (doc.contains("signature")) m.signature = doc["signature"].get<std::string>();
  if (doc.contains("provenance")) m.provenance = doc["provenance"];
  for (const ScalarField* f : coeffs(static_cast<const NAdaptedMetric&>(m)))
    if (f->depends_on(Y)) fail(ErrorKind::Precondition, "only omega may depend on y (Killing ansatz)");
  return m;
}

}  // namespace anholo
