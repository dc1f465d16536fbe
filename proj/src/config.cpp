#include "anholo/config.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <toml.hpp>

#include "anholo/catalog.hpp"
#include "anholo/cli.hpp"
#include "anholo/error.hpp"

namespace anholo {

std::string hash_hex(const std::string& text) {
  // FNV-1a, 64 bit
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

using View = toml::node_view<const toml::node>;

struct Reader {
  const Constants& consts;
  std::string section;

  [[noreturn]] void bad(const std::string& key, const std::string& msg) const {
    fail(ErrorKind::Config, "[" + section + "]." + key + ": " + msg);
  }

  std::string where(const toml::node& n) const {
    auto s = n.source().begin;
    return "line " + std::to_string(s.line) + ", column " + std::to_string(s.column);
  }

  ScalarField field_from(const toml::node& n, const std::string& key) const {
    if (auto s = n.value<std::string>()) {
      ParseOptions o;
      o.extensions = true;
      try {
        return ScalarField::from_text(*s, consts, o);
      } catch (const Error& e) {
        fail(e.kind(), "[" + section + "]." + key + " (" + where(n) + "): " + e.what());
      }
    }
    if (auto d = n.value<double>()) return ScalarField::constant(*d);
    bad(key, "expected an expression string or a number (" + where(n) + ")");
  }

  ScalarField field(View t, const std::string& key, ScalarField def = {}) const {
    auto v = t[key];
    if (!v) return def;
    return field_from(*v.node(), key);
  }

  bool has(View t, const std::string& key) const { return static_cast<bool>(t[key]); }

  double number(View t, const std::string& key, double def) const {
    auto v = t[key];
    if (!v) return def;
    if (auto d = v.value<double>()) return *d;
    bad(key, "expected a number (" + where(*v.node()) + ")");
  }

  int integer(View t, const std::string& key, int def) const {
    auto v = t[key];
    if (!v) return def;
    if (auto d = v.value<int64_t>()) return static_cast<int>(*d);
    bad(key, "expected an integer (" + where(*v.node()) + ")");
  }

  std::string string(View t, const std::string& key, const std::string& def) const {
    auto v = t[key];
    if (!v) return def;
    if (auto s = v.value<std::string>()) return *s;
    bad(key, "expected a string (" + where(*v.node()) + ")");
  }

  std::vector<double> numbers(View t, const std::string& key, size_t n) const {
    auto v = t[key];
    const toml::array* a = v.as_array();
    if (!a || a->size() != n) bad(key, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (auto& e : *a) {
      auto d = e.value<double>();
      if (!d) bad(key, "expected numbers (" + where(e) + ")");
      out.push_back(*d);
    }
    return out;
  }

  FieldPair pair(View t, const std::string& key) const {
    FieldPair p;
    auto v = t[key];
    if (!v) return p;
    const toml::array* a = v.as_array();
    if (!a || a->size() != 2) bad(key, "expected an array of two expressions");
    for (size_t i = 0; i < 2; ++i) p[i] = field_from(*a->get(i), key + "[" + std::to_string(i) + "]");
    return p;
  }

  Box box(View t, const std::string& key, Box def) const {
    auto v = t[key];
    if (!v) return def;
    if (!v.is_table()) bad(key, "expected a table {x1 = [lo, hi], x2 = ..., t = ...}");
    const char* names[3] = {"x1", "x2", "t"};
    for (int a = 0; a < 3; ++a)
      if (v[names[a]]) {
        auto r = numbers(v, names[a], 2);
        def.lo[a] = r[0];
        def.hi[a] = r[1];
      }
    return def;
  }

  AxisSpec axis(View t, const std::string& key, AxisSpec def) const {
    if (!has(t, key)) return def;
    auto r = numbers(t, key, 3);
    return AxisSpec{r[0], r[1], static_cast<int>(r[2])};
  }
};

CatalogParams catalog_params(const Reader& r, View t) {
  CatalogParams p;
  p.p1 = r.number(t, "p1", p.p1);
  p.p2 = r.number(t, "p2", p.p2);
  p.p3 = r.number(t, "p3", p.p3);
  p.kappa = r.integer(t, "kappa", p.kappa);
  if (auto v = t["a"]) {
    if (auto s = v.value<std::string>())
      p.a = *s;
    else if (auto d = v.value<double>()) {
      std::ostringstream os;
      os << std::setprecision(17) << *d;
      p.a = os.str();
    } else {
      r.bad("a", "expected an expression string or a number");
    }
  }
  return p;
}

void read_psi(const Reader& r, View g, PsiChoice& psi) {
  auto v = g["psi"];
  if (v && v.value<std::string>() && *v.value<std::string>() == "solve") {
    View p = g["poisson"];
    PoissonProblem pp;
    auto d = r.numbers(p, "domain", 4);
    pp.domain = Rect{d[0], d[1], d[2], d[3]};
    pp.bc = r.field(p, "bc");
    if (r.has(p, "n")) {
      auto n = r.numbers(p, "n", 2);
      pp.n1 = static_cast<int>(n[0]);
      pp.n2 = static_cast<int>(n[1]);
    }
    psi.solve = pp;
  } else {
    psi.expr = r.field(g, "psi");
  }
}

}  // namespace

Config parse_config(const std::string& text, const std::string& origin) {
  toml::table doc;
  try {
    doc = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    auto s = e.source().begin;
    fail(ErrorKind::Config, origin + ": line " + std::to_string(s.line) + ", column " + std::to_string(s.column) +
                                ": " + std::string(e.description()));
  }
  Config c;
  c.text = text;
  for (auto&& [k, v] : doc) {
    const std::string key(k.str());
    static const char* known[] = {"constants", "prime",   "polarizations", "generator",
                                  "source",    "grid",    "tolerances",    "output"};
    bool ok = false;
    for (auto* n : known) ok = ok || key == n;
    if (!ok) fail(ErrorKind::Config, origin + ": unknown section [" + key + "]");
  }
  if (auto t = doc["constants"].as_table())
    for (auto&& [k, v] : *t) {
      auto d = v.value<double>();
      if (!d) fail(ErrorKind::Config, "[constants]." + std::string(k.str()) + ": expected a number");
      c.constants[std::string(k.str())] = *d;
    }
  const View root{doc};

  if (root["source"]) {
    Reader r{c.constants, "source"};
    View s = root["source"];
    try {
      c.source = SourceSpec(r.field(s, "upsilon2"), r.field(s, "upsilon4"));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      fail(ErrorKind::Config, std::string("[source]: ") + e.what());
    }
  }
  const SourceSpec src = c.source.value_or(SourceSpec{});

  if (root["prime"]) {
    Reader r{c.constants, "prime"};
    View p = root["prime"];
    if (r.has(p, "catalog")) {
      c.prime = catalog_by_name(r.string(p, "catalog", ""), catalog_params(r, p), c.constants);
    } else {
      NAdaptedMetric m;
      for (const char* k : {"g1", "g2", "h3", "h4"})
        if (!r.has(p, k)) r.bad(k, "required when no catalog entry is named");
      m.g1 = r.field(p, "g1");
      m.g2 = r.field(p, "g2");
      m.h3 = r.field(p, "h3");
      m.h4 = r.field(p, "h4");
      m.w1 = r.field(p, "w1");
      m.w2 = r.field(p, "w2");
      m.n1 = r.field(p, "n1");
      m.n2 = r.field(p, "n2");
      if (r.has(p, "omega")) m.omega = r.field(p, "omega");
      if (r.has(p, "qfactor")) m.qfactor = r.field(p, "qfactor");
      m.provenance = Json{{"prime", "explicit"}};
      c.prime = m;
    }
  }

  if (root["polarizations"]) {
    Reader r{c.constants, "polarizations"};
    View p = root["polarizations"];
    std::string mode = r.string(p, "mode", "additive");
    if (mode != "additive" && mode != "multiplicative") r.bad("mode", "expected additive or multiplicative");
    Polarizations pol = Polarizations::identity(mode == "additive" ? Polarizations::Mode::Additive
                                                                    : Polarizations::Mode::Multiplicative);
    pol.eta1 = r.field(p, "eta1", pol.eta1);
    pol.eta2 = r.field(p, "eta2", pol.eta2);
    pol.eta3 = r.field(p, "eta3", pol.eta3);
    pol.eta4 = r.field(p, "eta4", pol.eta4);
    pol.etaN31 = r.field(p, "etaN31", pol.etaN31);
    pol.etaN32 = r.field(p, "etaN32", pol.etaN32);
    pol.etaN41 = r.field(p, "etaN41", pol.etaN41);
    pol.etaN42 = r.field(p, "etaN42", pol.etaN42);
    c.polarizations = pol;
  }

  if (root["generator"]) {
    Reader r{c.constants, "generator"};
    View g = root["generator"];
    c.generator = r.string(g, "type", "");
    c.quad.t0 = r.number(g, "t0", c.quad.t0);
    c.quad.abs_tol = r.number(g, "abs_tol", c.quad.abs_tol);
    c.quad.rel_tol = r.number(g, "rel_tol", c.quad.rel_tol);
    c.quad.max_subdivisions = r.integer(g, "max_subdivisions", c.quad.max_subdivisions);
    Box probe = r.box(g, "probe", Box{});
    int probe_n = r.integer(g, "probe_n", 5);
    const std::string& ty = c.generator;
    if (ty == "type1") {
      auto& s = c.type1;
      s.phi = r.field(g, "phi");
      s.source = src;
      s.h4_0 = r.field(g, "h4_0");
      s.n1_fns = r.pair(g, "n1");
      s.n2_fns = r.pair(g, "n2");
      s.sign3 = r.integer(g, "sign3", 0);
      s.sign4 = r.integer(g, "sign4", 0);
      read_psi(r, g, s.psi);
      s.probe = probe;
      s.probe_n = probe_n;
    } else if (ty == "type2") {
      auto& s = c.type2;
      s.h3 = r.field(g, "h3", s.h3);
      s.w1 = r.field(g, "w1");
      s.w2 = r.field(g, "w2");
      s.h4_0 = r.field(g, "h4_0", s.h4_0);
      s.n1_fns = r.pair(g, "n1");
      s.n2_fns = r.pair(g, "n2");
      s.source = src;
      read_psi(r, g, s.psi);
      s.probe = probe;
      s.probe_n = probe_n;
    } else if (ty == "type3") {
      auto& s = c.type3;
      s.h3_0 = r.field(g, "h3_0", s.h3_0);
      s.h4_init = r.field(g, "h4_init", s.h4_init);
      s.h4s_init = r.field(g, "h4s_init", s.h4s_init);
      s.n1_fns = r.pair(g, "n1");
      s.n2_fns = r.pair(g, "n2");
      s.source = src;
      read_psi(r, g, s.psi);
      if (r.has(g, "t_range")) {
        auto tr = r.numbers(g, "t_range", 2);
        s.t_min = tr[0];
        s.t_max = tr[1];
      } else {
        s.t_min = probe.lo[T];
        s.t_max = probe.hi[T];
      }
      s.nt = r.integer(g, "nt", s.nt);
      s.x1 = r.axis(g, "x1", s.x1);
      s.x2 = r.axis(g, "x2", s.x2);
      s.ode.abs_tol = r.number(g, "ode_abs_tol", s.ode.abs_tol);
      s.ode.rel_tol = r.number(g, "ode_rel_tol", s.ode.rel_tol);
      s.probe = probe;
      s.probe_n = probe_n;
    } else if (ty == "type4") {
      auto& s = c.type4;
      s.f = r.field(g, "f");
      s.source = src;
      s.h0 = r.number(g, "h0", s.h0);
      s.sigma40 = r.number(g, "sigma40", s.sigma40);
      s.w1 = r.field(g, "w1");
      s.w2 = r.field(g, "w2");
      s.n1_fns = r.pair(g, "n1");
      s.n2_fns = r.pair(g, "n2");
      read_psi(r, g, s.psi);
      s.probe = probe;
      s.probe_n = probe_n;
    } else if (ty == "desitter") {
      auto& s = c.desitter;
      s.a0 = r.number(g, "a0", s.a0);
      s.H = r.number(g, "H", s.H);
      s.tw = r.pair(g, "tw");
      s.sw = r.pair(g, "sw");
      s.eta3 = r.field(g, "eta3", s.eta3);
      s.h4_0 = r.field(g, "h4_0", s.h4_0);
      s.n1_fns = r.pair(g, "n1");
      s.probe = probe;
      s.probe_n = probe_n;
    } else if (ty == "prime") {
      if (!c.prime) r.bad("type", "'prime' needs a [prime] section");
    } else {
      r.bad("type", "unknown generator '" + ty + "' (type1, type2, type3, type4, desitter, prime)");
    }
  }

  if (root["grid"]) {
    Reader r{c.constants, "grid"};
    View g = root["grid"];
    std::string spec = r.string(g, "spec", "");
    for (const char* ax : {"x1", "x2", "t", "y"})
      if (r.has(g, ax)) {
        auto v = r.numbers(g, ax, 3);
        std::ostringstream os;
        os << std::setprecision(17) << (spec.empty() ? "" : ",") << ax << "=" << v[0] << ":" << v[1] << ":"
           << static_cast<int>(v[2]);
        spec += os.str();
      }
    if (!spec.empty()) c.grid = spec;
    c.interior_margin = r.number(g, "margin", 0.0);
  }
  if (root["tolerances"]) {
    Reader r{c.constants, "tolerances"};
    View t = root["tolerances"];
    if (r.has(t, "residual")) c.tol_residual = r.number(t, "residual", 0);
    if (r.has(t, "lc")) c.tol_lc = r.number(t, "lc", 0);
    c.failure_budget = r.integer(t, "failure_budget", 0);
  }
  if (root["output"]) {
    Reader r{c.constants, "output"};
    View o = root["output"];
    c.out_metric = r.string(o, "metric", "");
    c.out_report = r.string(o, "report", "");
    c.out_csv = r.string(o, "csv", "");
    if (r.has(o, "mode")) c.mode = r.string(o, "mode", "");
  }
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

GeneratedSolution build_from_config(const Config& c) {
  GeneratedSolution s;
  const std::string& ty = c.generator;
  if (ty == "type1") s = generate_type1(c.type1, c.quad);
  else if (ty == "type2") s = generate_type2(c.type2, c.quad);
  else if (ty == "type3") s = generate_type3(c.type3, c.quad);
  else if (ty == "type4") s = generate_type4(c.type4, c.quad);
  else if (ty == "desitter") s = build_desitter(c.desitter);
  else if (c.prime) {
    s.type = "prime";
    s.metric = c.polarizations ? apply_polarizations(*c.prime, *c.polarizations) : *c.prime;
    if (!s.metric.provenance.is_object()) s.metric.provenance = Json::object();
    s.metric.provenance["type"] = c.polarizations ? "polarized-prime" : "prime";
    if (c.prime->provenance.contains("domain")) s.metric.provenance["domain"] = c.prime->provenance["domain"];
  } else {
    fail(ErrorKind::Config, "config names neither a [generator] nor a [prime] metric");
  }
  s.metric.provenance["spec_hash"] = hash_hex(c.text);
  if (!s.diagnostics.empty()) s.metric.provenance["diagnostics"] = s.diagnostics;
  if (s.q_residual) s.metric.provenance["q_residual"] = *s.q_residual;
  return s;
}

}  // namespace anholo
