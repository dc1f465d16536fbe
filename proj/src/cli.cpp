#include "anholo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anholo/catalog.hpp"
#include "anholo/config.hpp"
#include "anholo/error.hpp"
#include "anholo/report.hpp"

namespace anholo {

NAdaptedMetric catalog_by_name(const std::string& name, const CatalogParams& p, const Constants& c) {
  if (name == "kasner") return kasner_metric({p.p1, p.p2, p.p3});
  if (name == "godel") {
    double a = eval_value(parse(p.a, c), Point{0, 0, 0, 0}, c);
    return godel_metric(a).metric;
  }
  if (name == "frw" || name == "frw-cartesian") {
    ScalarField a = ScalarField::from_text(p.a, c);
    bool cart = name == "frw-cartesian";
    Box probe;
    return frw_metric(a, p.kappa, cart ? FrwChart::Cartesian : FrwChart::Spherical, probe);
  }
  fail(ErrorKind::Config, "unknown catalog entry '" + name + "' (frw, frw-cartesian, kasner, godel)");
}

namespace {

struct Options {
  std::string config, out, mode, grid, csv, name, metric_path;
  std::optional<double> tol;
  std::optional<long> seed;
  CatalogParams cat;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Config, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) fail(ErrorKind::Io, "cannot write '" + path + "'");
  f << text;
}

Json metric_document(const NAdaptedMetric& m, const SourceSpec* src) {
  Json doc = metric_to_json(m);
  if (src) {
    doc["source"] = Json{{"upsilon2", src->upsilon2.text()}, {"upsilon4", src->upsilon4.text()}};
    for (const ScalarField* f : {&src->upsilon2, &src->upsilon4})
      for (auto& [k, v] : f->constants()) doc["constants"][k] = v;
  }
  return doc;
}

SourceSpec source_from_doc(const Json& doc) {
  if (!doc.contains("source")) return {};
  Constants consts;
  if (doc.contains("constants"))
    for (auto& [k, v] : doc["constants"].items()) consts[k] = v.get<double>();
  ParseOptions o;
  o.extensions = true;
  auto f = [&](const char* key) {
    const Json& v = doc["source"][key];
    if (v.is_number()) return ScalarField::constant(v.get<double>());
    return ScalarField::from_text(v.get<std::string>(), consts, o);
  };
  return SourceSpec(f("upsilon2"), f("upsilon4"));
}

struct Loaded {
  NAdaptedMetric metric;
  SourceSpec source;
  std::optional<Config> config;
};

Loaded load_metric(const Options& o) {
  Loaded l;
  if (!o.config.empty()) l.config = load_config(o.config);
  int given = !o.metric_path.empty() + !o.name.empty();
  if (given > 1) fail(ErrorKind::Config, "give either a metric document or --name, not both");
  if (!o.metric_path.empty()) {
    Json doc = read_json(o.metric_path);
    l.metric = metric_from_json(doc);
    l.source = source_from_doc(doc);
  } else if (!o.name.empty()) {
    l.metric = catalog_by_name(o.name, o.cat, l.config ? l.config->constants : Constants{});
  } else if (l.config) {
    l.metric = build_from_config(*l.config).metric;
  } else {
    fail(ErrorKind::Config, "no metric: give a metric document, --name, or --config");
  }
  if (l.config && l.config->source) l.source = *l.config->source;
  return l;
}

GridSpec grid_for(const Loaded& l, const Options& o) {
  std::string spec = o.grid;
  if (spec.empty() && l.config && l.config->grid) spec = *l.config->grid;
  GridSpec g = GridSpec::defaults_for(l.metric);
  if (spec.empty()) {
    // no grid given: 5 points per axis over the recorded domain
    Box b;
    const Json& p = l.metric.provenance;
    const char* names[3] = {"x1", "x2", "t"};
    for (int a = 0; a < 3; ++a)
      if (p.contains("domain") && p["domain"].contains(names[a])) {
        b.lo[a] = p["domain"][names[a]][0].get<double>();
        b.hi[a] = p["domain"][names[a]][1].get<double>();
      }
    for (int a = 0; a < 3; ++a) g.axes[a] = b.lo[a] < b.hi[a] ? AxisSpec{b.lo[a], b.hi[a], 5} : AxisSpec{b.lo[a], b.lo[a], 1};
  } else {
    g.parse(spec);
  }
  if (l.config) g.interior_margin = l.config->interior_margin;
  g.validate();
  return g;
}

Tolerances tolerances_for(const Loaded& l, const Options& o) {
  Tolerances t;
  t.residual = l.metric.has_grid_fields() ? 1e-5 : 1e-8;
  t.lc = t.residual;
  if (l.config) {
    if (l.config->tol_residual) t.residual = *l.config->tol_residual;
    if (l.config->tol_lc) t.lc = *l.config->tol_lc;
    t.failure_budget = l.config->failure_budget;
  }
  if (o.tol) t.residual = t.lc = *o.tol;
  return t;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) fail(ErrorKind::Config, "generate needs --config");
  Config c = load_config(o.config);
  GeneratedSolution s = build_from_config(c);
  Json doc = metric_document(s.metric, c.source ? &*c.source : nullptr);
  std::string path = !o.out.empty() ? o.out : c.out_metric;
  write_text(path, doc.dump(2) + "\n", out);
  if (s.lc && !path.empty())
    err << "lc residual max " << s.lc->max() << (s.q_residual ? ", q residual " + std::to_string(*s.q_residual) : "")
        << "\n";
  return 0;
}

int cmd_catalog(const Options& o, std::ostream& out) {
  if (o.name.empty()) fail(ErrorKind::Config, "catalog needs --name");
  Constants consts;
  if (!o.config.empty()) consts = load_config(o.config).constants;
  NAdaptedMetric m = catalog_by_name(o.name, o.cat, consts);
  write_text(o.out, metric_to_json(m).dump(2) + "\n", out);
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out, bool lc_only) {
  Loaded l = load_metric(o);
  GridSpec g = grid_for(l, o);
  Tolerances tol = tolerances_for(l, o);
  std::string mode_s = !o.mode.empty() ? o.mode : (l.config && l.config->mode ? *l.config->mode : "dconn");
  Mode mode = mode_from_string(mode_s);
  ResidualReport rep;
  if (lc_only) {
    rep.provenance = l.metric.provenance;
    rep.mode = mode;
    rep.tolerances = tol;
    rep.points = g.points();
    rep.source = Json{{"upsilon2", l.source.upsilon2.text()}, {"upsilon4", l.source.upsilon4.text()}};
    rep.lc = lc_residuals(l.metric, rep.points);
    rep.lc_exact_max = lc_exact(l.metric, rep.points).max();
  } else {
    rep = grid_report(l.metric, l.source, g, mode, tol);
  }
  Json j = report_to_json(rep, lc_only);
  if (o.seed) j["seed"] = *o.seed;
  std::string path = !o.out.empty() ? o.out : (l.config ? l.config->out_report : "");
  write_text(path, j.dump(2) + "\n", out);
  std::string csv = !o.csv.empty() ? o.csv : (l.config ? l.config->out_csv : "");
  if (!csv.empty() && !lc_only) {
    std::ofstream f(csv);
    if (!f) fail(ErrorKind::Io, "cannot write '" + csv + "'");
    write_csv(rep, f);
  }
  bool pass = lc_only ? lc_pass(rep) : rep.pass;
  return pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"anholo: generate and verify off-diagonal cosmological metrics"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "TOML config document");
    s->add_option("--out", o.out, "output path (default stdout)");
  };
  auto add_catalog = [&](CLI::App* s) {
    s->add_option("--name", o.name, "catalog entry: frw, frw-cartesian, kasner, godel");
    s->add_option("--p1", o.cat.p1, "Kasner exponent p1");
    s->add_option("--p2", o.cat.p2, "Kasner exponent p2");
    s->add_option("--p3", o.cat.p3, "Kasner exponent p3");
    s->add_option("--a", o.cat.a, "FRW scale factor a(t), or the Godel parameter");
    s->add_option("--kappa", o.cat.kappa, "FRW curvature index -1, 0, 1");
  };
  auto add_check = [&](CLI::App* s) {
    s->add_option("metric", o.metric_path, "metric JSON document");
    s->add_option("--mode", o.mode, "dconn or coordinate");
    s->add_option("--grid", o.grid, "AXIS=min:max:count[,...]");
    s->add_option("--tol", o.tol, "residual tolerance");
    s->add_option("--seed", o.seed, "seed recorded in the report");
  };
  CLI::App* gen = app.add_subcommand("generate", "run a generator from a config document");
  add_common(gen);
  CLI::App* ver = app.add_subcommand("verify", "field-equation residual report");
  add_common(ver);
  add_catalog(ver);
  add_check(ver);
  ver->add_option("--csv", o.csv, "per-point residual dump");
  CLI::App* cat = app.add_subcommand("catalog", "emit a catalog metric document");
  add_common(cat);
  add_catalog(cat);
  CLI::App* lcc = app.add_subcommand("lc-check", "Levi-Civita extraction residuals");
  add_common(lcc);
  add_catalog(lcc);
  add_check(lcc);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }
  try {
    if (gen->parsed()) return cmd_generate(o, out, err);
    if (cat->parsed()) return cmd_catalog(o, out);
    if (ver->parsed()) return cmd_verify(o, out, false);
    if (lcc->parsed()) return cmd_verify(o, out, true);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace anholo
