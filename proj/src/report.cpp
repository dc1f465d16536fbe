#include "anholo/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "anholo/connection.hpp"
#include "anholo/error.hpp"

namespace anholo {

void GridSpec::parse(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "grid entry '" + item + "' is not AXIS=min:max:count");
    std::string name = item.substr(0, eq);
    int axis = name == "x1" ? X1 : name == "x2" ? X2 : name == "t" ? T : name == "y" ? Y : -1;
    if (axis < 0) fail(ErrorKind::Config, "unknown grid axis '" + name + "'");
    std::string rest = item.substr(eq + 1);
    double lo, hi;
    int n;
    char c1, c2;
    std::istringstream rs(rest);
    if (!(rs >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || !(rs >> std::ws).eof())
      fail(ErrorKind::Config, "grid entry '" + item + "' is not AXIS=min:max:count");
    axes[axis] = AxisSpec{lo, hi, n};
  }
  validate();
}

void GridSpec::validate() const {
  for (int a = 0; a < 4; ++a) {
    const auto& ax = axes[a];
    if (ax.count == 1) continue;
    if (ax.count < 3) fail(ErrorKind::Config, std::string("grid axis ") + axis_name(a) + " needs count >= 3");
    if (!(ax.min < ax.max)) fail(ErrorKind::Config, std::string("grid axis ") + axis_name(a) + " needs min < max");
  }
  if (!(interior_margin >= 0 && interior_margin < 0.5)) fail(ErrorKind::Config, "interior margin must be in [0, 0.5)");
}

std::vector<Point> GridSpec::points() const {
  std::array<std::vector<double>, 4> v;
  for (int a = 0; a < 4; ++a) {
    const auto& ax = axes[a];
    if (ax.count == 1) {
      v[a] = {ax.min};
      continue;
    }
    double span = ax.max - ax.min;
    for (int i = 0; i < ax.count; ++i) {
      double x = ax.node(i);
      if (x < ax.min + interior_margin * span - 1e-12 || x > ax.max - interior_margin * span + 1e-12) continue;
      v[a].push_back(x);
    }
  }
  std::vector<Point> out;
  for (double a : v[0])
    for (double b : v[1])
      for (double c : v[2])
        for (double d : v[3]) out.push_back({a, b, c, d});
  return out;
}

GridSpec GridSpec::defaults_for(const NAdaptedMetric& m) {
  GridSpec g;
  const Json& dom = m.provenance.contains("domain") ? m.provenance["domain"] : Json();
  const char* names[3] = {"x1", "x2", "t"};
  for (int a = 0; a < 3; ++a)
    if (dom.is_object() && dom.contains(names[a]) && dom[names[a]].is_array() && dom[names[a]].size() == 2) {
      double mid = 0.5 * (dom[names[a]][0].get<double>() + dom[names[a]][1].get<double>());
      g.axes[a] = AxisSpec{mid, mid, 1};
    }
  return g;
}

const char* to_string(Mode m) { return m == Mode::DConn ? "dconn" : "coordinate"; }

Mode mode_from_string(const std::string& s) {
  if (s == "dconn" || s == "canonical-d") return Mode::DConn;
  if (s == "coordinate" || s == "levi-civita-coordinate") return Mode::Coordinate;
  fail(ErrorKind::Config, "unknown mode '" + s + "' (expected dconn or coordinate)");
}

int thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ANHOLO_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return std::min<int>(n, static_cast<int>(hw) * 4);
  }
  return static_cast<int>(hw);
}

namespace {

const std::vector<std::string>& names_for(Mode m) {
  static const std::vector<std::string> d{"eq1", "eq2", "eq3_1", "eq3_2", "eq4_1", "eq4_2"};
  static const std::vector<std::string> c{"G11", "G22", "G33", "G44", "G_offdiag"};
  return m == Mode::DConn ? d : c;
}

std::vector<double> evaluate(const NAdaptedMetric& m, const SourceSpec& src, Mode mode, const Point& p) {
  const double u2 = src.upsilon2.value(p), u4 = src.upsilon4.value(p);
  if (mode == Mode::DConn) {
    auto r = dricci_blocks(m, p);
    return {r.R11 + u4, r.R33 + u2, r.R3k[0], r.R3k[1], r.R4k[0], r.R4k[1]};
  }
  auto cc = coordinate_einstein(m, p);
  Eigen::Matrix4d G = to_nadapted_mixed(metric_jets(m, p), cc.einstein_mixed);
  const double target[4] = {u2, u2, u4, u4};
  std::vector<double> out(5);
  double off = 0;
  for (int a = 0; a < 4; ++a) {
    out[a] = G(a, a) - target[a];
    for (int b = 0; b < 4; ++b)
      if (a != b) off = std::max(off, std::fabs(G(a, b)));
  }
  out[4] = off;
  return out;
}

}  // namespace

ResidualReport grid_report(const NAdaptedMetric& m, const SourceSpec& src, const GridSpec& grid, Mode mode,
                           const Tolerances& tol) {
  auto t_start = std::chrono::steady_clock::now();
  grid.validate();
  ResidualReport rep;
  rep.provenance = m.provenance;
  rep.mode = mode;
  rep.tolerances = tol;
  rep.source = Json{{"upsilon2", src.upsilon2.text()}, {"upsilon4", src.upsilon4.text()}};
  rep.points = grid.points();
  const auto& names = names_for(mode);
  const size_t np = rep.points.size();
  rep.rows.assign(np, std::vector<double>(names.size(), std::numeric_limits<double>::quiet_NaN()));
  std::vector<std::string> errors(np);

  // each worker owns a strided slice; results land in fixed slots
  const int nt = std::max(1, std::min<int>(thread_count(), static_cast<int>(np)));
  auto work = [&](int tid) {
    for (size_t i = tid; i < np; i += nt) {
      try {
        rep.rows[i] = evaluate(m, src, mode, rep.points[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();

  rep.equations.resize(names.size());
  for (size_t k = 0; k < names.size(); ++k) rep.equations[k].name = names[k];
  for (size_t i = 0; i < np; ++i) {
    if (!errors[i].empty()) {
      ++rep.failures;
      if (rep.failure_messages.size() < 10) rep.failure_messages.push_back(errors[i]);
      continue;
    }
    for (size_t k = 0; k < names.size(); ++k) rep.equations[k].stat.add(rep.rows[i][k], rep.points[i]);
  }
  for (auto& e : rep.equations) e.stat.finish();

  try {
    rep.lc = lc_residuals(m, rep.points);
    rep.lc_exact_max = lc_exact(m, rep.points).max();
  } catch (const Error& e) {
    rep.lc_ok = false;
    rep.failure_messages.push_back(std::string("lc block: ") + e.what());
  }

  bool ok = rep.failures <= tol.failure_budget && rep.failures < static_cast<int>(np);
  for (auto& e : rep.equations) ok = ok && e.stat.max_abs <= tol.residual;
  rep.pass = ok;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

bool lc_pass(const ResidualReport& r) { return r.lc_ok && r.lc.pass(r.tolerances.lc); }

namespace {

Json stat_json(const std::string& name, const ResidualStat& s) {
  return Json{{"name", name}, {"max_abs", s.max_abs}, {"mean_abs", s.mean_abs},
              {"argmax", {s.argmax[0], s.argmax[1], s.argmax[2], s.argmax[3]}}};
}

}  // namespace

Json report_to_json(const ResidualReport& r, bool lc_only) {
  Json j;
  j["provenance"] = r.provenance;
  j["mode"] = to_string(r.mode);
  if (!lc_only) {
    j["equations"] = Json::array();
    for (auto& e : r.equations) j["equations"].push_back(stat_json(e.name, e.stat));
  }
  if (r.lc_ok)
    j["lc"] = Json{{"w_star", r.lc.w_star.max_abs}, {"w_curl", r.lc.w_curl.max_abs},
                   {"n_star", r.lc.n_star.max_abs}, {"n_curl", r.lc.n_curl.max_abs}};
  else
    j["lc"] = nullptr;
  j["lc_exact"] = r.lc_ok ? Json(r.lc_exact_max) : Json(nullptr);
  j["source"] = r.source;
  j["pass"] = lc_only ? lc_pass(r) : r.pass;
  j["tolerances"] = Json{{"residual", r.tolerances.residual}, {"lc", r.tolerances.lc},
                         {"failure_budget", r.tolerances.failure_budget}};
  j["failures"] = r.failures;
  if (!r.failure_messages.empty()) j["failure_messages"] = r.failure_messages;
  j["points"] = r.points.size();
  j["wall_time"] = r.wall_time;
  return j;
}

void write_csv(const ResidualReport& r, std::ostream& out) {
  out << "x1,x2,t,y";
  for (auto& e : r.equations) out << ',' << e.name;
  out << '\n' << std::setprecision(17);
  for (size_t i = 0; i < r.points.size(); ++i) {
    const Point& p = r.points[i];
    out << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3];
    for (double v : r.rows[i]) out << ',' << v;
    out << '\n';
  }
}

}  // namespace anholo
