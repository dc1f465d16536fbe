#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "anholo/cli.hpp"
#include "anholo/config.hpp"
#include "anholo/error.hpp"
#include "anholo/report.hpp"

using namespace anholo;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("anholo_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  Json report(const std::string& name) const { return Json::parse(read(name)); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

const char* kType1 = R"toml(
[constants]
e2 = 7.38905609893065

[generator]
type = "type1"
phi = "t"
h4_0 = "2*e2"
n1 = ["0.3*x2", "0.1"]
n2 = ["0.2", "0"]

[source]
upsilon2 = "-1"
upsilon4 = "0"

[grid]
x1 = [0.1, 0.9, 4]
x2 = [0.1, 0.9, 4]
t = [1, 2, 5]
)toml";

}  // namespace

TEST_F(CliTest, KasnerVacuumPassesInCoordinateMode) {
  ASSERT_EQ(run({"catalog", "--name", "kasner", "--p1", "0.6666666667", "--p2", "0.6666666667", "--p3",
                 "-0.3333333333", "--out", path("k.json")}),
            0);
  EXPECT_EQ(run({"verify", path("k.json"), "--mode", "coordinate", "--grid", "t=1:2:9", "--tol", "1e-8", "--out",
                 path("r.json")}),
            0)
      << err_.str();
  Json r = report("r.json");
  EXPECT_EQ(r["pass"], true);
  EXPECT_EQ(r["mode"], "coordinate");
  EXPECT_EQ(r["points"], 9);
  std::vector<std::string> names;
  for (auto& e : r["equations"]) {
    names.push_back(e["name"]);
    EXPECT_EQ(e["argmax"].size(), 4u);
    EXPECT_LE(e["max_abs"].get<double>(), 1e-8);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"G11", "G22", "G33", "G44", "G_offdiag"}));
  for (const char* k : {"w_star", "w_curl", "n_star", "n_curl"}) EXPECT_TRUE(r["lc"].contains(k));
  EXPECT_EQ(r["provenance"]["catalog"], "kasner");
  EXPECT_DOUBLE_EQ(r["tolerances"]["residual"].get<double>(), 1e-8);
}

TEST_F(CliTest, NonVacuumKasnerFails) {
  ASSERT_EQ(run({"catalog", "--name", "kasner", "--p1", "0.5", "--p2", "0.5", "--p3", "0.5", "--out", path("k.json")}), 0);
  EXPECT_EQ(run({"verify", path("k.json"), "--out", path("r.json")}), 2);
  EXPECT_EQ(report("r.json")["pass"], false);
  EXPECT_EQ(run({"verify", path("k.json"), "--mode", "coordinate", "--out", path("r.json")}), 2);
}

TEST_F(CliTest, ConstantPhiIsAnError) {
  std::string cfg = kType1;
  cfg.replace(cfg.find("phi = \"t\""), 9, "phi = \"3\"");
  write("c.toml", cfg);
  EXPECT_EQ(run({"generate", "--config", path("c.toml"), "--out", path("m.json")}), 1);
  EXPECT_NE(err_.str().find("nonconstant"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("m.json")));
}

TEST_F(CliTest, GenerateThenVerify) {
  write("c.toml", kType1);
  ASSERT_EQ(run({"generate", "--config", path("c.toml"), "--out", path("m.json")}), 0) << err_.str();
  Json doc = Json::parse(read("m.json"));
  EXPECT_EQ(doc["provenance"]["type"], "type1");
  EXPECT_EQ(doc["provenance"]["spec_hash"].get<std::string>().size(), 16u);
  EXPECT_TRUE(doc.contains("source"));
  // the source travels with the document
  EXPECT_EQ(run({"verify", path("m.json"), "--grid", "x1=0.1:0.9:4,x2=0.1:0.9:4,t=1:2:5", "--out", path("r.json")}), 0)
      << read("r.json");
  Json r = report("r.json");
  ASSERT_EQ(r["equations"].size(), 6u);
  EXPECT_EQ(r["equations"][1]["name"], "eq2");
  // with 2n != 0 the metric is not Levi-Civita, and the coordinate Einstein tensor disagrees off the diagonal
  EXPECT_EQ(run({"verify", path("m.json"), "--mode", "coordinate", "--grid", "x1=0.1:0.9:4,x2=0.1:0.9:4,t=1:2:5",
                 "--out", path("rc.json")}),
            2);
  Json rc = report("rc.json");
  EXPECT_GT(rc["equations"][4]["max_abs"].get<double>(), 1e-3);
}

TEST_F(CliTest, ConfigDrivenVerifyUsesGridSection) {
  write("c.toml", kType1);
  EXPECT_EQ(run({"verify", "--config", path("c.toml"), "--out", path("r.json")}), 0) << err_.str();
  EXPECT_EQ(report("r.json")["points"], 80);
}

TEST_F(CliTest, ReportsAreDeterministic) {
  write("c.toml", kType1);
  std::vector<std::string> texts;
  for (const char* threads : {"1", "3", "8"}) {
    ::setenv("ANHOLO_THREADS", threads, 1);
    ASSERT_EQ(run({"verify", "--config", path("c.toml"), "--out", path("r.json")}), 0);
    Json r = report("r.json");
    r.erase("wall_time");
    texts.push_back(r.dump());
  }
  ::unsetenv("ANHOLO_THREADS");
  EXPECT_EQ(texts[0], texts[1]);
  EXPECT_EQ(texts[0], texts[2]);
}

TEST_F(CliTest, CsvDump) {
  ASSERT_EQ(run({"catalog", "--name", "godel", "--out", path("g.json")}), 0);
  run({"verify", path("g.json"), "--grid", "x1=-0.5:0.5:3,t=0:1:3", "--csv", path("p.csv"), "--out", path("r.json")});
  std::istringstream in(read("p.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x1,x2,t,y,eq1,eq2,eq3_1,eq3_2,eq4_1,eq4_2");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 9);
}

TEST_F(CliTest, LcCheck) {
  ASSERT_EQ(run({"catalog", "--name", "godel", "--out", path("g.json")}), 0);
  // Goedel violates only the w-curl condition
  EXPECT_EQ(run({"lc-check", path("g.json"), "--out", path("l.json")}), 2);
  Json l = report("l.json");
  EXPECT_FALSE(l.contains("equations"));
  EXPECT_EQ(l["pass"], false);
  EXPECT_EQ(l["lc"]["w_star"].get<double>(), 0.0);
  EXPECT_GT(l["lc"]["w_curl"].get<double>(), 1.0);
  ASSERT_EQ(run({"catalog", "--name", "kasner", "--out", path("k.json")}), 0);
  EXPECT_EQ(run({"lc-check", path("k.json"), "--out", path("l.json")}), 0);
  EXPECT_EQ(report("l.json")["pass"], true);
  // w_1 = sin t violates condition (a)
  write("c.toml", R"toml(
[generator]
type = "type2"
w1 = "sin(t)"
)toml");
  EXPECT_EQ(run({"lc-check", "--config", path("c.toml"), "--out", path("l.json")}), 2);
  EXPECT_GT(report("l.json")["lc"]["w_star"].get<double>(), 0.1);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"verify", "--bogus"}), 1);
  EXPECT_EQ(run({"verify"}), 1);  // no metric
  EXPECT_EQ(run({"catalog", "--name", "nope"}), 1);
  EXPECT_EQ(run({"verify", "--name", "kasner", "--mode", "sideways"}), 1);
  EXPECT_EQ(run({"verify", "--name", "kasner", "--grid", "t=1:2:2"}), 1);
  EXPECT_EQ(run({"verify", path("missing.json")}), 1);
  EXPECT_EQ(run({"--help"}), 0);
  EXPECT_NE(out_.str().find("generate"), std::string::npos);
}

TEST_F(CliTest, MalformedConfigReportsPosition) {
  write("bad.toml", "[generator]\ntype = \"type1\"\nphi = \n");
  EXPECT_EQ(run({"generate", "--config", path("bad.toml")}), 1);
  EXPECT_NE(err_.str().find("line 3"), std::string::npos) << err_.str();
  write("bad2.toml", "[nonsense]\nx = 1\n");
  EXPECT_EQ(run({"generate", "--config", path("bad2.toml")}), 1);
  EXPECT_NE(err_.str().find("nonsense"), std::string::npos);
  write("bad3.toml", "[generator]\ntype = \"type1\"\nphi = \"t +* 2\"\n");
  EXPECT_EQ(run({"generate", "--config", path("bad3.toml")}), 1);
  EXPECT_NE(err_.str().find("column"), std::string::npos) << err_.str();
}

TEST_F(CliTest, PrimePlusPolarizations) {
  write("c.toml", R"toml(
[prime]
catalog = "frw-cartesian"
a = "1"

[polarizations]
mode = "additive"
etaN41 = "0.5"

[grid]
spec = "x1=0.1:0.9:3,x2=0.1:0.9:3,t=1:2:3"
)toml");
  EXPECT_EQ(run({"verify", "--config", path("c.toml"), "--mode", "coordinate", "--out", path("r.json")}), 0)
      << read("r.json");
}

// Exit status 0 exactly when every max_abs is within tolerance.
TEST_F(CliTest, ExitCodeContract) {
  ASSERT_EQ(run({"catalog", "--name", "kasner", "--p1", "1", "--p2", "0", "--p3", "0", "--out", path("k.json")}), 0);
  for (const char* tol : {"1e-8", "1e-14"}) {
    int code = run({"verify", path("k.json"), "--mode", "coordinate", "--tol", tol, "--out", path("r.json")});
    Json r = report("r.json");
    bool all = true;
    for (auto& e : r["equations"]) all = all && e["max_abs"].get<double>() <= std::stod(tol);
    EXPECT_EQ(code == 0, all) << tol;
  }
}

TEST(ConfigParse, HashAndDefaults) {
  Config c = parse_config(kType1);
  EXPECT_EQ(c.generator, "type1");
  EXPECT_DOUBLE_EQ(c.constants.at("e2"), 7.38905609893065);
  ASSERT_TRUE(c.grid.has_value());
  EXPECT_EQ(hash_hex("abc"), hash_hex("abc"));
  EXPECT_NE(hash_hex("abc"), hash_hex("abd"));
  EXPECT_THROW(parse_config("[grid]\nx1 = [0, 1]\n"), Error);
}

TEST(GridSpecParse, Forms) {
  GridSpec g;
  g.parse("x1=0:1:3,t=1:2:5");
  EXPECT_EQ(g.points().size(), 15u);
  g.interior_margin = 0.25;
  EXPECT_EQ(g.points().size(), 3u);  // x1 = 0.5; t = 1.25, 1.5, 1.75
  EXPECT_THROW(g.parse("z=0:1:3"), Error);
  EXPECT_THROW(g.parse("x1=0:1"), Error);
  EXPECT_THROW(g.parse("x1=1:0:5"), Error);
}

// Modes agree for metrics in the exact Levi-Civita class; the four extraction conditions alone do not guarantee it.
TEST(ModeConsistency, ExactClassAgreesKasnerDoesNot) {
  NAdaptedMetric m = NAdaptedMetric::minkowski();
  m.w1 = ScalarField::from_text("0.3", {});
  m.n1 = ScalarField::from_text("x2", {});
  m.n2 = ScalarField::from_text("x1", {});
  GridSpec g;
  g.parse("x1=0.1:0.9:3,x2=0.1:0.9:3,t=1:2:3");
  Tolerances tol{1e-6, 1e-6, 0};
  ResidualReport a = grid_report(m, SourceSpec{}, g, Mode::DConn, tol);
  ResidualReport b = grid_report(m, SourceSpec{}, g, Mode::Coordinate, tol);
  EXPECT_LT(a.lc.max(), 1e-10);
  EXPECT_EQ(a.pass, b.pass);
  EXPECT_TRUE(a.pass);

  NAdaptedMetric k = catalog_by_name("kasner", CatalogParams{});
  ResidualReport kd = grid_report(k, SourceSpec{}, g, Mode::DConn, tol);
  ResidualReport kc = grid_report(k, SourceSpec{}, g, Mode::Coordinate, tol);
  EXPECT_LT(kd.lc.max(), 1e-10);
  EXPECT_TRUE(kc.pass);
  EXPECT_FALSE(kd.pass);  // R33 = -2/(9 t^2) for the canonical d-connection
  EXPECT_GT(kd.lc_exact_max, 0.1);
}
