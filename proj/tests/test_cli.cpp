#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sqfn/cli.hpp"

using namespace sqfn;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "sqfn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return std::string(SQFN_SCENARIO_DIR) + "/" + name; }

std::filesystem::path scratch(const char* name) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string write_function(const std::filesystem::path& dir, const char* name, double value) {
  const Grid g = Grid::cell_centered(1, -2.0, 2.0, 0.1);
  const auto path = (dir / name).string();
  save_csv(path, GridFunction::sample(g, [&](const Point& x) { return value * std::max(0.0, 1.0 - x[0] * x[0]); }));
  return path;
}

}  // namespace

TEST(Cli, ParsesFlags) {
  std::vector<const char*> argv = {"sqfn", "compute", "--input", "f.csv", "--alpha", "0.5", "--seed", "3", "--tmax", "2"};
  std::ostringstream out, err;
  const auto r = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
  ASSERT_TRUE(r.config);
  EXPECT_EQ(r.config->command, "compute");
  EXPECT_EQ(r.config->inputs, std::vector<std::string>{"f.csv"});
  EXPECT_EQ(*r.config->alpha, 0.5);
  EXPECT_EQ(r.config->seed, 3u);
  EXPECT_TRUE(r.config->seed_given);
  EXPECT_EQ(*r.config->tmax, 2.0);
  EXPECT_FALSE(r.config->out_given);
}

TEST(Cli, RejectsBadUsage) {
  EXPECT_EQ(run({"compute", "--input", "f.csv", "--alpha", "1.5"}).code, 1);
  EXPECT_EQ(run({"compute", "--input", "f.csv", "--alpha", "abc"}).code, 1);
  EXPECT_EQ(run({"compute", "--input", "f.csv", "--tmin", "-1"}).code, 1);
  EXPECT_EQ(run({"compute"}).code, 1);
  EXPECT_EQ(run({"norm", "--input", "f.csv", "--kind", "median"}).code, 1);
  EXPECT_EQ(run({"weights"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  const Invocation none = run({});
  EXPECT_NE(none.code, 0);
  EXPECT_NE(none.err.find("\"error\""), std::string::npos);
  const Invocation help = run({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("verify"), std::string::npos);
}

TEST(Cli, ComputeOnZeroFunction) {
  const auto dir = scratch("sqfn_cli_zero");
  const auto f = write_function(dir, "zero.csv", 0.0);
  const Invocation r = run({"compute", "--input", f, "--out", (dir / "out").string(), "--tmax", "2", "--jobs", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream is(dir / "out" / "sqfn.csv");
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "x,s_alpha");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_LE(std::stod(line.substr(line.find(',') + 1)), 1e-8);
  }
  EXPECT_EQ(rows, 40u);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "sqfn.svg"));
}

TEST(Cli, ComputeFamily) {
  const auto dir = scratch("sqfn_cli_family");
  const auto a = write_function(dir, "a.csv", 3.0), b = write_function(dir, "b.csv", 4.0),
             one = write_function(dir, "one.csv", 1.0);
  const Invocation fam = run({"compute", "--input", a, "--input", b, "--out", (dir / "fam").string(), "--tmax", "2"});
  const Invocation single = run({"compute", "--input", one, "--out", (dir / "one").string(), "--tmax", "2"});
  ASSERT_EQ(fam.code, 0) << fam.err;
  ASSERT_EQ(single.code, 0) << single.err;
  const auto jf = nlohmann::json::parse(fam.out), js = nlohmann::json::parse(single.out);
  EXPECT_NEAR(jf["max_s_alpha"].get<double>(), 5.0 * js["max_s_alpha"].get<double>(),
              1e-9 * jf["max_s_alpha"].get<double>());
}

TEST(Cli, NormAndWeights) {
  const auto dir = scratch("sqfn_cli_norm");
  const auto f = write_function(dir, "f.csv", 1.0);
  const Invocation lp = run({"norm", "--input", f, "--kind", "lp", "--p", "1"});
  ASSERT_EQ(lp.code, 0) << lp.err;
  EXPECT_NEAR(nlohmann::json::parse(lp.out)["value"].get<double>(), 4.0 / 3.0, 1e-2);
  const Invocation gen = run({"norm", "--input", f, "--kind", "gen", "--balls", "centered:0:0.5:2"});
  EXPECT_EQ(gen.code, 1);
  const Invocation gen_ok = run({"norm", "--input", f, "--kind", "gen", "--phi", "power:0.5", "--balls", "centered:0:0.5:2",
                          "--out", (dir / "n").string()});
  ASSERT_EQ(gen_ok.code, 0) << gen_ok.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "n" / "norm.csv"));
  const Invocation w = run({"weights", "--input", f, "--weight", "const", "--balls", "lattice:0.5:0.25:3", "--out",
                     (dir / "w").string()});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(nlohmann::json::parse(w.out)["ap_characteristic"].get<double>(), 1.0);
  std::string header;
  std::ifstream is(dir / "w" / "weights.csv");
  std::getline(is, header);
  EXPECT_EQ(header, "ball_index,center,radius,ap_term,a1_term,doubling_term");
}

TEST(Cli, VerifyGateRefusalExitsOne) {
  const auto dir = scratch("sqfn_cli_gate");
  const Invocation r = run({"verify", "thm", "--id", "T3", "--scenario", scenario("gate_fail.scn"), "--out", dir.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("\"domain\""), std::string::npos);
  EXPECT_NE(r.err.find("D(phi)"), std::string::npos);
}

TEST(Cli, VerifyIsDeterministic) {
  const auto a = scratch("sqfn_cli_det_a"), b = scratch("sqfn_cli_det_b");
  for (const auto& dir : {a, b}) {
    const Invocation r = run({"verify", "thm", "--id", "T1", "--scenario", scenario("small.scn"), "--seed", "5", "--out",
                       dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  EXPECT_EQ(slurp(a / "report.csv"), slurp(b / "report.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_NE(slurp(a / "report.csv").find("seed=5"), std::string::npos);

  const auto merged = scratch("sqfn_cli_merged");
  const Invocation r = run({"report", "--input", (a / "report.json").string(), "--input", (b / "report.json").string(),
                     "--out", merged.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["reports"].get<int>(), 2);
}

TEST(Cli, IoErrorsExitTwo) {
  EXPECT_EQ(run({"compute", "--input", "/nonexistent/f.csv"}).code, 2);
  EXPECT_EQ(run({"verify", "thm", "--id", "A", "--scenario", "/nonexistent/s.scn"}).code, 1);
  const auto dir = scratch("sqfn_cli_io");
  const auto f = write_function(dir, "f.csv", 1.0);
  EXPECT_EQ(run({"compute", "--input", f, "--tmax", "1", "--out", "/proc/sqfn_no_such_dir"}).code, 2);
  EXPECT_EQ(run({"report", "--input", "/nonexistent/r.json"}).code, 2);
  EXPECT_EQ(run({"compute", "--config", "/nonexistent/c.ini"}).code, 2);
}

TEST(Cli, ConfigFileSuppliesFlags) {
  const auto dir = scratch("sqfn_cli_config");
  const auto f = write_function(dir, "f.csv", 1.0);
  {
    std::ofstream os(dir / "c.ini");
    os << "alpha = 0.5\ntmax = 1\n";
  }
  std::vector<std::string> args = {"sqfn", "--config", (dir / "c.ini").string(), "compute", "--input", f};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const auto r = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
  ASSERT_TRUE(r.config) << err.str();
  EXPECT_EQ(*r.config->alpha, 0.5);
  EXPECT_EQ(*r.config->tmax, 1.0);
}
