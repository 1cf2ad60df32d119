#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kqse/errors.hpp"
#include "kqse/harness/config.hpp"
#include "kqse/harness/experiments.hpp"
#include "kqse/io.hpp"

using namespace kqse;
using namespace kqse::harness;
namespace fs = std::filesystem;

TEST(Config, SectionsCommentsAndDefaults) {
  const auto c = Config::from_string(
      "# comment\n[run]\nseed = 7\n; another\n[noise]\nkappa=0.9\n[tables]\nn = 100, 200\n");
  EXPECT_EQ(c.get_u64("run.seed", 1), 7u);
  EXPECT_EQ(c.get_double("noise.kappa", 0.5), 0.9);
  EXPECT_EQ(c.get_sizes("tables.n", {}), (std::vector<std::size_t>{100, 200}));
  EXPECT_EQ(c.get_double("noise.mean", 0.25), 0.25);
  const auto r = c.resolved();
  EXPECT_EQ(r.at("run.seed"), "7");
  EXPECT_EQ(r.at("noise.mean"), "0.25");
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    Config::from_string("[a]\nx = 1\nx = 2\n", "cfg");
    FAIL() << "duplicate accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Config::from_string("[a\n"), ConfigError);
  EXPECT_THROW(Config::from_string("novalue\n"), ConfigError);
  const auto c = Config::from_string("[a]\nx = abc\nb = maybe\n");
  EXPECT_THROW(c.get_double("a.x", 0), ConfigError);
  EXPECT_THROW(c.get_size("a.x", 0), ConfigError);
  EXPECT_THROW(c.get_bool("a.b", false), ConfigError);
}

TEST(Config, OverridesReplaceFileValues) {
  auto c = Config::from_string("[run]\nseed = 7\n");
  c.set("run.seed", "9");
  EXPECT_EQ(c.get_u64("run.seed", 0), 9u);
}

TEST(Plan, DefaultsFollowLogRule) {
  const auto p = ExperimentPlan::with_defaults(500);
  EXPECT_NEAR(p.mu_max, std::log(500.0), 1e-12);
  EXPECT_EQ(p.n_mu, static_cast<std::size_t>(std::lround(std::log(500.0) * std::log(500.0))));
  EXPECT_EQ(p.t_mu(), 500 * p.n_mu);
  EXPECT_EQ(p.t_munu(), 500 * p.n_mu * p.n_nu);
}

TEST(Plan, RepetitionChoice) {
  RunOptions o;
  EXPECT_EQ(choose_reps(o, 50, 1000), 50u);
  o.full = true;
  EXPECT_EQ(choose_reps(o, 50, 1000), 1000u);
  o.reps = 7;
  EXPECT_EQ(choose_reps(o, 50, 1000), 7u);
}

TEST(ResultTableCsv, Layout) {
  ResultTable t;
  t.columns = {"a", "b"};
  t.add({"1", "x"});
  EXPECT_EQ(t.csv(), "a,b\n1,x\n");
  EXPECT_THROW(t.add({"1"}), std::logic_error);
}

namespace {

ExperimentPlan tiny_plan(unsigned workers) {
  ExperimentPlan p;
  p.n = 60;
  p.n_mu = 6;
  p.n_nu = 6;
  p.y = {-2.0, 2.0, 5};
  p.reps = 3;
  p.workers = workers;
  return p;
}

}  // namespace

TEST(KqseStudy, IndependentOfWorkerCount) {
  const auto a = kqse_study(tiny_plan(1));
  const auto b = kqse_study(tiny_plan(3));
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].type, kDataTypes[i]);
    EXPECT_EQ(a[i].linf, b[i].linf);
    EXPECT_EQ(a[i].overlap_mse, b[i].overlap_mse);
    EXPECT_EQ(a[i].d2, b[i].d2);
    EXPECT_EQ(a[i].avg_h, b[i].avg_h);
  }
  // the uncorrected noisy estimate carries the detection bias
  EXPECT_GT(a[1].overlap_mse, a[2].overlap_mse);
}

TEST(KqseStudy, SeedChangesResult) {
  auto p = tiny_plan(1);
  const auto a = kqse_study(p);
  p.seed += 1;
  EXPECT_NE(a[0].linf, kqse_study(p)[0].linf);
}

#ifdef KQSE_CLI_PATH
namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KQSE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path cli_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "kqse_cli_test" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, ExitCodes) {
  const auto d = cli_dir("codes");
  EXPECT_EQ(run_cli("--out " + d.string() + " --set grid.source=analytic --set grid.layout=symmetric "
                    "--set grid.n_mu=9 --set grid.n_nu=9 validate"),
            0);
  EXPECT_EQ(run_cli("--out " + d.string() + " --set noise.kappa=1.5 table s3"), 2);
  EXPECT_EQ(run_cli("--out " + d.string() + " table s9"), 2);
  EXPECT_EQ(run_cli("--config /nonexistent/kqse.cfg sample"), 2);
  EXPECT_EQ(run_cli("--bogus-flag sample"), 2);

  auto g = analytic_cf_grid(ReferenceState::cat({1.0, 0.5}), Axis::symmetric(4, 9),
                            Axis::symmetric(4, 9));
  g.at(2, 3) *= std::polar(1.0, 0.7);
  write_cf_grid(g, d / "bad.csv");
  EXPECT_EQ(run_cli("--out " + d.string() + " --set grid.input=" + (d / "bad.csv").string() +
                    " validate"),
            3);
}

TEST(Cli, OutputsIndependentOfWorkers) {
  const auto a = cli_dir("w1");
  const auto b = cli_dir("w2");
  const std::string common = " --reps 4 --set tables.n=100,200 --seed 11 table s3";
  ASSERT_EQ(run_cli("--out " + a.string() + " --workers 1" + common), 0);
  ASSERT_EQ(run_cli("--out " + b.string() + " --workers 2" + common), 0);
  const auto csv = slurp(a / "table_s3.csv");
  EXPECT_FALSE(csv.empty());
  EXPECT_EQ(csv, slurp(b / "table_s3.csv"));
  const auto side = slurp(a / "table_s3.json");
  EXPECT_NE(side.find("\"run.seed\": \"11\""), std::string::npos);
  EXPECT_NE(side.find("\"tables.n\": \"100,200\""), std::string::npos);
}

TEST(Cli, SampleWritesBatchAndSidecar) {
  const auto d = cli_dir("sample");
  ASSERT_EQ(run_cli("--out " + d.string() + " --set sample.n=50 --set sample.noisy=true sample"), 0);
  const auto b = read_sample_batch(d / "samples.csv");
  EXPECT_EQ(b.size(), 50u);
  EXPECT_TRUE(b.noise_tag.has_value());
}
#endif
