#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/report.hpp"
#include "cli/scenarios.hpp"
#include "lqcp/nulldist.hpp"
#include "lqcp/simgen.hpp"

using namespace lqcp;
using namespace lqcp::cli;

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "lqcp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lqcp_cli_" + std::to_string(std::random_device{}()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  // n x p Gaussian panel with a mean jump of `jump` in the first column after row n/2.
  std::string panel(const std::string& name, std::size_t n, std::size_t p, double jump, bool header = false) {
    std::vector<double> shift(p, 0.0);
    shift[0] = jump;
    const DataMatrix x = apply_mean_shifts(gen_gaussian(n, p, CovarianceSpec::identity(), 11), {{n / 2, shift}});
    std::vector<std::string> names;
    if (header)
      for (std::size_t l = 0; l < p; ++l) names.push_back("g" + std::to_string(l + 1));
    const auto path = (dir_ / name).string();
    write_csv_matrix(path, x, names);
    return path;
  }

  fs::path dir_;
};

Json strip_timing(Json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_F(CliTest, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitFour) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"test", (dir_ / "missing.csv").string()}).code, kExitUsage);
  EXPECT_EQ(run({"estimate", panel("a.csv", 40, 3, 0.0), "--method", "median"}).code, kExitUsage);
}

TEST_F(CliTest, TestRejectsClearShiftWithExitTwo) {
  const auto path = panel("shift.csv", 80, 4, 4.0);
  const CliRun r = run({"test", path, "--q", "2", "--null-reps", "199", "--null-seed", "7"});
  ASSERT_EQ(r.code, kExitReject) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["results"]["reject"].get<bool>());
  EXPECT_EQ(j["seeds"]["null_seed"].get<std::uint64_t>(), 7u);
  EXPECT_EQ(j["config"]["n"].get<int>(), 80);
  EXPECT_EQ(j["results"]["rows"][0]["argmax"].get<int>(), 40);
  EXPECT_DOUBLE_EQ(j["results"]["rows"][0]["p_value"].get<double>(), 1.0 / 200.0);
}

TEST_F(CliTest, TestWithoutShiftExitsZero) {
  const CliRun r = run({"test", panel("flat.csv", 80, 4, 0.0), "--null-reps", "199", "--null-seed", "7"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST_F(CliTest, RerunWithRecordedSeedsIsIdentical) {
  const auto path = panel("d.csv", 60, 3, 1.0);
  const CliRun a = run({"test", path, "--q", "2,4", "--null-reps", "150"});
  ASSERT_LE(a.code, kExitReject) << a.err;
  EXPECT_NE(a.err.find("sampled --null-seed="), std::string::npos);
  const auto seed = Json::parse(a.out)["seeds"]["null_seed"].get<std::uint64_t>();
  const CliRun b = run({"test", path, "--q", "2,4", "--null-reps", "150", "--null-seed", std::to_string(seed)});
  Json ja = strip_timing(Json::parse(a.out)), jb = strip_timing(Json::parse(b.out));
  ja.erase("command");
  jb.erase("command");
  EXPECT_EQ(ja, jb);
  EXPECT_EQ(a.code, b.code);
}

TEST_F(CliTest, ReportJsonRoundTripsByteForByte) {
  const CliRun r = run({"test", panel("d.csv", 60, 3, 1.0), "--null-reps", "120", "--null-seed", "3"});
  const RunReport rep = RunReport::from_json(Json::parse(r.out));
  EXPECT_EQ(rep.dump(), r.out);
}

TEST_F(CliTest, HeaderNamesSurfaceInReport) {
  const CliRun r = run({"test", panel("h.csv", 40, 3, 0.0, true), "--null-reps", "120", "--null-seed", "3"});
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["columns"], Json({"g1", "g2", "g3"}));
}

TEST_F(CliTest, NonFiniteEntryIsALibraryError) {
  const auto path = write("bad.csv", "1,2\n3,nan\n5,6\n");
  const CliRun r = run({"test", path, "--null-seed", "1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("NonFiniteEntry"), std::string::npos);
}

TEST_F(CliTest, ScanStatisticRuns) {
  const CliRun r = run({"test", panel("s.csv", 48, 3, 3.0), "--scan", "--null-reps", "100", "--null-seed", "5"});
  ASSERT_LE(r.code, kExitReject) << r.err;
  EXPECT_EQ(Json::parse(r.out)["config"]["statistic"], "scan");
}

TEST_F(CliTest, EstimateSingleFindsTheJump) {
  const CliRun r = run({"estimate", panel("e.csv", 80, 3, 4.0), "--method", "single", "--q", "2,4", "--csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "q,k_hat,tau_hat,statistic");
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto first = line.find(',');
    const int k_hat = std::stoi(line.substr(first + 1));
    EXPECT_NEAR(k_hat, 40, 2) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, EstimateWbsCalibratedFindsTheJump) {
  const CliRun r = run({"estimate", panel("w.csv", 80, 3, 4.0), "--method", "wbs", "--q", "2", "--intervals", "200",
                        "--interval-seed", "9", "--calib-seed", "4", "--calib-reps", "100", "--extra-len", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["results"]["breaks"].size(), 1u) << j["results"].dump();
  EXPECT_NEAR(j["results"]["breaks"][0].get<int>(), 40, 2);
  EXPECT_EQ(j["config"]["min_len"].get<int>(), 23);
  EXPECT_EQ(j["seeds"]["calib_seed"].get<int>(), 4);
}

TEST_F(CliTest, EstimateWbsWithFixedThresholdNeedsNoCalibration) {
  const CliRun r = run({"estimate", panel("w.csv", 80, 3, 4.0), "--method", "wbs", "--q", "2", "--intervals", "200",
                        "--interval-seed", "9", "--threshold", "1e300"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["results"]["breaks"].empty());
  EXPECT_FALSE(j["seeds"].contains("calib_seed"));
  EXPECT_TRUE(r.err.empty()) << r.err;
}

TEST_F(CliTest, CalibrateWritesLoadableTable) {
  const CliRun s = run({"calibrate", "--n", "30", "--p", "3", "--reps", "50", "--seed", "4"});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  const NullTable t = null_table_from_json(s.out);
  EXPECT_EQ(t.reps(), 50u);

  const auto out = (dir_ / "t.json").string();
  const CliRun f = run({"calibrate", "--kind", "wbs-max", "--n", "30", "--p", "3", "--reps", "20", "--seed", "4",
                     "--intervals", "25", "--intervals-seed", "8", "--out", out});
  ASSERT_EQ(f.code, kExitOk) << f.err;
  const NullTable w = load_null_table(out);
  EXPECT_EQ(w.spec.kind, NullKind::WbsMax);
  EXPECT_EQ(w.spec.M, 25u);
  EXPECT_EQ(Json::parse(f.out)["seeds"]["intervals_seed"].get<int>(), 8);
}

TEST_F(CliTest, CacheDirectoryIsUsed) {
  const auto cache = (dir_ / "cache").string();
  const auto path = panel("c.csv", 40, 3, 0.0);
  run({"test", path, "--null-reps", "120", "--null-seed", "5", "--cache-dir", cache});
  EXPECT_FALSE(fs::is_empty(cache));
}

TEST_F(CliTest, NetworkDelegatesAfterVech) {
  const std::size_t m = 5, n = 48;
  std::mt19937_64 rng(3);
  std::bernoulli_distribution edge(0.3);
  std::ostringstream csv;
  for (std::size_t t = 0; t < n; ++t) {
    SquareMatrix a{m, std::vector<double>(m * m, 0.0)};
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < i; ++j) a(i, j) = a(j, i) = edge(rng);
    for (std::size_t k = 0; k < m * m; ++k) csv << (k ? "," : "") << a.values[k];
    csv << "\n";
  }
  const auto path = write("net.csv", csv.str());
  const auto exported = (dir_ / "vech.csv").string();
  const CliRun r = run({"network", "--export", exported, "test", path, "--null-reps", "100", "--null-seed", "2"});
  ASSERT_LE(r.code, kExitReject) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["config"]["m"].get<int>(), 5);
  EXPECT_EQ(j["config"]["p"].get<int>(), 10);
  const Json side = Json::parse(std::ifstream(exported + ".json"));
  EXPECT_EQ(side["ordering"], "strict-lower-column-major");
  EXPECT_EQ(read_csv_matrix(exported).data.p(), 10u);
}

TEST_F(CliTest, NetworkRejectsNonSquareRows) {
  const auto path = write("net.csv", "0,1,1\n1,0,1\n");
  EXPECT_EQ(run({"network", "test", path, "--null-seed", "1"}).code, kExitError);
}

TEST_F(CliTest, SimulateUnknownScenario) {
  const CliRun r = run({"simulate", "table9-nothing", "--set", "seed=1"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("UnknownScenario"), std::string::npos);
}

TEST_F(CliTest, SimulateUnknownSettingIsInvalidConfig) {
  const CliRun r = run({"simulate", "table1-size", "--set", "seed=1", "--set", "bogus=3"});
  EXPECT_EQ(r.code, kExitError);
  EXPECT_NE(r.err.find("InvalidConfig"), std::string::npos);
}

TEST_F(CliTest, SimulateSingleReplicateIsDeterministic) {
  const std::vector<std::string> args{"simulate", "table1-size", "--set", "seed=12", "--set", "reps=1",
                                      "--set", "null_reps=100", "--set", "n=40", "--set", "p=5",
                                      "--set", "orders=2", "--set", "adaptive="};
  const CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  const Json ja = Json::parse(a.out), jb = Json::parse(b.out);
  EXPECT_EQ(ja["results"]["rows"].size(), 1u);
  EXPECT_EQ(strip_timing(ja), strip_timing(jb));
  EXPECT_EQ(ja["seeds"]["seed"].get<int>(), 12);
  EXPECT_TRUE(ja["seeds"].contains("null_seed"));
}

TEST_F(CliTest, SimulateListNamesEveryScenario) {
  const CliRun r = run({"simulate", "--list"});
  EXPECT_EQ(r.code, kExitOk);
  for (const auto& name : scenario_names()) EXPECT_NE(r.out.find(name), std::string::npos) << name;
}

TEST(Scenarios, RecordsSampledSeed) {
  const RunReport rep = run_scenario("table3-rmse", {{"reps", "2"}, {"n", "40"}, {"p", "4"}, {"orders", "2"}});
  EXPECT_TRUE(rep.seeds.contains("seed"));
  const auto again = run_scenario(
      "table3-rmse",
      {{"reps", "2"}, {"n", "40"}, {"p", "4"}, {"orders", "2"}, {"seed", std::to_string(rep.seeds["seed"].get<std::uint64_t>())}});
  EXPECT_EQ(rep.results, again.results);
}

TEST(Scenarios, NetworkWbsSmallRun) {
  const RunReport rep = run_scenario("network-wbs", {{"seed", "5"},
                                                     {"reps", "2"},
                                                     {"M", "100"},
                                                     {"calib_reps", "20"},
                                                     {"methods", "2"},
                                                     {"m", "6"}});
  const Json& rows = rep.results["rows"];
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["method"], "WBS-SN(2)");
  EXPECT_GE(rows[0]["ari"].get<double>(), -1.0);
}
