#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "paritydisp/analysis.hpp"
#include "paritydisp/cli.hpp"
#include "paritydisp/io.hpp"

using namespace paritydisp;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("paritydisp_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    ::unsetenv(kConfigEnvVar);
  }
  void TearDown() override {
    ::unsetenv(kConfigEnvVar);
    fs::remove_all(dir_);
  }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

Table table_of(const std::string& csv) {
  std::istringstream in(csv);
  return read_csv(in);
}

}  // namespace

TEST_F(CliTest, GenSqueezedVacuum) {
  const CliRun r = run({"gen", "--kind", "gcs", "--m", "2", "--z", "0.6", "--dim", "128", "--out",
                     path("s.json"), "--stats", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("truncation loss"), std::string::npos);
  EXPECT_NE(r.out.find("phase fix"), std::string::npos);
  const State st = read_state(slurp(path("s.json")));
  EXPECT_EQ(st.ket.dim(), 128);
  EXPECT_NEAR(st.ket[0].real(), 1.0 / std::sqrt(std::cosh(0.6)), 1e-12);
  EXPECT_LE(off_support_mass(st.ket, 2), 1e-20);
  const Table stats = table_of(slurp(path("p.csv")));
  EXPECT_EQ(stats.rows.size(), 128u);
  EXPECT_EQ(stats.rows[0][1], std::norm(st.ket[0]));
}

TEST_F(CliTest, GenWritesDocumentToStdoutByDefault) {
  const CliRun r = run({"gen", "--kind", "superposition", "--m", "1", "--z", "0.8", "--lambda", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const State st = read_state(r.out);
  EXPECT_NEAR(std::abs(st.ket[0]), 1.0, 1e-12);
  EXPECT_NEAR(st.ket.amps().tail(127).norm(), 0.0, 1e-12);
  EXPECT_NE(r.err.find("truncation loss"), std::string::npos);
}

TEST_F(CliTest, GenCatReportsTwoTermFidelity) {
  const CliRun r = run({"gen", "--kind", "cat", "--z", "1.5", "--lambda", "0.785398", "--u=-1.5",
                     "--out", path("cat.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pos = r.out.find("two-term fidelity defect ");
  ASSERT_NE(pos, std::string::npos);
  const double defect = std::stod(r.out.substr(pos + 25));
  EXPECT_LE(std::abs(defect), 1e-8);
}

TEST_F(CliTest, GenRoundTripIsBitExact) {
  ASSERT_EQ(run({"gen", "--kind", "dressed_basis", "--m", "2", "--z", "0.5+0.3i", "--lambda",
                 "0.7", "--n", "3", "--out", path("d.json")})
                .code,
            0);
  const std::string text = slurp(path("d.json"));
  EXPECT_EQ(write_state(read_state(text)), text);
  const CliRun again = run({"gen", "--kind", "dressed_basis", "--m", "2", "--z", "0.5+0.3i",
                         "--lambda", "0.7", "--n", "3", "--out", path("d2.json")});
  EXPECT_EQ(slurp(path("d2.json")), text);
}

TEST_F(CliTest, GenErrors) {
  CliRun r = run({"gen", "--kind", "gcs", "--z", "0.5+-0.3i"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("position"), std::string::npos);
  r = run({"gen", "--kind", "gcs", "--z", "0.5+0.3"});
  EXPECT_EQ(r.code, 2);
  r = run({"gen", "--kind", "gcs", "--m", "3", "--z", "1.0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("radius"), std::string::npos);
  r = run({"gen", "--kind", "gcs", "--m", "3", "--z", "1.0", "--override", "--dim", "32"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("override"), std::string::npos);
  EXPECT_EQ(run({"gen", "--kind", "banana"}).code, 2);
  EXPECT_EQ(run({"gen"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(CliTest, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
  EXPECT_EQ(r.out.find("--fault"), std::string::npos);
}

TEST_F(CliTest, VerifySingleFamily) {
  const CliRun r = run({"verify", "--check", "eq29a-composition", "--report", path("r.json"),
                     "--timestamp", "T"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  const SuiteReport rep = read_report(slurp(path("r.json")));
  ASSERT_FALSE(rep.results.empty());
  for (const auto& c : rep.results) EXPECT_EQ(c.check_id, "eq29a-composition");
  EXPECT_EQ(rep.generated_at, "T");
}

TEST_F(CliTest, VerifyCoarseDimListsSkips) {
  const CliRun r = run({"verify", "--dim", "16", "--check", "eq2-eigenstate", "--check",
                     "sec3-support-multiples", "--format", "rows", "--report", path("r.tsv")});
  EXPECT_NE(r.code, 2) << r.err;
  EXPECT_NE(r.out.find("skipped eq2-eigenstate"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("mass above K"), std::string::npos);
  EXPECT_NE(slurp(path("r.tsv")).find("\tskipped\t"), std::string::npos);
}

TEST_F(CliTest, VerifyCanaryExitsOne) {
  const CliRun r = run({"verify", "--check", "eq15a-hermiticity", "--fault", "flip-creation-sign"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL eq15a-hermiticity:hermiticity"), std::string::npos);
  EXPECT_EQ(run({"verify", "--check", "eq15a-hermiticity"}).code, 0);
}

TEST_F(CliTest, SweepLambdaMatchesTwoTermOracle) {
  const CliRun r = run({"sweep", "--kind", "superposition", "--m", "1", "--z", "0.8", "--param",
                     "lambda", "--range", "0:3.2:0.1", "--observables", "p0,mean_n"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = table_of(r.out);
  ASSERT_EQ(t.header, (std::vector<std::string>{"lambda", "p0", "mean_n"}));
  ASSERT_EQ(t.rows.size(), 33u);
  const double g = std::exp(-0.64);
  for (const auto& row : t.rows) {
    const double l = row[0];
    const double want = std::pow(std::cos(l), 2) + std::pow(std::sin(l), 2) * g;
    EXPECT_NEAR(row[1], want, 1e-10) << l;
    EXPECT_NEAR(row[2], std::pow(std::sin(l), 2) * 0.64, 1e-10);
  }
}

TEST_F(CliTest, SweepSqueezeOverlapAndParallelMerge) {
  const std::vector<std::string> base = {"sweep", "--dim", "256", "--kind", "gcs", "--m", "2", "--z", "0.1",
                                         "--param", "zabs", "--range", "0.1:1.0:0.1",
                                         "--observables", "re_c0,off_support"};
  const CliRun r = run(base);
  ASSERT_EQ(r.code, 0) << r.err;
  const Table t = table_of(r.out);
  ASSERT_EQ(t.rows.size(), 10u);
  for (const auto& row : t.rows) {
    EXPECT_NEAR(row[1], 1.0 / std::sqrt(std::cosh(row[0])), 1e-8);
    EXPECT_LE(row[2], 1e-20);
  }
  auto with_jobs = base;
  with_jobs.push_back("--jobs");
  with_jobs.push_back("3");
  EXPECT_EQ(run(with_jobs).out, r.out);
}

TEST_F(CliTest, SweepErrors) {
  EXPECT_EQ(run({"sweep", "--param", "lambda", "--range", "1:0:0.1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--param", "lambda", "--range", "0:1:0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--param", "lambda", "--range", "0:1"}).code, 2);
  EXPECT_EQ(run({"sweep", "--param", "theta", "--range", "0:1:0.5"}).code, 2);
  EXPECT_EQ(run({"sweep", "--param", "lambda", "--range", "0:1:0.5", "--observables", "bogus"}).code,
            2);
  const CliRun single = run({"sweep", "--param", "lambda", "--range", "0.5:0.5:0.1", "--z", "0.3"});
  EXPECT_EQ(single.code, 0);
  EXPECT_EQ(table_of(single.out).rows.size(), 1u);
}

TEST_F(CliTest, ConvergeVerdicts) {
  CliRun r = run({"converge", "--m", "1", "--z", "0.8", "--dims", "64,128"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"verdict\": \"converged\""), std::string::npos);
  r = run({"converge", "--m", "3", "--z", "1.5", "--dims", "64,128,256", "--format", "rows"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("not-converged"), std::string::npos);
  EXPECT_EQ(run({"converge", "--m", "1", "--z", "0.8", "--dims", "64"}).code, 2);
}

TEST_F(CliTest, ConfigPrecedence) {
  {
    std::ofstream f(path("cfg.json"));
    f << R"({"dim": 32, "format": "rows"})";
  }
  ::setenv(kConfigEnvVar, path("cfg.json").c_str(), 1);
  CliRun r = run({"gen", "--kind", "fock", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_state(r.out).ket.dim(), 32);
  r = run({"gen", "--kind", "fock", "--n", "2", "--dim", "20"});
  EXPECT_EQ(read_state(r.out).ket.dim(), 20);
  r = run({"converge", "--dims", "16,32"});
  EXPECT_NE(r.out.find("dim_from"), std::string::npos);

  {
    std::ofstream f(path("other.json"));
    f << R"({"dim": 24})";
  }
  r = run({"--config", path("other.json"), "gen", "--kind", "fock"});
  EXPECT_EQ(read_state(r.out).ket.dim(), 24);

  {
    std::ofstream f(path("bad.json"));
    f << R"({"dimension": 24})";
  }
  ::setenv(kConfigEnvVar, path("bad.json").c_str(), 1);
  r = run({"gen", "--kind", "fock"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("dimension"), std::string::npos);
  ::unsetenv(kConfigEnvVar);
  EXPECT_EQ(read_state(run({"gen", "--kind", "fock"}).out).ket.dim(), 128);
}

TEST(LoadConfig, MissingFileIsAnError) {
  EXPECT_THROW(load_config("/nonexistent/paritydisp.json"), std::exception);
}
