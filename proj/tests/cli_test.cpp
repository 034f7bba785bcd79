#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "eembi/metrics.hpp"

namespace fs = std::filesystem;
using eembi::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eembi_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path simulate(const std::string& mechanism = "linear", int nodes = 4, int rows = 1000) {
    const fs::path out = dir_ / ("sim_" + mechanism);
    const Result r = call({"simulate", "--nodes", std::to_string(nodes), "--edge-prob", "0.6", "--rows",
                           std::to_string(rows), "--replicates", "1", "--mechanism", mechanism, "--seed", "3", "--out",
                           out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return out / "replicate_000";
  }

  void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({"learn"}).code, 2);
  EXPECT_EQ(call({"learn", "--input", "x.csv", "--bogus"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST_F(CliTest, IngestionErrorCode) {
  EXPECT_EQ(call({"learn", "--input", (dir_ / "missing.csv").string()}).code, 3);
  write(dir_ / "bad.csv", "a,b\n1,2\n3\n");
  EXPECT_EQ(call({"learn", "--input", (dir_ / "bad.csv").string()}).code, 3);
}

TEST_F(CliTest, PipelineErrorCode) {
  // A zero_eps above any attainable MI blocks every matching cell.
  std::ostringstream csv;
  csv << "a,b\n";
  for (int i = 0; i < 200; ++i) csv << (i % 3) << ',' << (i % 2) << '\n';
  write(dir_ / "const.csv", csv.str());
  const Result r = call({"learn", "--input", (dir_ / "const.csv").string(), "--zero-eps", "100"});
  EXPECT_EQ(r.code, 4) << r.err;
}

TEST_F(CliTest, LearnWritesAdjacencyAndManifest) {
  const fs::path rep = simulate();
  const fs::path out = dir_ / "g.csv";
  const Result r = call({"learn", "--input", (rep / "data.csv").string(), "--method", "eembi", "--alpha", "0.01",
                         "--beta", "0.05", "--k", "5", "--seed", "7", "--output", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> header;
  const auto a = eembi::read_adjacency_csv(out, &header);
  EXPECT_EQ(a.size(), 4U);
  EXPECT_TRUE(a.is_binary());
  const std::string manifest = slurp(dir_ / "g.csv.manifest.json");
  EXPECT_NE(manifest.find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(manifest.find("\"beta\": 0.05"), std::string::npos);
}

TEST_F(CliTest, LearnToStdoutWithTruth) {
  const fs::path rep = simulate();
  const Result r = call({"learn", "--input", (rep / "data.csv").string(), "--truth", (rep / "cpdag.csv").string(),
                         "--manifest", (dir_ / "m.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("x0"), std::string::npos);
  EXPECT_NE(r.err.find("dataset,method,seed,shd,aupr,runtime"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "m.json"));
}

TEST_F(CliTest, LearnDiscreteWithPc) {
  const fs::path rep = simulate("discrete", 4, 1500);
  const fs::path out = dir_ / "pc.csv";
  const Result r = call({"learn", "--input", (rep / "data.csv").string(), "--method", "eembi-pc", "--beta", "0.01",
                         "--output", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "pc.csv.manifest.json").find("\"eembi-pc\""), std::string::npos);
}

TEST_F(CliTest, LearnIsDeterministic) {
  const fs::path rep = simulate();
  for (const char* name : {"a.csv", "b.csv"})
    ASSERT_EQ(call({"learn", "--input", (rep / "data.csv").string(), "--seed", "11", "--output",
                    (dir_ / name).string()})
                  .code,
              0);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const fs::path rep = simulate();
  write(dir_ / "run.cfg", "alpha=0.02\nbeta=0.1\nseed=5\n");
  const fs::path out = dir_ / "c.csv";
  ASSERT_EQ(call({"learn", "--input", (rep / "data.csv").string(), "--config", (dir_ / "run.cfg").string(), "--seed",
                  "6", "--output", out.string()})
                .code,
            0);
  const std::string m = slurp(dir_ / "c.csv.manifest.json");
  EXPECT_NE(m.find("\"alpha\": 0.02"), std::string::npos);
  EXPECT_NE(m.find("\"seed\": 6"), std::string::npos);
}

TEST_F(CliTest, Eval) {
  write(dir_ / "t.csv", "0,1\n0,0\n");
  write(dir_ / "r.csv", "0,0\n1,0\n");
  write(dir_ / "big.csv", "0,0,0\n0,0,0\n0,0,0\n");
  const Result same = call({"eval", "--pred", (dir_ / "t.csv").string(), "--truth", (dir_ / "t.csv").string()});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_NE(same.out.find(",0,1,"), std::string::npos) << same.out;
  const Result rev =
      call({"eval", "--pred", (dir_ / "r.csv").string(), "--truth", (dir_ / "t.csv").string(), "--json"});
  ASSERT_EQ(rev.code, 0);
  EXPECT_NE(rev.out.find("\"shd\":2"), std::string::npos) << rev.out;
  EXPECT_EQ(call({"eval", "--pred", (dir_ / "big.csv").string(), "--truth", (dir_ / "t.csv").string()}).code, 5);
  EXPECT_EQ(call({"eval", "--pred", (dir_ / "t.csv").string(), "--truth", (dir_ / "big.csv").string()}).code, 5);
}

TEST_F(CliTest, SimulateWritesReplicates) {
  const Result r = call({"simulate", "--nodes", "8", "--rows", "50", "--replicates", "20", "--out",
                         (dir_ / "many").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  int dirs = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "many")) {
    ++dirs;
    for (const char* f : {"dag.csv", "cpdag.csv", "data.csv", "manifest.json"}) EXPECT_TRUE(fs::exists(e.path() / f));
  }
  EXPECT_EQ(dirs, 20);
  EXPECT_EQ(call({"simulate", "--out", (dir_ / "x").string(), "--mechanism", "wavy"}).code, 2);
}

TEST_F(CliTest, BenchGrid) {
  const Result r = call({"bench", "--nodes", "3", "--methods", "eembi,eembi-pc", "--betas", "0.05,0.1", "--sizes",
                         "300", "--seeds", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  EXPECT_EQ(line, "dataset,method,seed,shd,aupr,runtime");
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}
