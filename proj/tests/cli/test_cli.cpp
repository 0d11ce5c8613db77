#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using treecouple::cli::run_cli;

namespace {

struct Result {
  int rc;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "treecouple");
  std::vector<const char*> argv;
  for (auto& a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / ("treecouple_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

} // namespace

TEST(Cli, OracleTvPrintsExactAndFloat) {
  const auto r = run({"oracle", "tv", "--d", "2", "--k", "3", "--height", "1", "--c", "1", "--q", "2"});
  EXPECT_EQ(r.rc, 0);
  EXPECT_EQ(r.out, "tv_exact,tv_approx\n3/4,0.75\n");
}

TEST(Cli, WalkDpJson) {
  const auto r = run({"walk", "dp", "--cap", "10"});
  ASSERT_EQ(r.rc, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["expected_stopped_plus_one"], "1/1");
  EXPECT_EQ(j["survival"], "63/256");
  EXPECT_EQ(j["conditional_mean"], "193/63");
  EXPECT_TRUE(j["conditional_mean_exceeds_bound"].get<bool>());
  EXPECT_EQ(j["config"]["seed"], 1);
}

TEST(Cli, DecaySchema) {
  const auto r = run({"decay", "--d", "4", "--k", "5", "--height", "3", "--trials", "200", "--seed", "42"});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_EQ(first_line(r.out), "level,mean,stderr,bound_v1,bound_v2");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, JsonEmbedsConfigAndSeed) {
  for (std::vector<std::string> cmd : {std::vector<std::string>{"decay", "--d", "3", "--k", "4", "--trials", "100"},
                                       {"branching", "--d", "5", "--k", "5", "--trials", "100"},
                                       {"eventA", "--d", "5", "--k", "5", "--trials", "100"},
                                       {"validate", "--d", "2", "--height", "1", "--k", "3", "--trials", "200"},
                                       {"oracle", "measure", "--d", "2", "--height", "1", "--k", "3"},
                                       {"walk", "fp"}}) {
    cmd.insert(cmd.end(), {"--format", "json", "--seed", "777"});
    const auto r = run(cmd);
    ASSERT_EQ(r.rc, 0) << cmd[0] << ": " << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["config"]["seed"], 777) << cmd[0];
    EXPECT_FALSE(j["config"].contains("threads"));
  }
}

TEST(Cli, EveryCsvHasHeader) {
  for (std::vector<std::string> cmd : {std::vector<std::string>{"broadcast", "--d", "2", "--k", "3"},
                                       {"couple", "--d", "2", "--k", "4", "--format", "csv"},
                                       {"stats", "--d", "5", "--k", "5", "--trials", "100"},
                                       {"tvbound", "--d", "2", "--k", "3", "--trials", "100"},
                                       {"oracle", "listlaw", "--d", "2", "--k", "3", "--parent", "1"},
                                       {"oracle", "identities", "--d", "2", "--k", "4"},
                                       {"walk", "smatrix", "--n", "50", "--trials", "100"}}) {
    const auto r = run(cmd);
    ASSERT_EQ(r.rc, 0) << cmd[0] << ": " << r.err;
    const auto head = first_line(r.out);
    EXPECT_FALSE(head.empty());
    EXPECT_EQ(head.find_first_of("0123456789"), std::string::npos) << head;
  }
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const std::vector<std::string> base{"branching", "--d", "12", "--k", "9", "--trials", "250", "--seed", "5"};
  std::string first;
  for (const char* t : {"1", "2", "8"}) {
    auto cmd = base;
    cmd.insert(cmd.end(), {"--threads", t});
    const auto r = run(cmd);
    ASSERT_EQ(r.rc, 0);
    if (first.empty())
      first = r.out;
    EXPECT_EQ(r.out, first);
  }
}

TEST(Cli, InvalidConfigNamesField) {
  auto r = run({"decay", "--d", "3", "--k", "1", "--trials", "100"});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("'k'"), std::string::npos) << r.err;
  r = run({"decay", "--d", "3", "--k", "4", "--c", "9", "--trials", "100"});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("'c'"), std::string::npos);
  r = run({"decay", "--d", "3", "--k", "4", "--trials", "10"});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("'trials'"), std::string::npos);
  r = run({"branching", "--d", "3", "--k", "4", "--c", "2", "--q", "2"});
  EXPECT_EQ(r.rc, 2);
  r = run({"decay", "--coupling", "greedy", "--k", "4"});
  EXPECT_EQ(r.rc, 2);
  r = run({"decay", "--d", "3"});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("'k'"), std::string::npos);
}

TEST(Cli, BudgetRefusalHasOwnExitCode) {
  EXPECT_EQ(run({"oracle", "measure", "--d", "2", "--height", "4", "--k", "3"}).rc, 3);
  EXPECT_EQ(run({"oracle", "tv", "--d", "3", "--height", "3", "--k", "4"}).rc, 3);
  EXPECT_EQ(run({"couple", "--d", "100", "--height", "4", "--k", "60"}).rc, 3);
}

TEST(Cli, EpsilonDerivesK) {
  const auto r = run({"decay", "--d", "100", "--epsilon", "0.5", "--variant", "v1", "--height", "1", "--trials",
                      "100", "--format", "json"});
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["k"], 33);  // ceil(1.5 * 100 / ln 100)
  EXPECT_EQ(j["config"]["k_source"], "epsilon-v1");
}

TEST(Cli, AtomicOutputFile) {
  const auto dir = temp_dir();
  const auto path = (dir / "tv.csv").string();
  const auto r = run({"oracle", "tv", "--d", "2", "--k", "3", "--height", "1", "--output", path});
  ASSERT_EQ(r.rc, 0);
  EXPECT_NE(r.out.find("wrote 1 rows"), std::string::npos);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), "tv_exact,tv_approx\n3/4,0.75\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir))
    ++files;
  EXPECT_EQ(files, 1u);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ConfigFileMirrorsFlags) {
  const auto dir = temp_dir();
  const auto cfg = (dir / "run.ini").string();
  {
    std::ofstream f(cfg);
    f << "d=2\nk=4\nheight=1\n";
  }
  auto r = run({"oracle", "tv", "--config", cfg});
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto from_file = r.out;
  r = run({"oracle", "tv", "--config", cfg, "--k", "3"});
  EXPECT_EQ(r.out, "tv_exact,tv_approx\n3/4,0.75\n");  // flag wins
  EXPECT_NE(from_file, r.out);
  std::filesystem::remove_all(dir);
}

TEST(Cli, HelpDocumentsSeeds) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.rc, 0);
  EXPECT_NE(r.out.find("splitmix64"), std::string::npos);
}

TEST(Cli, CoupleDumpIsConsistent) {
  const auto r = run({"couple", "--d", "3", "--height", "3", "--k", "5", "--seed", "3"});
  ASSERT_EQ(r.rc, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto x = j["x"].get<std::vector<int>>(), y = j["y"].get<std::vector<int>>();
  std::size_t dis = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    dis += x[i] != y[i];
  EXPECT_NE(x[0], y[0]);  // root pair, not recorded
  EXPECT_EQ(dis, j["records"].size());
  std::size_t total = 0;
  for (const auto& n : j["per_level"])
    total += n.get<std::size_t>();
  EXPECT_EQ(total, dis + 1);
}
