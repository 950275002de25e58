#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(NPR_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("npr_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, AnalyzeFixtures) {
  auto r = cli("--json analyze --fixture one_sided_thresholds");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["vc_dimension"], 1);
  EXPECT_EQ(j["separates_three_points"], false);

  r = cli("--json analyze --fixture example3_gap --alpha 0.2 --alpha 0.3");
  ASSERT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["vc_dimension"], 2);
  EXPECT_EQ(j["witness"]["x0"], 0);
  ASSERT_EQ(j["totally_ordered_at"].size(), 2u);
  EXPECT_EQ(j["totally_ordered_at"][0]["maximal_element"], 2);
  EXPECT_TRUE(j["totally_ordered_at"][1]["maximal_element"].is_null());
}

TEST(Cli, AnalyzeClassFileAndHumanOutput) {
  auto cls = scratch("chain.json");
  write(cls, R"({"format":"np-ratelab/v1","atoms":["a","b","c"],
                 "hypotheses":[[1,1,1],[0,1,1],[0,0,1],[0,1,1]]})");
  auto r = cli("analyze --class " + cls.string());
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("vc_dimension: 1"), std::string::npos);
  EXPECT_NE(r.out.find("separates_three_points: false"), std::string::npos);
}

TEST(Cli, LearnOnFixture) {
  auto r = cli("--json --seed 4 learn --fixture example2_chain --alpha 0.2 --n 50 "
               "--algorithm maximal-first");
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["used_maximal_element"], true);
  EXPECT_EQ(j["chosen"], 3);
  EXPECT_EQ(cli("--json --seed 4 learn --fixture example2_chain --alpha 0.2 --n 50").out,
            cli("--json --seed 4 learn --fixture example2_chain --alpha 0.2 --n 50").out);
}

TEST(Cli, LearnInfeasibleLevelExitsFour) {
  auto cls = scratch("singletons.json");
  write(cls, R"({"atoms":["a","b"],"hypotheses":[[1,0],[0,1]],
                 "distributions":{"mu0":["0.5","0.5"],"mu1":["0.5","0.5"]}})");
  EXPECT_EQ(cli("learn --class " + cls.string() + " --alpha 0.1 --n 10").code, 4);
}

TEST(Cli, ConstructKinds) {
  auto r = cli("--json construct --kind packing --vc-dimension 2 --alpha 0.25 --n 100");
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["provenance"]["verification"]["passed"], true);
  EXPECT_EQ(j["distributions"]["mu0"], json::array({"0.5", "0.25", "0.25"}));

  r = cli("--json construct --kind packing --vc-dimension 17 --alpha 0.2 --n 400");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["provenance"]["verification"]["passed"], true);

  r = cli("--json construct --kind transport --fixture example3_gap --alpha 0.2 --epsilon0 0.1");
  ASSERT_EQ(r.code, 0);
  j = json::parse(r.out);
  EXPECT_EQ(j["provenance"]["case"], "II");
  EXPECT_EQ(j["distributions"]["mu0"][0], "0.8");

  r = cli("--json construct --kind nomax --fixture example3_gap --alpha 0.2 --epsilon0 0.1 --n 64");
  ASSERT_EQ(r.code, 0);
  EXPECT_GE(json::parse(r.out)["provenance"]["verification"]["probe_excess"].get<double>(),
            1.0 / 64);

  EXPECT_EQ(cli("construct --kind nomax --fixture example3_chain --alpha 0.2 --n 64").code, 4);
}

TEST(Cli, SimulateWritesReportAndChecksExpectation) {
  auto exp = scratch("exp.json");
  write(exp, R"({"format":"np-ratelab/v1","instance":{"kind":"fixture","fixture":"example2_chain"},
                 "learner":"maximal-first","alpha":0.2,"n_grid":[16,32],"trials_per_n":100})");
  auto out = scratch("out");
  auto r = cli("simulate --experiment " + exp.string() + " --out " + out.string() +
               " --expect trivial");
  EXPECT_EQ(r.code, 0);
  ASSERT_TRUE(fs::exists(out / "rate_report.json"));
  ASSERT_TRUE(fs::exists(out / "rate_report.csv"));
  std::ifstream in(out / "rate_report.json");
  auto rep = json::parse(in);
  EXPECT_EQ(rep["regime"], "trivial");
  EXPECT_EQ(rep["per_n"].size(), 2u);

  EXPECT_EQ(cli("simulate --experiment " + exp.string() + " --out " + out.string() +
                " --expect sqrt")
                .code,
            1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("analyze --bogus").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("analyze --fixture no_such_fixture").code, 3);
  EXPECT_EQ(cli("simulate --experiment /nonexistent.json").code, 3);
  auto bad = scratch("bad.json");
  write(bad, "{not json");
  EXPECT_EQ(cli("analyze --class " + bad.string()).code, 3);
  EXPECT_EQ(cli("--help").code, 0);
}
