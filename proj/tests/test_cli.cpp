#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MEDPERS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(MEDPERS_FIXTURES "/") + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, KgBp) {
  const auto r = run("solve " + fixture("kg.json") + " --mode bp");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["spec_version"], "1");
  EXPECT_NEAR(j["value"].get<double>(), 0.6, 1e-9);
  EXPECT_NEAR(j["x"][0][0].get<double>(), 4. / 7, 1e-9);
}

TEST(Cli, Fig14CsvHasVertexA) {
  const auto r = run("feasible " + fixture("fig14.json"));
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "family,p,b1,b2,prob1,prob2");
  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("natural-wing,", 0) != 0) continue;
    double b1 = 0, b2 = 0;
    std::sscanf(line.c_str(), "natural-wing,%*[^,],%lf,%lf", &b1, &b2);
    found = found || (std::abs(b1 - 0.16) < 1e-6 && std::abs(b2 - 8. / 15) < 1e-6);
  }
  EXPECT_TRUE(found);
}

TEST(Cli, Fig18ListsThreeAtomOutcomes) {
  const auto r = run("feasible " + fixture("fig18.json") + " --format json --resolution 0.25");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  bool three = false;
  for (const auto& s : j["samples"]) three = three || s.size() == 3;
  EXPECT_TRUE(three);
}

TEST(Cli, Fig19CheckAndRefute) {
  EXPECT_EQ(run("solve " + fixture("fig19.json") + " --mode check --x identity").code, 0);
  const auto r = run("solve " + fixture("fig19.json") +
                     " --mode check --x '3/4,1/4;1/4,3/4' --sigma identity");
  EXPECT_EQ(r.code, 4);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "refuted");
  EXPECT_NEAR(j["gaps"]["mediator"].get<double>(), 0.15, 1e-9);
}

TEST(Cli, Fig19SearchIsDeterministic) {
  const auto a = run("solve " + fixture("fig19.json") + " --mode search");
  ASSERT_EQ(a.code, 0);
  const auto j = json::parse(a.out);
  EXPECT_EQ(j["clusters"].size(), 2u);
  EXPECT_TRUE(j["clusters"][0]["babbling"].get<bool>());
  const auto b = run("solve " + fixture("fig19.json") + " --mode search");
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Fig20Compare) {
  const auto r = run("solve " + fixture("fig20.json") + " --mode compare --x identity");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rank"], "mediated-more-informative");
  EXPECT_TRUE(j["strictly_more_informative"].get<bool>());
}

TEST(Cli, Fig22CheckIsRefuted) {
  const auto r = run("solve " + fixture("fig22.json") + " --mode check --x identity");
  EXPECT_EQ(r.code, 4);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["gaps"]["sender"].get<double>(), 1. / 14, 1e-6);
}

TEST(Cli, OrderPairs) {
  auto r = run("order --pair " + fixture("ranked.json"));
  ASSERT_EQ(r.code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["order"], "dominates");
  EXPECT_TRUE(j.contains("gamma"));
  r = run("order --pair " + fixture("unranked.json"));
  EXPECT_EQ(json::parse(r.out)["order"], "unranked");
  r = run("order --a identity --b '1,0;0,1'");
  EXPECT_EQ(json::parse(r.out)["order"], "equivalent");
  EXPECT_EQ(json::parse(r.out)["a"], "1,0;0,1");
}

TEST(Cli, OutFileMatchesStdout) {
  const auto path = (std::filesystem::temp_directory_path() / "medpers_bp.json").string();
  const auto r = run("solve " + fixture("kg.json") + " --mode bp --out " + path);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), r.out);
}

TEST(Cli, ExitCodes) {
  const auto unknown = temp_file("medpers_unknown.json", R"({"prior": 0.3, "colour": 1})");
  EXPECT_EQ(run("solve " + unknown + " --mode bp").code, 2);
  EXPECT_EQ(run("solve " + fixture("kg.json") + " --mode nonsense").code, 2);
  EXPECT_EQ(run("solve " + fixture("kg.json") + " --mode check").code, 2);
  EXPECT_EQ(run("solve /nonexistent.json --mode bp").code, 2);
  const auto singular =
      temp_file("medpers_singular.json", R"({"prior": 0.3, "sigma": [[0.4, 0.4], [0.6, 0.6]]})");
  EXPECT_EQ(run("feasible " + singular).code, 3);
  EXPECT_EQ(run("order --a '1,0;0,1'").code, 2);
}
