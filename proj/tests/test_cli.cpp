#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

// stdout and stderr are merged
CliRun run(const std::string& args) {
  std::string cmd = std::string(CDINEQ_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

nlohmann::json analyze_json(const std::string& poly, const std::string& extra = "") {
  CliRun r = run("analyze --format json --poly '" + poly + "' " + extra);
  EXPECT_EQ(r.status, 0) << r.out;
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST(Cli, EisensteinBaseCase) {
  auto doc = analyze_json("x^6 - t", "--prime 101");
  EXPECT_EQ(doc["minus_art"], 5);
  EXPECT_EQ(doc["disc_valuation"], 5);
  EXPECT_EQ(doc["equality"]["equal"], true);
  EXPECT_EQ(doc["inequality_holds"], true);
  EXPECT_EQ(doc["genus"], 2);
}

TEST(Cli, Collision) {
  CliRun e = run("example --family collision --prime 101");
  ASSERT_EQ(e.status, 0);
  std::string expr = e.out.substr(0, e.out.find('\n'));
  EXPECT_EQ(expr, "(x - 1)*(x - 2)*(x - 3)*(x - t^2)*(x - 2*t^2)*(x - 3*t^2)");
  auto doc = analyze_json(expr);
  EXPECT_EQ(doc["disc_valuation"], 12);
  EXPECT_LT(doc["minus_art"].get<int>(), 12);
  EXPECT_EQ(doc["equality"]["equal"], false);
  bool w4 = false;
  for (auto& w : doc["equality"]["witnesses"]) w4 = w4 || w["weight"] == 4;
  EXPECT_TRUE(w4);
}

TEST(Cli, InputErrors) {
  CliRun a = run("analyze --poly 'x^2'");
  EXPECT_EQ(a.status, 2);
  EXPECT_NE(a.out.find("NotSquarefree"), std::string::npos);
  CliRun b = run("analyze --poly 't*x^2 + 1'");
  EXPECT_EQ(b.status, 2);
  EXPECT_NE(b.out.find("NonUnitLeadingCoefficient"), std::string::npos);
  CliRun c = run("analyze --poly 'x^2 +* t'");
  EXPECT_EQ(c.status, 2);
  EXPECT_NE(c.out.find("column 6"), std::string::npos);
  EXPECT_EQ(run("analyze --poly 'x^2 - t' --prime 12").status, 2);
  EXPECT_EQ(run("analyze --bogus").status, 2);
  EXPECT_EQ(run("example --family nope").status, 2);
}

TEST(Cli, ExtensionCap) {
  // x^2 - 2 is irreducible over F_5
  CliRun r = run("analyze --prime 5 --poly 'x^2 - 2' --max-extension 1");
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.out.find("ExtensionDegreeExceeded"), std::string::npos);
}

TEST(Cli, DeterministicJson) {
  std::string args = "analyze --format json --poly '(x - t)*(x - 2*t)*(x - 3*t)*(x - 4*t)*(x^2 - t^3)'";
  CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto doc = nlohmann::json::parse(a.out);
  EXPECT_EQ(nlohmann::json::parse(doc.dump(2)), doc);
  EXPECT_EQ(doc.dump(2) + "\n", a.out);
}

TEST(Cli, JsonFileMatchesStdout) {
  std::string path = ::testing::TempDir() + "cdineq_report.json";
  CliRun r = run("analyze --poly 'x^3 - t^2' --json " + path);
  ASSERT_EQ(r.status, 0);
  std::ifstream in(path);
  auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["minus_art"], 4);
  EXPECT_EQ(doc, analyze_json("x^3 - t^2"));
}

TEST(Cli, Examples) {
  CliRun e = run("example --family eisenstein -g 2");
  EXPECT_EQ(e.out, "x^6 - t\n");
  CliRun p = run("example --family pairs -g 2 --prime 101");
  EXPECT_EQ(p.out, "(x - 1)*(x - 1 + t)*(x - 2)*(x - 2 + t)\n");
  CliRun tr = run("example --family triple -g 2");
  EXPECT_EQ(tr.status, 0);
  auto doc = analyze_json(tr.out.substr(0, tr.out.find('\n')));
  EXPECT_EQ(doc["equality"]["equal"], true);
  EXPECT_FALSE(doc["notes"].empty());
}

TEST(Cli, TreeOutputs) {
  const std::string fig1 = "'x^6 - 2*t^2*x^3 - 9*t^3*x^2 - 6*t^4*x + t^4 - t^5'";
  CliRun dot = run("tree --prime 13 --format dot --poly " + fig1);
  ASSERT_EQ(dot.status, 0);
  EXPECT_NE(dot.out.find("digraph"), std::string::npos);
  EXPECT_NE(dot.out.find("2/3"), std::string::npos);
  CliRun ascii = run("tree --prime 13 --poly " + fig1);
  EXPECT_NE(ascii.out.find("(6 leaves)"), std::string::npos);
  CliRun js = run("tree --format json --poly 'x^2 - t'");
  auto j = nlohmann::json::parse(js.out);
  int leaves = 0;
  for (auto& n : j["nodes"]) leaves += n["leaf"].get<bool>();
  EXPECT_EQ(leaves, 2);
  CliRun two = run("tree --poly '(x - 1)*(x - 2)'");
  EXPECT_EQ(two.out.find("node depth"), std::string::npos);
}
