#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "twist/generators.hpp"
#include "twist/io.hpp"

namespace fs = std::filesystem;
using namespace twist;

namespace {

struct CliResult {
  int exit = -1;
  std::string out;
};

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + TWIST_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  CliResult r;
  char buf[4096];
  size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  const int status = pclose(p);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("twist_cli_" + std::to_string(::getpid()) + "_" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, HamPathOfTwistedK5) {
  ASSERT_EQ(run("gen --kind canonical-gt --n 5 -o " + file("k5.json")).exit, 0);
  const CliResult r = run("ham-path " + file("k5.json"));
  ASSERT_EQ(r.exit, 0);
  EXPECT_EQ(parse_json(r.out).at("vertices"), Json::parse("[1,4,2,5,3]"));
}

TEST_F(Cli, CheckGtOnConvexIsFalse) {
  write_drawing(convex_drawing(5), file("c5.json"));
  const CliResult r = run("check-gt " + file("c5.json"));
  EXPECT_EQ(r.exit, 0);
  EXPECT_EQ(r.out, "false\n");
}

TEST_F(Cli, ExitCodes) {
  Json j = drawing_to_json(convex_drawing(4));
  for (auto& e : j["edges"])
    if (e["u"] == 1 && e["v"] == 3) e["crossings"].push_back(e["crossings"][0]);
  write_text(file("bad.json"), dump_json(j));
  EXPECT_EQ(run("validate " + file("bad.json")).exit, 2);
  EXPECT_EQ(run("validate " + file("missing.json")).exit, 2);
  EXPECT_EQ(run("").exit, 1);
  EXPECT_EQ(run("gen --kind nonsense --n 4").exit, 1);
  EXPECT_EQ(run("ham-cycle " + file("bad.json")).exit, 2);
}

TEST_F(Cli, CertificateRoundTrip) {
  const Drawing d = random_gt(9, 12).drawing;
  write_drawing(d, file("d.json"));
  const CliResult r = run("check-gt --certify " + file("d.json"));
  ASSERT_EQ(r.exit, 0);
  write_text(file("cert.json"), r.out);
  EXPECT_EQ(oracle::check_certificate(drawing_to_json(d), parse_json(r.out)), "");
  const CliResult v = run("validate " + file("cert.json"));
  EXPECT_EQ(v.exit, 0);
  EXPECT_EQ(v.out, "valid\n");
}

TEST_F(Cli, GeneratedDrawingsPassOracle) {
  for (const std::string kind : {"canonical-gt", "random-gt", "convex", "points-random", "cmonotone-mixed"}) {
    const CliResult r = run("gen --kind " + kind + " --n 7 --seed 2");
    ASSERT_EQ(r.exit, 0) << kind;
    EXPECT_EQ(oracle::check_drawing_json(parse_json(r.out)), "") << kind;
  }
}

TEST_F(Cli, DeterministicAndSeeded) {
  const CliResult a = run("gen --kind random-gt --n 8 --seed 5"), b = run("gen --kind random-gt --n 8 --seed 5");
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run("gen --kind random-gt --n 8 --seed 6").out);
  EXPECT_EQ(run("gen --kind random-gt --n 8", "TWIST_SEED=5").out, a.out);
  write_text(file("d.json"), a.out);
  EXPECT_EQ(run("matching --order shuffle:3 " + file("d.json")).out, run("matching --order shuffle:3 " + file("d.json")).out);
}

TEST_F(Cli, GlobBatch) {
  fs::create_directories(dir / "in");
  write_drawing(canonical_gt(5).drawing, file("in/a.json"));
  write_drawing(convex_drawing(5), file("in/b.json"));
  write_text(file("in/c.json"), "{");
  const CliResult r = run("check-gt --glob '" + file("in/*.json") + "'");
  EXPECT_EQ(r.exit, 2);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<Json> rows;
  while (std::getline(lines, line)) rows.push_back(parse_json(line));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].at("output"), "true\n");
  EXPECT_EQ(rows[1].at("output"), "false\n");
  EXPECT_EQ(rows[2].at("exit"), 2);
}

TEST_F(Cli, OtherSubcommands) {
  const auto g = canonical_gt(7);
  write_text(file("s.json"), dump_json(strip_to_json(g.scene)));
  write_drawing(g.drawing, file("d.json"));
  const CliResult cyc = run("ham-cycle " + file("d.json"));
  ASSERT_EQ(cyc.exit, 0);
  EXPECT_EQ(parse_json(cyc.out).at("vertices").size(), 7u);
  EXPECT_EQ(run("dilworth --s 3 --t 3 " + file("s.json")).exit, 0);
  EXPECT_EQ(run("plane-path " + file("d.json")).exit, 0);
  EXPECT_EQ(run("curve " + file("s.json")).exit, 0);
  const CliResult ext = run("extend " + file("d.json"));
  ASSERT_EQ(ext.exit, 0);
  EXPECT_EQ(oracle::check_drawing_json(parse_json(ext.out)), "");
  const CliResult svg = run("export-svg " + file("d.json"));
  EXPECT_EQ(svg.exit, 0);
  EXPECT_NE(svg.out.find("<svg"), std::string::npos);
  EXPECT_EQ(run("iso -a " + file("d.json") + " -b " + file("d.json")).exit, 0);
  const CliResult an = run("analyze " + file("d.json"));
  EXPECT_EQ(an.exit, 0);
  EXPECT_EQ(parse_json(an.out).at("crossings"), 35);
}
