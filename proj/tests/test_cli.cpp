#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(BOMCA_CLI) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) o.output += buf;
  const int status = pclose(p);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string config(const std::string& name) { return std::string(BOMCA_CONFIG_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch() {
  auto d = std::filesystem::temp_directory_path() / "bomca_test_cli";
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, ValidateOk) {
  const auto o = run("validate " + config("eckart_n1.json"));
  EXPECT_EQ(o.code, 0) << o.output;
  EXPECT_NE(o.output.find("ok"), std::string::npos);
}

TEST(Cli, ValidateRejectsZeroTruncation) {
  std::ifstream in(config("free.json"));
  std::string text((std::istreambuf_iterator<char>(in)), {});
  const auto pos = text.find("\"truncation\": 1");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 15, "\"truncation\": 0");
  const auto path = scratch() / "n0.json";
  std::ofstream(path) << text;
  const auto o = run("validate " + path.string());
  EXPECT_EQ(o.code, 1) << o.output;
  EXPECT_NE(o.output.find("truncation"), std::string::npos) << o.output;
}

TEST(Cli, MissingFileIsUsageError) { EXPECT_EQ(run("validate /nonexistent/cfg.json").code, 1); }

TEST(Cli, NoSubcommandFails) { EXPECT_NE(run("").code, 0); }

TEST(Cli, RunTwiceIsByteIdentical) {
  const auto dir = scratch();
  const auto a = run("run " + config("free.json") + " --out " + (dir / "a").string());
  const auto b = run("run " + config("free.json") + " --out " + (dir / "b").string() + " --threads 2");
  ASSERT_EQ(a.code, 0) << a.output;
  ASSERT_EQ(b.code, 0) << b.output;
  for (const char* f : {"branches.csv", "psi_branch_1.csv", "psi_exact.csv", "report.json"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "timing.json"));
}

TEST(Cli, ScanFreeFindsOneRoot) {
  const auto o = run("scan " + config("free.json") + " --xf 0");
  EXPECT_EQ(o.code, 0) << o.output;
  EXPECT_NE(o.output.find("1 roots at x_f = 0"), std::string::npos) << o.output;
}

TEST(Cli, OracleWritesGrid) {
  const auto dir = scratch() / "oracle";
  const auto o = run("oracle " + config("harmonic.json") + " --out " + dir.string());
  EXPECT_EQ(o.code, 0) << o.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "oracle_grid.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "psi_exact.csv"));
}
