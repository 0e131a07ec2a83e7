#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "test_util.hpp"

using namespace wherecheck;
using namespace wherecheck::testing;

namespace {

struct CliRun {
  std::string out;
  int code = -1;
};

CliRun cli(const std::string& args) {
  CliRun r;
  const std::string cmd = std::string(WHERECHECK_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string declass(const std::string& name) {
  return corpus("declass/" + name) + " --policy " + corpus("declass/default.policy");
}

} // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("analyze " + declass("P0")).code, 0);
  EXPECT_EQ(cli("analyze " + declass("P3")).code, 1);
  EXPECT_EQ(cli("analyze /nonexistent --policy " + corpus("declass/default.policy")).code, 3);
  EXPECT_EQ(cli("analyze").code, 3);
  EXPECT_EQ(cli("analyze " + declass("P0") + " --mode bogus").code, 3);
}

TEST(Cli, ReportFormat) {
  CliRun r = cli("analyze " + declass("P3") + " --bits 2");
  EXPECT_EQ(r.out.rfind("CONFIG bits=2 capacity=8 mode=storematch\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("RESULT level=L verdict=insecure"), std::string::npos);
  EXPECT_NE(r.out.find("OVERALL verdict=insecure"), std::string::npos);
}

TEST(Cli, Deterministic) {
  for (const char* p : {"P0", "P3", "P5"}) {
    CliRun a = cli("analyze " + declass(p) + " --witness --bits 2");
    CliRun b = cli("analyze " + declass(p) + " --witness --bits 2");
    EXPECT_EQ(a.out, b.out) << p;
  }
}

TEST(Cli, WitnessReplays) {
  CliRun r = cli("analyze " + declass("P4") + " --witness --bits 2");
  EXPECT_NE(r.out.find("replayed=yes"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("RUN1 store:"), std::string::npos);
  EXPECT_NE(r.out.find("RUN2 store:"), std::string::npos);
}

TEST(Cli, OracleAndDumps) {
  CliRun r = cli("analyze " + declass("P1") + " --bits 1 --oracle --dump-model --dump-composed");
  EXPECT_NE(r.out.find("ORACLE where-security secure"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("# composed level L mode storematch"), std::string::npos);
  EXPECT_NE(r.out.find("idle -> idle [rt(G)]"), std::string::npos);
}

TEST(Cli, Nmin) {
  EXPECT_EQ(cli("nmin " + declass("P3") + " --max-bits 3").out, "NMIN 1\n");
  CliRun r = cli("nmin " + declass("P0") + " --max-bits 2");
  EXPECT_EQ(r.out, "NMIN none\n");
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, Bench) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "wherecheck_bench_test";
  fs::create_directories(dir);
  std::ofstream(dir / "default.policy") << kIoPolicy;
  std::ofstream(dir / "A") << "output(l, o)\n";
  std::ofstream(dir / "B") << "input(h, ih); output(h, o)\n";
  CliRun r = cli("bench " + dir.string() + " --bits 1 --capacity 2");
  fs::remove_all(dir);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("BENCH A low-output=yes storematch: verdict=secure"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("BENCH B low-output=yes storematch: verdict=insecure"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("BENCH-TOTAL"), std::string::npos);
}

TEST(Analysis, TrAgreesWithStorematch) {
  const char* programs[] = {"output(l, o)", "input(h, ih); output(h, o)", "if h then output(1, o) else skip fi",
                            "x := declass(h); output(x, o)"};
  for (const char* src : programs)
    EXPECT_EQ(verdict(src, io_policy(), 1, 2, ComposeMode::storematch), verdict(src, io_policy(), 1, 2, ComposeMode::tr))
        << src;
}

TEST(Analysis, NodeLimitGivesInconclusive) {
  AnalyzeOptions o;
  o.bits = 2;
  o.node_limit = 50;
  AnalysisReport r = analyze(parse_program("l := h"), two_level(), o);
  EXPECT_EQ(r.overall, Verdict::inconclusive);
  EXPECT_EQ(exit_code(r.overall), 2);
}
