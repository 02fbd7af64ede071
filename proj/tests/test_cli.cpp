#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "support.hpp"

namespace {

struct Shell {
  int status = -1;
  std::string out;
};

Shell sh(const std::string& command) {
  Shell r;
  FILE* p = popen(command.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string cli() { return FLOBOUND_CLI; }
std::string corpus_path(const std::string& name) { return flotest::source_dir() + "/corpus/" + name; }
std::string tmp(const std::string& name) { return testing::TempDir() + "flobound_" + name; }

}  // namespace

TEST(Cli, ToyFromStandardInput) {
  Shell r = sh("printf '{ x + 1 in [2,3] -> x in ? }' | " + cli() + " -");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("x in [1, 2]"), std::string::npos) << r.out;
}

TEST(Cli, ParseErrorExitsOne) {
  Shell r = sh("printf 'x in' | " + cli() + " - 2>&1");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("syntax error"), std::string::npos) << r.out;
  EXPECT_EQ(sh(cli() + " /nonexistent/script.g 2>/dev/null").status, 1);
}

TEST(Cli, UnprovedExitsTwo) {
  Shell r = sh(cli() + " " + corpus_path("sine_initial.g"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("no path was found for Epstotal."), std::string::npos);
}

TEST(Cli, BudgetExitsThree) {
  Shell r = sh(cli() + " --budget 10 -Munconstrained " + corpus_path("sine_full.g"));
  EXPECT_EQ(r.status, 3);
}

TEST(Cli, UnconstrainedSpellings) {
  Shell a = sh(cli() + " -Munconstrained " + corpus_path("sine_full.g"));
  Shell b = sh(cli() + " --unconstrained " + corpus_path("sine_full.g"));
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(sh(cli() + " -Mbogus " + corpus_path("toy.g") + " 2>/dev/null").status, 0);
}

TEST(Cli, PrecisionFromEnvironment) {
  std::string cert = tmp("prec.cert");
  Shell r = sh("TOOL_PRECISION=100 " + cli() + " --cert " + cert + " " + corpus_path("toy.g"));
  ASSERT_EQ(r.status, 0);
  std::string c = flotest::read_file(cert);
  EXPECT_NE(c.find("options precision 100 unconstrained 0"), std::string::npos);
  sh(cli() + " --precision 64 --cert " + cert + " " + corpus_path("toy.g"));
  EXPECT_NE(flotest::read_file(cert).find("options precision 64 "), std::string::npos);
}

TEST(Cli, CheckSubcommand) {
  std::string cert = tmp("toy.cert");
  ASSERT_EQ(sh(cli() + " --cert " + cert + " " + corpus_path("toy.g")).status, 0);
  Shell r = sh(cli() + " check " + corpus_path("toy.g") + " " + cert);
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "certificate: pass\n");
  Shell m = sh(cli() + " check " + corpus_path("split.g") + " " + cert);
  EXPECT_EQ(m.status, 2);
  EXPECT_EQ(m.out.rfind("certificate: hash mismatch", 0), 0u) << m.out;
}

TEST(Cli, StrictHints) {
  std::string script = tmp("bad_hint.g");
  std::ofstream(script) << "{ a in [1, 2] -> a - 1 in ? }\na - 1 -> a + 1;\n";
  Shell loose = sh(cli() + " " + script);
  EXPECT_EQ(loose.status, 0);
  EXPECT_NE(loose.out.find("the hint is ignored"), std::string::npos);
  EXPECT_EQ(sh(cli() + " --strict-hints " + script + " 2>/dev/null").status, 1);
}

TEST(Cli, GoldenReports) {
  struct G {
    const char* script;
    const char* flags;
    const char* golden;
  };
  const G all[] = {{"toy.g", "", "toy"},
                   {"exact_sub.g", "", "exact_sub"},
                   {"rounded_sum.g", "", "rounded_sum"},
                   {"contradiction.g", "", "contradiction"},
                   {"split.g", "", "split"},
                   {"sine_initial.g", "", "sine_initial"},
                   {"sine_initial_my.g", "", "sine_initial_my"},
                   {"sine_full.g", "", "sine_full"},
                   {"sine_full.g", "-Munconstrained ", "sine_full.unconstrained"}};
  for (const G& g : all) {
    Shell r = sh("cd " + flotest::source_dir() + "/corpus && " + cli() + " " + g.flags + g.script);
    std::string want = flotest::read_file(flotest::source_dir() + "/tests/golden/" + g.golden + ".out");
    EXPECT_EQ(r.out, want) << g.golden;
  }
}

TEST(Cli, GoldenCertificates) {
  for (const char* name : {"toy", "contradiction"}) {
    std::string cert = tmp(std::string(name) + ".golden.cert");
    sh(cli() + " --cert " + cert + " " + corpus_path(std::string(name) + ".g"));
    EXPECT_EQ(flotest::read_file(cert), flotest::read_file(flotest::source_dir() + "/tests/golden/" + name + ".cert"))
        << name;
  }
}
