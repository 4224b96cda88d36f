#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "regrew/cli.hpp"
#include "regrew/dsl.hpp"

namespace regrew {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "regrew");
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("regrew_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("REGREW_MAX_FORMS");
  }
  void TearDown() override {
    unsetenv("REGREW_MAX_FORMS");
    fs::remove_all(dir_);
  }

  std::string file(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

const char* kSelfForbid = "kind rc\nnonterminals S A B\nterminals a b\nstart S\nS -> A B per A for B\nA -> a\nB -> b\n"
                          "S -> S for S\n";
const char* kSingle = "kind rc\nnonterminals S\nterminals a\nstart S\nS -> a\n";

TEST_F(Cli, EnumT2AtThree) {
  auto r = run({"enum", file("t2.rg", testing::t_n_text(2)), "--bound", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "# bound 3 words 6 max_forms 1000000\na1\na2\na1 a1\na2 a2\na1 a1 a1\na2 a2 a2\n");
}

TEST_F(Cli, EnumJsonAndByteStability) {
  std::string g = file("t2.rg", testing::t_n_text(2));
  auto a = run({"enum", g, "--bound", "4", "--json"});
  auto b = run({"enum", g, "--bound", "4", "--json"});
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"a1 a1 a1 a1\""), std::string::npos);
  EXPECT_NE(a.out.find("\"max_forms\": 1000000"), std::string::npos);
}

TEST_F(Cli, EnumCapIsExitTwo) {
  setenv("REGREW_MAX_FORMS", "3", 1);
  auto r = run({"enum", file("abc.rg", testing::anbncn_text()), "--bound", "6"});
  EXPECT_EQ(r.code, kExitInconclusive);
  EXPECT_NE(r.out.find("max_forms 3 truncated"), std::string::npos) << r.out;
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, UsageErrors) {
  std::string g = file("g.rg", kSingle);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"enum", g}).code, kExitUsage);
  EXPECT_EQ(run({"enum", g, "--bound", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"enum", g, "--bound", "x"}).code, kExitUsage);
  EXPECT_EQ(run({"transform", g, "--op", "nope", "-o", path("o.rg")}).code, kExitUsage);
  EXPECT_EQ(run({"pipeline", g, "--ops", "lemma1,nope", "-o", path("o.rg")}).code, kExitUsage);
  EXPECT_EQ(run({"fuzz", "--bound", "3", "--kind", "cfg"}).code, kExitUsage);
  auto r = run({"enum", g});
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST_F(Cli, HelpIsSuccess) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("validate"), std::string::npos);
}

TEST_F(Cli, ValidateOutcomes) {
  EXPECT_EQ(run({"validate", file("g.rg", kSingle)}).code, kExitOk);
  auto bad = run({"validate", file("bad.rg", "kind rc\nnonterminals S\nterminals a\nstart S\nS -> b\n")});
  EXPECT_EQ(bad.code, kExitNegative);
  EXPECT_NE(bad.err.find("unknown symbol"), std::string::npos) << bad.err;
  EXPECT_EQ(run({"validate", path("missing.rg")}).code, kExitNegative);
}

TEST_F(Cli, StatsReportsDigest) {
  std::string g = file("g.rg", kSingle);
  auto r = run({"stats", g});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"digest\": \"" + digest(parse_single_grammar(kSingle)) + "\""), std::string::npos) << r.out;
  EXPECT_EQ(r.out, run({"stats", g}).out);
}

TEST_F(Cli, MemberOutcomes) {
  std::string g = file("t2.rg", testing::t_n_text(2));
  auto yes = run({"member", g, "--word", "a1 a1"});
  EXPECT_EQ(yes.code, kExitOk);
  EXPECT_NE(yes.out.find("\"status\": \"member\""), std::string::npos);
  auto no = run({"member", g, "--word", "a1 a2"});
  EXPECT_EQ(no.code, kExitNegative);
  EXPECT_NE(no.out.find("\"status\": \"not-member\""), std::string::npos);
  EXPECT_EQ(run({"member", g, "--word", "zz"}).code, kExitNegative);
  setenv("REGREW_MAX_FORMS", "2", 1);
  auto cap = run({"member", file("abc.rg", testing::anbncn_text()), "--word", "a a b b c c"});
  EXPECT_EQ(cap.code, kExitInconclusive);
  EXPECT_NE(cap.out.find("\"status\": \"inconclusive\""), std::string::npos);
}

TEST_F(Cli, TransformValidateEquivRoundTrip) {
  std::string g = file("g.rg", kSelfForbid);
  std::string out = path("out.rg");
  auto t = run({"transform", g, "--op", "lemma1", "-o", out});
  ASSERT_EQ(t.code, kExitOk) << t.err;
  EXPECT_NE(t.out.find("lemma1/priming"), std::string::npos);
  auto v = run({"validate", out});
  EXPECT_EQ(v.code, kExitOk);
  EXPECT_NE(v.out.find("\"lhs_not_in_forbid\": true"), std::string::npos);
  auto e = run({"equiv", g, out, "--bound", "6"});
  EXPECT_EQ(e.code, kExitOk);
  EXPECT_NE(e.out.find("\"status\": \"equal\""), std::string::npos);

  std::ifstream in(out);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# regrew transform lemma1");
}

TEST_F(Cli, TransformIsByteStable) {
  std::string g = file("g.rg", kSelfForbid);
  ASSERT_EQ(run({"transform", g, "--op", "lemma1", "-o", path("a.rg")}).code, kExitOk);
  ASSERT_EQ(run({"transform", g, "--op", "lemma1", "-o", path("b.rg")}).code, kExitOk);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_EQ(slurp(path("a.rg")), slurp(path("b.rg")));
}

TEST_F(Cli, TransformPreconditionIsExitOne) {
  auto r = run({"transform", file("g.rg", kSingle), "--op", "sc-to-rc", "-o", path("o.rg")});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_FALSE(fs::exists(path("o.rg")));
}

TEST_F(Cli, TransformPruneFlag) {
  std::string g = file("g.rg", "kind rc\nnonterminals S A B\nterminals a\nstart S\nS -> a\nA -> B\nB -> a\n");
  auto r = run({"transform", g, "--op", "lemma1", "-o", path("o.rg"), "--prune-unreachable"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("\"pruned_productions\": 4"), std::string::npos) << r.out;
}

TEST_F(Cli, PipelineInsertsLemma1) {
  std::string g = file("g.rg", kSelfForbid);
  auto r = run({"pipeline", g, "--ops", "lemma2", "-o", path("cd.rg")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("inserted lemma1 before lemma2"), std::string::npos);
  EXPECT_EQ(run({"validate", path("cd.rg")}).code, kExitOk);
  EXPECT_EQ(run({"equiv", g, path("cd.rg"), "--bound", "4"}).code, kExitOk);
}

TEST_F(Cli, PipelineSizeCapIsExitOne) {
  auto r = run({"pipeline", file("g.rg", kSelfForbid), "--ops", "lemma2,thm3", "-o", path("o.rg")});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_NE(r.err.find("above the cap"), std::string::npos) << r.err;
}

TEST_F(Cli, EquivOutcomes) {
  std::string t2 = file("t2.rg", testing::t_n_text(2));
  std::string t3 = file("t3.rg", testing::t_n_text(3));
  auto ce = run({"equiv", t2, t3, "--bound", "3"});
  EXPECT_EQ(ce.code, kExitNegative);
  EXPECT_NE(ce.out.find("\"witness\": \"a3\""), std::string::npos) << ce.out;
  setenv("REGREW_MAX_FORMS", "3", 1);
  std::string abc = file("abc.rg", testing::anbncn_text());
  EXPECT_EQ(run({"equiv", abc, abc, "--bound", "6"}).code, kExitInconclusive);
}

TEST_F(Cli, FuzzOutcomes) {
  std::vector<std::string> args{"fuzz", "--kind", "sc", "--ops", "sc-to-rc", "--count", "5", "--seed", "3",
                                "--bound", "4"};
  auto a = run(args);
  EXPECT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, run(args).out);
  EXPECT_NE(a.out.find("\"counterexample\": 0"), std::string::npos) << a.out;
  auto mismatch = run({"fuzz", "--kind", "rc", "--ops", "thm3", "--bound", "3"});
  EXPECT_EQ(mismatch.code, kExitNegative);
  args.push_back("-o");
  args.push_back(path("fuzz.json"));
  EXPECT_EQ(run(args).code, kExitOk);
  EXPECT_TRUE(fs::exists(path("fuzz.json")));
}

}  // namespace
}  // namespace regrew
