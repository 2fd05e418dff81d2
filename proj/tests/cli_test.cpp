#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "cli.hpp"

namespace inflogic::cli {
namespace {

const std::string kData = INFLOGIC_DATA_DIR;
std::string data(const std::string& name) { return kData + "/" + name; }

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

TEST(Cli, ClassifyBuiltinSentence) {
  const Result r = call({"classify", "--formula", data("psi_blocks.fml")});
  EXPECT_EQ(r.status, kDecided) << r.err;
  EXPECT_EQ(r.out.rfind("forall_rank=2 exists_rank=3 ", 0), 0U) << r.out;
}

TEST(Cli, TreeSelfLoopWeakForce) {
  const Result r = call({"tree", "--spec", data("selfloop.json"), "--weak-force"});
  EXPECT_EQ(r.status, kDecided) << r.err;
  EXPECT_TRUE(contains(r.out, "TRUE route=tree-oracle certificate=[cycle r]")) << r.out;
}

TEST(Cli, BlockAlternationColumn) {
  const Result r = call({"block", "--config", data("A.json"), "--alternate", "--steps", "4"});
  EXPECT_EQ(r.status, kDecided) << r.err;
  EXPECT_TRUE(contains(r.out, "truth column F,T,F,T,F")) << r.out;
}

TEST(Cli, UnboundVariableIsAnError) {
  const Result r = call({"eval", "--structure", data("path.json"), "--formula", data("free_x.fml")});
  EXPECT_EQ(r.status, kError);
  EXPECT_TRUE(contains(r.err, "unbound variable x")) << r.err;
}

TEST(Cli, EvalWithAssignmentDecides) {
  const Result t = call({"eval", "-s", data("path.json"), "-f", data("free_x.fml"), "-a", "x=u"});
  EXPECT_EQ(t.status, kDecided) << t.err;
  EXPECT_TRUE(contains(t.out, "TRUE")) << t.out;
  const Result f = call({"eval", "-s", data("path.json"), "-f", data("free_x.fml"), "-a", "x=w"});
  EXPECT_EQ(f.status, kDecided) << f.err;
  EXPECT_TRUE(contains(f.out, "FALSE")) << f.out;
}

TEST(Cli, SyntaxErrorsCarryPositions) {
  const Result r = call({"check", "--formula", "(exists (x) (atom E x"});
  EXPECT_EQ(r.status, kError);
  EXPECT_TRUE(contains(r.err, "syntax error at")) << r.err;
}

TEST(Cli, UsageErrorPrintsSubcommandHelp) {
  const Result r = call({"tree", "--weak-force"});
  EXPECT_EQ(r.status, kError);
  EXPECT_TRUE(contains(r.err, "--spec")) << r.err;
  const Result none = call({});
  EXPECT_EQ(none.status, kError);
}

TEST(Cli, HelpExitsZero) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.status, kDecided);
  for (const std::string& name : subcommand_names()) EXPECT_TRUE(contains(r.out, name)) << name;
  const Result sub = call({"borel", "--help"});
  EXPECT_EQ(sub.status, kDecided);
  EXPECT_TRUE(contains(sub.out, "--basis"));
}

TEST(Cli, RecordsFormatIsOneKeyValuePerLine) {
  const Result r = call({"--format", "records", "classify", "--builtin", "psi_blocks"});
  ASSERT_EQ(r.status, kDecided) << r.err;
  std::istringstream lines(r.out);
  std::set<std::string> keys;
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    ASSERT_NE(eq, std::string::npos) << line;
    keys.insert(line.substr(0, eq));
  }
  EXPECT_TRUE(keys.count("forall_rank"));
  EXPECT_TRUE(contains(r.out, "exists_rank=3\n"));
}

TEST(Cli, BudgetFromEnvironment) {
  ::setenv("INFLOGIC_BUDGET", "zero", 1);
  const Result bad = call({"classify", "--builtin", "psi_tree"});
  EXPECT_EQ(bad.status, kError);
  EXPECT_TRUE(contains(bad.err, "INFLOGIC_BUDGET")) << bad.err;
  ::setenv("INFLOGIC_BUDGET", "8", 1);
  const Result ok = call({"classify", "--builtin", "psi_tree"});
  EXPECT_EQ(ok.status, kDecided) << ok.err;
  ::unsetenv("INFLOGIC_BUDGET");
}

TEST(Cli, UnknownExitStatus) {
  // The family body is not a literal, so it is swept over 0..budget-1, which
  // misses the labels 0 and 1 of the structure plus a fresh value.
  const std::vector<std::string> args = {"eval", "-s", data("blocks_small.json"), "--method", "weak-finite", "-f",
                                         "(exists (y) (And (n) (or (not (atom P_n y)) (atom Q y))))"};
  std::vector<std::string> tight = {"--budget", "1"};
  tight.insert(tight.end(), args.begin(), args.end());
  const Result r = call(tight);
  EXPECT_EQ(r.status, kUnknown) << r.out << r.err;
  const Result wide = call(args);
  EXPECT_EQ(wide.status, kDecided) << wide.err;
  EXPECT_TRUE(contains(wide.out, "TRUE")) << wide.out;
}

// One representative invocation per subcommand.
std::vector<std::vector<std::string>> sample_invocations() {
  return {
      {"check", "--formula", data("reach.fml")},
      {"classify", "--builtin", "psi_tree"},
      {"negate", "--formula", data("reach.fml"), "--nnf"},
      {"fragment", "--builtin", "psi_blocks"},
      {"force", "--builtin", "psi_tree", "--leaves", "2", "2"},
      {"eval", "-s", data("path.json"), "-f", data("reach.fml"), "--method", "elementary"},
      {"eval", "-s", data("path.json"), "-f", data("reach.fml"), "--method", "weak-finite"},
      {"weak-force", "-s", data("path.json"), "-f", data("reach.fml"), "--audit"},
      {"weak-force", "--tree", data("finite_tree.json")},
      {"weak-force", "--blocks", data("A.json")},
      {"nelem", "--sub", data("path_sub.json"), "--super", data("path.json"), "-n", "1"},
      {"realize", "-s", data("path.json"), "--vars", "x,y", "-f", "(atom E x y)"},
      {"tree", "--spec", data("stem.json"), "--path", "--forces", "--satisfies"},
      {"tree", "--spec", data("finite_tree.json"), "--truncate", "2"},
      {"block", "--config", data("two_blocks.json"), "--truncate", "2", "2"},
      {"block", "--config", data("A.json"), "--weak-force"},
      {"borel", "--basis", data("basis.json"), "--code", data("code.json"), "--check"},
      {"borel", "--basis", data("basis.json"), "--code", data("code.json"), "--face", "{0,2}"},
      {"borel", "--basis", data("basis.json"), "--xi", "{1}"},
      {"demo", "--steps", "2"},
  };
}

TEST(Cli, EverySubcommandRuns) {
  std::set<std::string> exercised;
  for (const auto& args : sample_invocations()) {
    const Result r = call(args);
    EXPECT_EQ(r.status, kDecided) << args.front() << ": " << r.err;
    EXPECT_FALSE(r.out.empty()) << args.front();
    exercised.insert(args.front());
  }
  for (const std::string& name : subcommand_names()) EXPECT_TRUE(exercised.count(name)) << name;
}

TEST(Cli, CoverageTableReachesEveryOperation) {
  const std::vector<std::string> names = subcommand_names();
  const std::set<std::string> registered(names.begin(), names.end());
  std::set<std::pair<std::string, std::string>> ops;
  for (const CoverageEntry& e : coverage_table()) {
    EXPECT_TRUE(registered.count(e.subcommand)) << e.operation << " -> " << e.subcommand;
    ops.insert({e.module, e.operation});
  }
  // The module operations, listed independently of the table.
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"formula-core", "parse_formula"},         {"formula-core", "render_formula"},
      {"formula-core", "free_vars"},             {"formula-core", "wellformed"},
      {"formula-core", "formal_negate"},         {"formula-core", "classify"},
      {"formula-core", "fragment_closure"},      {"finite-model", "satisfies"},
      {"finite-model", "weak_force_finite"},     {"finite-model", "is_substructure"},
      {"finite-model", "n_elementary"},          {"finite-model", "type_realized"},
      {"force-transform", "force"},              {"force-transform", "elementary_leaves"},
      {"force-transform", "eval_elementary"},    {"family-oracles", "build_tree_structure"},
      {"family-oracles", "truncate_to_finite"},  {"family-oracles", "tree_has_infinite_path"},
      {"family-oracles", "tree_forces_psi"},     {"family-oracles", "tree_satisfies_psi"},
      {"family-oracles", "block_satisfies_psi"}, {"family-oracles", "block_forces_psi"},
      {"family-oracles", "alternate_extension"}, {"borel-compiler", "xi_formula"},
      {"borel-compiler", "borel_to_formula"},    {"borel-compiler", "borel_membership"},
      {"forcing-eval", "weak_forces"},           {"forcing-eval", "audit"},
      {"cli", "run"},
  };
  for (const auto& op : expected) EXPECT_TRUE(ops.count(op)) << op.first << "/" << op.second;
}

TEST(Cli, OutputIsDeterministic) {
  for (const auto& args : sample_invocations()) {
    const Result a = call(args);
    const Result b = call(args);
    EXPECT_EQ(a.out, b.out) << args.front();
    EXPECT_EQ(a.status, b.status);
  }
}

}  // namespace
}  // namespace inflogic::cli
