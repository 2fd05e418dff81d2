#include <gtest/gtest.h>

#include <set>

#include "inflogic/error.hpp"
#include "inflogic/families.hpp"
#include "inflogic/force.hpp"
#include "inflogic/formula.hpp"
#include "inflogic/library.hpp"
#include "inflogic/parse.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace inflogic {
namespace {

using testing::Rng;

Formula P(const std::string& v) { return atom(Symbol("P"), {var(v)}); }
Formula E(const std::string& a, const std::string& b) { return atom(Symbol("E"), {var(a), var(b)}); }

Signature pe() {
  Signature s;
  s.add_relation("P", 1).add_relation("E", 2).add_relation("Q", 1).add_relation("R", 2);
  return s;
}

// ---- parsing and rendering ------------------------------------------------

TEST(Parse, SingleAtom) {
  const Formula f = parse_formula("(atom Q x)", pe());
  const auto* a = f.get_if<Atomic>();
  ASSERT_NE(a, nullptr);
  EXPECT_EQ(a->relation.base, "Q");
  ASSERT_EQ(a->args.size(), 1U);
  EXPECT_EQ(a->args[0].text(), "x");
}

TEST(Parse, BlockSentenceHasTheDisplayedShape) {
  const Formula f = parse_formula(
      "(forall (x) (or (not (atom Q x)) (exists (y) (and (atom R x y) (And (n) (not (atom P_n y)))))))",
      block_signature());
  const Formula expected = forall(
      {Symbol("x")},
      disj({negation(atom(Symbol("Q"), {var("x")})),
            exists({Symbol("y")},
                   conj({atom(Symbol("R"), {var("x"), var("y")}),
                         big_and({"n"}, negation(atom(Symbol("P", {IndexExpr::var("n")}), {var("y")})))}))}));
  EXPECT_EQ(f, expected);
  EXPECT_EQ(f, psi_blocks());
}

TEST(Parse, UnbalancedFormReportsEndOfInput) {
  try {
    (void)parse_formula("(atom R x", pe());
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_TRUE(e.at_end_of_input());
  }
}

TEST(Parse, UnknownSymbolAndBadArity) {
  EXPECT_THROW((void)parse_formula("(atom Z x)", pe()), ParseError);
  EXPECT_THROW((void)parse_formula("(atom E x)", pe()), ParseError);
  EXPECT_THROW((void)parse_formula("(atom P_n x)", block_signature()), ParseError);  // n unbound
}

TEST(Parse, ImplicationIsSugar) {
  EXPECT_EQ(parse_formula("(implies (atom Q x) (atom P x))", pe()),
            disj({negation(atom(Symbol("Q"), {var("x")})), P("x")}));
}

TEST(Render, AtomAndRoundTrip) {
  EXPECT_EQ(render_formula(atom(Symbol("Q"), {var("x")})), "(atom Q x)");
  EXPECT_EQ(parse_formula(render_formula(psi_blocks()), block_signature()), psi_blocks());
  EXPECT_EQ(parse_formula(render_formula(psi_tree()), tree_signature()), psi_tree());
}

TEST(Render, RandomRoundTrip) {
  Rng rng(11);
  for (int k = 0; k < 300; ++k) {
    const Formula f = testing::random_formula(rng);
    EXPECT_EQ(parse_formula(render_formula(f), testing::random_signature()), f) << render_formula(f);
  }
}

TEST(Render, ElementaryFormulaOfChoiceFunctionsRoundTrips) {
  const ElementaryFormula e = force(psi_tree());
  const std::string text = render_elementary(e);
  EXPECT_NE(text.find("(choicefn nat nat)"), std::string::npos);
  EXPECT_EQ(parse_elementary(text, tree_signature()), e);
}

// ---- free variables -------------------------------------------------------

TEST(FreeVars, Basics) {
  EXPECT_EQ(free_vars(atom(Symbol("R"), {var("x"), var("y")})), (std::set<std::string>{"x", "y"}));
  EXPECT_TRUE(free_vars(psi_blocks()).empty());
}

TEST(FreeVars, FamilyTemplateMinusIndexVariable) {
  const Formula body = negation(atom(Symbol("P", {IndexExpr::var("n")}), {var("y")}));
  const Formula f = big_and({"n"}, body);
  EXPECT_EQ(free_vars(f), std::set<std::string>{"y"});
  EXPECT_TRUE(free_index_vars(f).empty());
  EXPECT_EQ(free_index_vars(body), std::set<std::string>{"n"});
  for (std::uint64_t n = 0; n <= 5; ++n) EXPECT_EQ(free_vars(instantiate_index(body, "n", n)), std::set<std::string>{"y"});
}

// ---- formal negation ------------------------------------------------------

TEST(Negate, Atom) { EXPECT_EQ(formal_negate(P("x")), negation(P("x"))); }

TEST(Negate, OneDualStepThroughFamilies) {
  const Formula theta = atom(Symbol("R", {IndexExpr::var("i"), IndexExpr::var("j")}), {var("x")});
  const Formula f = big_and({"i"}, big_or({"j"}, theta));
  EXPECT_EQ(formal_negate(f), big_or({"i"}, big_and({"j"}, negation(theta))));
}

TEST(Negate, ForallExistsAndExtensionalCheck) {
  const Formula f = forall({Symbol("x")}, exists({Symbol("y")}, E("x", "y")));
  const Formula g = formal_negate(f);
  EXPECT_EQ(g, exists({Symbol("x")}, forall({Symbol("y")}, negation(E("x", "y")))));
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const FiniteStructure& a : testing::all_structures(n)) {
      EXPECT_NE(testing::oracle::satisfies(a, g, {}), testing::oracle::satisfies(a, f, {}));
    }
  }
}

TEST(Negate, RandomExtensionalCheck) {
  Rng rng(12);
  for (int k = 0; k < 300; ++k) {
    const FiniteStructure a = testing::random_structure(rng, {.max_elements = 3});
    const Formula f = testing::random_formula(rng);
    const Assignment asg = testing::random_assignment(rng, a);
    EXPECT_NE(testing::oracle::satisfies(a, formal_negate(f), asg), testing::oracle::satisfies(a, f, asg))
        << render_formula(f);
    EXPECT_EQ(testing::oracle::satisfies(a, nnf(f), asg), testing::oracle::satisfies(a, f, asg)) << render_formula(f);
  }
}

// ---- classification -------------------------------------------------------

TEST(Classify, AtomIsRankZero) {
  EXPECT_EQ(classify(P("x")), (QuantClass{0, 0, 0, 0}));
}

TEST(Classify, InfiniteConjunctionOfExistentialsIsExistsOneButNotSigmaOne) {
  // AND_i exists x S_i(x): existential of level 1; counting the infinite
  // conjunction as a universal step puts it above level 1 of sigma.
  const Formula f = big_and({"i"}, exists({Symbol("x")}, atom(Symbol("S", {IndexExpr::var("i")}), {var("x")})));
  const QuantClass c = classify(f);
  EXPECT_EQ(c.exists_rank, 1U);
  EXPECT_GT(c.sigma_rank, 1U);
  EXPECT_EQ(c.sigma_rank, testing::oracle::ranks(f).sigma_rank);
}

TEST(Classify, BlockSentence) {
  // Hand count: the conjunction over n is quantifier free, exists y(...) is
  // existential of level 1, the disjunction with not Q(x) stays there, and
  // the outer forall makes it universal of level 2, existential of level 3.
  const QuantClass c = classify(psi_blocks());
  EXPECT_EQ(c.forall_rank, 2U);
  EXPECT_EQ(c.exists_rank, 3U);
  const auto r = testing::oracle::ranks(psi_blocks());
  EXPECT_EQ(c.sigma_rank, r.sigma_rank);
  EXPECT_EQ(c.pi_rank, r.pi_rank);
}

TEST(Classify, AgreesWithPathOracle) {
  Rng rng(13);
  for (int k = 0; k < 500; ++k) {
    const Formula f = testing::random_formula(rng);
    const QuantClass c = classify(f);
    const auto r = testing::oracle::ranks(f);
    EXPECT_EQ(c.exists_rank, r.exists_rank) << render_formula(f);
    EXPECT_EQ(c.forall_rank, r.forall_rank) << render_formula(f);
    EXPECT_EQ(c.sigma_rank, r.sigma_rank) << render_formula(f);
    EXPECT_EQ(c.pi_rank, r.pi_rank) << render_formula(f);
  }
}

// ---- fragments --------------------------------------------------------------

// Independent closure: all subformulas, then one negation layer.
std::set<Formula> closure_oracle(const Formula& f) {
  std::set<Formula> sub;
  std::vector<Formula> todo = {f};
  while (!todo.empty()) {
    Formula g = todo.back();
    todo.pop_back();
    if (!sub.insert(g).second) continue;
    if (const auto* n = g.get_if<Negation>()) todo.push_back(n->body);
    if (const auto* j = g.get_if<Junction>()) todo.insert(todo.end(), j->members.begin(), j->members.end());
    if (const auto* fam = g.get_if<Family>()) todo.push_back(fam->body);
    if (const auto* q = g.get_if<Quantified>()) todo.push_back(q->body);
  }
  std::set<Formula> out = sub;
  for (const Formula& g : sub) {
    if (g.get_if<Negation>() == nullptr) out.insert(negation(g));
  }
  return out;
}

TEST(Fragment, SmallCases) {
  EXPECT_EQ(fragment_closure(P("x")).size(), 2U);
  const Formula f = exists({Symbol("y")}, atom(Symbol("R"), {var("x"), var("y")}));
  const auto c = fragment_closure(f);
  EXPECT_EQ(std::set<Formula>(c.begin(), c.end()),
            (std::set<Formula>{f, negation(f), atom(Symbol("R"), {var("x"), var("y")}),
                               negation(atom(Symbol("R"), {var("x"), var("y")}))}));
}

TEST(Fragment, BlockSentenceMatchesOracle) {
  const auto c = fragment_closure(psi_blocks());
  const std::set<Formula> got(c.begin(), c.end());
  EXPECT_EQ(got.size(), c.size()) << "no duplicates";
  EXPECT_EQ(got, closure_oracle(psi_blocks()));
  // Ten subformulas, six of which are not negations and gain one.
  EXPECT_EQ(c.size(), 16U);
}

TEST(Fragment, RandomMatchesOracleAndIsClosed) {
  Rng rng(14);
  for (int k = 0; k < 200; ++k) {
    const Formula f = testing::random_formula(rng);
    const auto c = fragment_closure(f);
    const std::set<Formula> got(c.begin(), c.end());
    EXPECT_EQ(got, closure_oracle(f)) << render_formula(f);
    EXPECT_EQ(c.front(), f);
  }
}

// ---- well-formedness --------------------------------------------------------

TEST(Wellformed, BlockSentenceAgainstItsSignature) { EXPECT_TRUE(wellformed(psi_blocks(), block_signature()).empty()); }

TEST(Wellformed, ArityViolation) {
  const auto v = wellformed(atom(Symbol("E"), {var("x")}), pe());
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0].kind, Violation::Kind::ArityMismatch);
}

TEST(Wellformed, IndexDependentFreeVariable) {
  const Formula f =
      big_and({"n"}, atom(Symbol("P", {IndexExpr::var("n")}), {Term::variable(Symbol("y", {IndexExpr::var("n")}))}));
  const auto v = wellformed(f, block_signature());
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, Violation::Kind::InfiniteFreeVariables);
  // Binding y_n inside the template is fine.
  const Formula g = big_and(
      {"n"}, exists({Symbol("y", {IndexExpr::var("n")})},
                    atom(Symbol("P", {IndexExpr::var("n")}), {Term::variable(Symbol("y", {IndexExpr::var("n")}))})));
  EXPECT_TRUE(wellformed(g, block_signature()).empty());
}

TEST(Substitute, AvoidsCapture) {
  const Formula f = exists({Symbol("y")}, E("x", "y"));
  const Formula g = substitute(f, "x", var("y"));
  EXPECT_EQ(free_vars(g), std::set<std::string>{"y"});
  // exists y' E(y, y'): true iff y has an out-neighbour.
  FiniteStructure a({"e0", "e1"});
  a.declare(testing::random_signature());
  a.add_fact("E", {"e0", "e1"});
  EXPECT_TRUE(testing::oracle::satisfies(a, g, {{"y", "e0"}}));
  EXPECT_FALSE(testing::oracle::satisfies(a, g, {{"y", "e1"}}));
}

}  // namespace
}  // namespace inflogic
