#include <gtest/gtest.h>

#include "inflogic/error.hpp"
#include "inflogic/families.hpp"
#include "inflogic/finite_model.hpp"
#include "inflogic/library.hpp"
#include "inflogic/parse.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace inflogic {
namespace {

using testing::Rng;

Formula parse_b(const std::string& text) { return parse_formula(text, block_signature()); }

// Root a with children b0, b1 as in a standard block.
FiniteStructure standard_block() {
  FiniteStructure a({"a", "b0", "b1"});
  a.declare(block_signature());
  a.add_fact("Q", {"a"});
  a.add_fact("R", {"a", "b0"});
  a.add_fact("R", {"a", "b1"});
  a.add_fact("P_0", {"b0"});
  a.add_fact("P_1", {"b1"});
  return a;
}

TEST(Satisfies, ExistsOnSingleton) {
  FiniteStructure a({"a"});
  a.declare(block_signature());
  a.add_fact("Q", {"a"});
  EXPECT_TRUE(satisfies(a, parse_b("(exists (x) (atom Q x))"), {}).is_true());
}

TEST(Satisfies, FiniteSupportDecidesUniformConjunctions) {
  const FiniteStructure a = standard_block();
  const Formula f = parse_b("(And (n) (not (atom P_n y)))");
  EXPECT_TRUE(satisfies(a, f, {{"y", "b0"}}).is_false());
  EXPECT_TRUE(satisfies(a, f, {{"y", "a"}}).is_true());
  // Cross-check against the first 101 instances written out.
  std::vector<Formula> instances;
  for (std::uint64_t n = 0; n <= 100; ++n) {
    instances.push_back(negation(atom(Symbol("P", {IndexExpr::lit(n)}), {var("y")})));
  }
  EXPECT_TRUE(satisfies(a, conj(instances), {{"y", "a"}}).is_true());
  EXPECT_TRUE(satisfies(a, conj(instances), {{"y", "b0"}}).is_false());
}

TEST(Satisfies, BudgetExhaustionIsUnknown) {
  FiniteStructure a({"a"});
  a.declare(block_signature());
  a.add_fact("P_70", {"a"});
  // A literal template is decided by finite support whatever the budget.
  EXPECT_TRUE(satisfies(a, parse_b("(And (n) (not (atom P_n y)))"), {{"y", "a"}}, 64).is_false());
  // Other templates are swept over 0..budget-1 and stay open when the
  // failing instance n = 70 lies beyond it.
  const Formula f = parse_b("(And (n) (or (not (atom P_n y)) (atom Q y)))");
  const TruthValue open = satisfies(a, f, {{"y", "a"}}, 64);
  EXPECT_FALSE(open.decided());
  ASSERT_TRUE(open.undecided.has_value());
  EXPECT_EQ(*open.undecided, f);
  EXPECT_TRUE(satisfies(a, f, {{"y", "a"}}, 100).is_false());
  // The disjunction finds its witness only inside the budget too.
  const Formula g = parse_b("(Or (n) (and (atom P_n y) (not (atom Q y))))");
  EXPECT_FALSE(satisfies(a, g, {{"y", "a"}}, 64).decided());
  EXPECT_TRUE(satisfies(a, g, {{"y", "a"}}, 72).is_true());
}

TEST(Satisfies, UnboundVariable) {
  FiniteStructure a({"a"});
  a.declare(block_signature());
  try {
    (void)satisfies(a, parse_b("(atom Q x)"), {});
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(std::string(e.what()), "unbound variable x");
  }
}

TEST(Satisfies, AgreesWithOracle) {
  Rng rng(21);
  int decided = 0;
  for (int k = 0; k < 600; ++k) {
    const FiniteStructure a = testing::random_structure(rng);
    const Formula f = testing::random_formula(rng);
    const Assignment asg = testing::random_assignment(rng, a);
    const TruthValue t = satisfies(a, f, asg);
    ASSERT_TRUE(t.decided()) << render_formula(f);
    ++decided;
    EXPECT_EQ(t.is_true(), testing::oracle::satisfies(a, f, asg)) << render_formula(f) << "\n" << a.to_json();
  }
  EXPECT_EQ(decided, 600);
}

TEST(Structure, JsonRoundTrip) {
  Rng rng(22);
  for (int k = 0; k < 50; ++k) {
    const FiniteStructure a = testing::random_structure(rng);
    EXPECT_EQ(FiniteStructure::from_json(a.to_json()), a);
  }
  EXPECT_THROW((void)FiniteStructure::from_json("{\"relations\": {}}"), FormatError);
  EXPECT_THROW((void)FiniteStructure::from_json("[1,"), FormatError);
}

TEST(Structure, IndexedKeysAndWildcards) {
  FiniteStructure a({"u", "v"});
  a.add_fact("R_{1,2}", {"u"});
  a.add_fact("R_*,0", {"v"});
  EXPECT_TRUE(a.holds(Symbol("R", {IndexExpr::lit(1), IndexExpr::lit(2)}), {0}));
  EXPECT_FALSE(a.holds(Symbol("R", {IndexExpr::lit(2), IndexExpr::lit(1)}), {0}));
  EXPECT_TRUE(a.holds(Symbol("R", {IndexExpr::lit(57), IndexExpr::lit(0)}), {1}));
  EXPECT_FALSE(a.holds(Symbol("R", {IndexExpr::lit(57), IndexExpr::lit(1)}), {1}));
}

// ---- substructures ----------------------------------------------------------

TEST(Substructure, Examples) {
  const FiniteStructure b = standard_block();
  EXPECT_TRUE(is_substructure(b, b));
  FiniteStructure missing({"a", "b0", "b1"});
  missing.declare(block_signature());
  missing.add_fact("Q", {"a"});
  missing.add_fact("R", {"a", "b0"});
  missing.add_fact("P_0", {"b0"});
  missing.add_fact("P_1", {"b1"});
  EXPECT_FALSE(is_substructure(missing, b));  // R(a, b1) dropped
  FiniteStructure bigger = b;
  bigger.add_element("s");
  bigger.add_fact("R", {"a", "s"});
  EXPECT_TRUE(is_substructure(b, bigger));
  EXPECT_FALSE(is_substructure(bigger, b));
}

TEST(NElementary, EqualStructures) {
  const FiniteStructure b = standard_block();
  for (unsigned n = 0; n <= 3; ++n) EXPECT_TRUE(n_elementary(b, b, n));
}

TEST(NElementary, ExtraElementBreaksLevelOne) {
  // Over {P, E}, the signature the transfer oracle reads atomic types in.
  Signature sig;
  sig.add_relation("P", 1).add_relation("E", 2);
  FiniteStructure a({"a"});
  a.declare(sig);
  FiniteStructure b({"a", "b"});
  b.declare(sig);
  EXPECT_TRUE(n_elementary(a, b, 0));
  EXPECT_FALSE(n_elementary(a, b, 1));
  // forall y (y = x) holds of a in A only.
  const Formula f = forall({Symbol("y")}, equals(var("y"), var("x")));
  EXPECT_TRUE(satisfies(a, f, {{"x", "a"}}).is_true());
  EXPECT_TRUE(satisfies(b, f, {{"x", "a"}}).is_false());
  EXPECT_TRUE(testing::oracle::bounded_transfer(a, b, 0));
  EXPECT_FALSE(testing::oracle::bounded_transfer(a, b, 1));
}

TEST(NElementary, LevelOneForcesEqualityOnSmallStructures) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const FiniteStructure& b : testing::all_structures(n)) {
      for (const auto& names : testing::nonempty_subsets(b)) {
        const FiniteStructure a = b.restrict_to(names);
        if (n_elementary(a, b, 1)) EXPECT_EQ(a.size(), b.size());
      }
    }
  }
}

TEST(NElementary, RequiresSubstructure) {
  FiniteStructure a = standard_block();
  a.add_fact("P_5", {"a"});
  EXPECT_THROW((void)n_elementary(a, standard_block(), 1), PreconditionError);
}

// ---- types ------------------------------------------------------------------

TEST(TypeRealized, Examples) {
  FiniteStructure a = standard_block();
  const std::vector<Symbol> y = {Symbol("y")};
  const Realization q = type_realized(a, y, conj({parse_b("(atom Q y)")}), {});
  ASSERT_TRUE(q.found.is_true());
  EXPECT_EQ(q.witness, std::vector<std::string>{"a"});

  // With the root excluded by R(x, y), the type {not P_n(y) : n} has no
  // realization until a non-standard child is added.
  const Formula star = conj({parse_b("(atom R x y)"), parse_b("(And (n) (not (atom P_n y)))")});
  EXPECT_TRUE(type_realized(a, y, star, {{"x", "a"}}).found.is_false());
  a.add_element("bstar");
  a.add_fact("R", {"a", "bstar"});
  const Realization r = type_realized(a, y, star, {{"x", "a"}});
  ASSERT_TRUE(r.found.is_true());
  EXPECT_EQ(r.witness, std::vector<std::string>{"bstar"});

  const Realization none = type_realized(a, y, conj({parse_b("(atom P_0 y)"), parse_b("(not (atom P_0 y))")}), {});
  EXPECT_TRUE(none.found.is_false());
}

// ---- weak forcing on finite structures -----------------------------------

TEST(WeakForceFinite, EqualsTruthOnFiniteStructures) {
  Rng rng(23);
  for (int k = 0; k < 300; ++k) {
    const FiniteStructure a = testing::random_structure(rng, {.max_elements = 4});
    const Formula f = testing::random_formula(rng, {.shape = k % 2 ? testing::Shape::QuantifierFree : testing::Shape::Finitary});
    const Assignment asg = testing::random_assignment(rng, a);
    const TruthValue w = weak_force_finite(a, f, asg);
    ASSERT_TRUE(w.decided());
    EXPECT_EQ(w, satisfies(a, f, asg)) << render_formula(f);
    EXPECT_EQ(w.is_true(), testing::oracle::satisfies(a, f, asg)) << render_formula(f);
  }
}

TEST(WeakForceFinite, NegationIsComplement) {
  Rng rng(24);
  for (int k = 0; k < 300; ++k) {
    const FiniteStructure a = testing::random_structure(rng, {.max_elements = 4});
    const Formula g = testing::random_formula(rng);
    const Assignment asg = testing::random_assignment(rng, a);
    const TruthValue wg = weak_force_finite(a, g, asg);
    const TruthValue wn = weak_force_finite(a, negation(g), asg);
    ASSERT_TRUE(wg.decided() && wn.decided());
    EXPECT_NE(wg.is_true(), wn.is_true()) << render_formula(g);
  }
}

TEST(IndexSweep, ExhaustiveOnlyWithinBudget) {
  const IndexSweep s = index_sweep(1, 5, 64);
  EXPECT_TRUE(s.exhaustive);
  const IndexSweep t = index_sweep(2, 63, 64);
  EXPECT_FALSE(t.exhaustive);
}

}  // namespace
}  // namespace inflogic
