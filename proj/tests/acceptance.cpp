// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Sample sizes and time limits are
// fixed here; none of them is read from the environment.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "inflogic/borel.hpp"
#include "inflogic/families.hpp"
#include "inflogic/finite_model.hpp"
#include "inflogic/force.hpp"
#include "inflogic/formula.hpp"
#include "inflogic/library.hpp"
#include "inflogic/parse.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using namespace inflogic;
using testing::Rng;

// ---- pinned parameters --------------------------------------------------

constexpr std::uint64_t kSeed = 20260418;
constexpr double kRequiredAgreement = 1.0;  // every criterion is 100%

constexpr std::size_t kC1Triples = 1000;
constexpr double kC1MaxSeconds = 60.0;
constexpr std::size_t kC2Formulas = 500;
constexpr std::size_t kC2Bound = 3;
constexpr std::size_t kC3Trees = 100;
constexpr std::size_t kC4Iterations = 20;
constexpr std::size_t kC5Pairs = 500;
constexpr std::size_t kC7Codes = 200;
constexpr std::size_t kC7MaxDepth = 5;
constexpr double kC7MaxSeconds = 30.0;
constexpr std::size_t kC8Formulas = 1000;
constexpr std::size_t kC9MaxElements = 3;
constexpr unsigned kC9MaxLevel = 2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string pct(std::size_t ok, std::size_t total) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", total == 0 ? 0.0 : 100.0 * static_cast<double>(ok) / static_cast<double>(total));
  return buf;
}

bool meets(std::size_t ok, std::size_t total) {
  return total > 0 && static_cast<double>(ok) >= kRequiredAgreement * static_cast<double>(total);
}

// ---- C1 and C6 share their triples -----------------------------------

struct Triple {
  FiniteStructure a;
  Formula f;
  Assignment asg;
};

std::vector<Triple> collapse_triples() {
  Rng rng(kSeed + 1);
  std::vector<Triple> out;
  for (std::size_t k = 0; k < kC1Triples; ++k) {
    FiniteStructure a = testing::random_structure(rng, {.min_elements = 1, .max_elements = 5});
    Formula f = testing::random_formula(rng, {.max_depth = 4, .max_junction = 3});
    Assignment asg = testing::random_assignment(rng, a);
    out.push_back({std::move(a), std::move(f), std::move(asg)});
  }
  return out;
}

std::vector<std::size_t> g_decided;  // indices of C1 triples decided by every route

Outcome c1(const std::vector<Triple>& triples) {
  const auto t0 = Clock::now();
  std::size_t decided = 0;
  std::size_t agree = 0;
  std::string first_bad;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    const Triple& t = triples[k];
    const TruthValue s = satisfies(t.a, t.f, t.asg);
    const TruthValue w = weak_force_finite(t.a, t.f, t.asg);
    const ElementaryVerdict e = eval_elementary(t.a, force(t.f), t.asg);
    if (!s.decided() || !w.decided() || !e.truth.decided()) continue;
    ++decided;
    g_decided.push_back(k);
    const bool truth = testing::oracle::satisfies(t.a, t.f, t.asg);
    if (s.is_true() == truth && w.is_true() == truth && e.truth.is_true() == truth) {
      ++agree;
    } else if (first_bad.empty()) {
      first_bad = " first mismatch: " + render_formula(t.f);
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = meets(agree, decided) && secs < kC1MaxSeconds;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu triples, %zu decided, agreement %s, %.2f s (limit %.0f s)", triples.size(),
                decided, pct(agree, decided).c_str(), secs, kC1MaxSeconds);
  o.detail = buf + first_bad;
  return o;
}

Outcome c6(const std::vector<Triple>& triples) {
  std::size_t ok = 0;
  std::string first_bad;
  for (std::size_t k : g_decided) {
    const Triple& t = triples[k];
    const TruthValue pos = weak_force_finite(t.a, t.f, t.asg);
    const TruthValue neg = weak_force_finite(t.a, negation(t.f), t.asg);
    if (pos.decided() && neg.decided() && pos.is_true() != neg.is_true()) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = " first failure: " + render_formula(t.f);
    }
  }
  return {meets(ok, g_decided.size()),
          std::to_string(g_decided.size()) + " decided queries, exactly one of f/not f forced in " +
              pct(ok, g_decided.size()) + first_bad};
}

// ---- C2 -------------------------------------------------------------------

Outcome c2() {
  Rng rng(kSeed + 2);
  std::size_t ok = 0;
  std::size_t leaves = 0;
  std::string first_bad;
  for (std::size_t k = 0; k < kC2Formulas; ++k) {
    const Formula f = testing::random_formula(rng, {.max_depth = 4});
    const QuantClass c = classify(f);
    bool good = true;
    for (const ElementaryLeaf& l : elementary_leaves(force(f), kC2Bound, kC2Bound)) {
      ++leaves;
      const QuantClass lc = classify(l.theta);
      if (!is_finitary(l.theta) || lc.exists_rank > c.exists_rank || lc.forall_rank > c.forall_rank) good = false;
    }
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = " first failure: " + render_formula(f);
    }
  }
  return {meets(ok, kC2Formulas), std::to_string(kC2Formulas) + " formulas, " + std::to_string(leaves) +
                                      " leaves at bounds 3x3, within rank in " + pct(ok, kC2Formulas) + first_bad};
}

// ---- C3 -------------------------------------------------------------------

Outcome c3() {
  Rng rng(kSeed + 3);
  std::size_t finite_ok = 0;
  std::size_t regular_ok = 0;
  std::size_t truth_ok = 0;
  std::size_t with_path = 0;
  for (std::size_t k = 0; k < kC3Trees; ++k) {
    const TreeSpec t = testing::random_finite_tree(rng);
    if (!tree_forces_psi(t)) ++finite_ok;
    if (!tree_satisfies_psi(t)) ++truth_ok;
  }
  for (std::size_t k = 0; k < kC3Trees; ++k) {
    const TreeSpec t = testing::random_regular_tree(rng);
    const bool expected = testing::oracle::unfolding_has_infinite_branch(std::get<RegularTree>(t.value));
    with_path += expected ? 1 : 0;
    if (tree_forces_psi(t) == expected) ++regular_ok;
    if (!tree_satisfies_psi(t)) ++truth_ok;
  }
  const bool pass = meets(finite_ok, kC3Trees) && meets(regular_ok, kC3Trees) && meets(truth_ok, 2 * kC3Trees);
  return {pass, "finite trees unforced " + pct(finite_ok, kC3Trees) + ", regular trees match cycle oracle " +
                    pct(regular_ok, kC3Trees) + " (" + std::to_string(with_path) +
                    " with a path), sentence false on all 200 " + pct(truth_ok, 2 * kC3Trees)};
}

// ---- C4 -------------------------------------------------------------------

Outcome c4() {
  BlockConfig c = BlockConfig::the_standard_model();
  std::string column;
  bool alternates = true;
  bool forced = true;
  bool expected = false;  // the starting structure has only standard blocks
  for (std::size_t k = 0; k <= kC4Iterations; ++k) {
    const bool s = block_satisfies_psi(c);
    column += s ? 'T' : 'F';
    if (s != expected) alternates = false;
    if (!block_forces_psi(c)) forced = false;
    expected = !expected;
    if (k < kC4Iterations) c = alternate_extension(c);
  }
  return {alternates && forced, std::to_string(kC4Iterations) + " iterations, truth column " + column +
                                    ", forced throughout: " + (forced ? "yes" : "no")};
}

// ---- C5 -------------------------------------------------------------------

// Returns (checked, counterexamples) for one direction. `upward` checks
// A |= f implies B |= f for exists_rank <= 1; otherwise B |= f implies A |= f
// for forall_rank <= 1.
std::pair<std::size_t, std::size_t> preservation(bool upward, std::string& first_bad) {
  Rng rng(kSeed + (upward ? 5 : 50));
  std::size_t checked = 0;
  std::size_t bad = 0;
  std::size_t attempts = 0;
  while (checked < kC5Pairs && attempts < 50 * kC5Pairs) {
    ++attempts;
    const FiniteStructure b = testing::random_structure(rng, {.min_elements = 1, .max_elements = 5});
    const auto subsets = testing::nonempty_subsets(b);
    const FiniteStructure a = b.restrict_to(subsets[testing::uniform(rng, 0, subsets.size() - 1)]);
    const Formula f = testing::random_formula(
        rng, {.max_depth = 4, .shape = upward ? testing::Shape::Existential : testing::Shape::Universal});
    const QuantClass c = classify(f);
    if ((upward ? c.exists_rank : c.forall_rank) > 1) continue;
    const Assignment asg = testing::random_assignment(rng, a);
    const TruthValue in_a = satisfies(a, f, asg);
    const TruthValue in_b = satisfies(b, f, asg);
    if (!in_a.decided() || !in_b.decided()) continue;
    ++checked;
    const bool violated = upward ? (in_a.is_true() && !in_b.is_true()) : (in_b.is_true() && !in_a.is_true());
    if (violated) {
      ++bad;
      if (first_bad.empty()) first_bad = " counterexample: " + render_formula(f);
    }
  }
  return {checked, bad};
}

Outcome c5() {
  std::string first_bad;
  const auto [up, up_bad] = preservation(true, first_bad);
  const auto [down, down_bad] = preservation(false, first_bad);
  const bool pass = up >= kC5Pairs && down >= kC5Pairs && up_bad == 0 && down_bad == 0;
  return {pass, std::to_string(up) + " existential pairs (" + std::to_string(up_bad) + " counterexamples), " +
                    std::to_string(down) + " universal pairs (" + std::to_string(down_bad) + " counterexamples)" +
                    first_bad};
}

// ---- C7 -------------------------------------------------------------------

BorelCode random_code(Rng& rng, std::size_t depth, std::size_t basis) {
  const std::size_t pick = testing::uniform(rng, 0, depth <= 1 ? 1 : 3);
  switch (pick) {
    case 0: return BorelCode::basic(testing::uniform(rng, 0, basis - 1));
    case 1: return BorelCode::basic_neg(testing::uniform(rng, 0, basis - 1));
    case 2: return BorelCode::complement(random_code(rng, depth - 1, basis));
    default: {
      std::vector<BorelCode> parts;
      const std::size_t n = testing::uniform(rng, 0, 3);
      for (std::size_t k = 0; k < n; ++k) parts.push_back(random_code(rng, depth - 1, basis));
      return BorelCode::union_of(std::move(parts));
    }
  }
}

Outcome c7() {
  const auto t0 = Clock::now();
  Signature sig;
  sig.add_relation("P", 1).add_relation("Q", 1).add_relation("E", 2);
  const std::vector<Formula> pool = {
      parse_formula("(exists (x) (atom P x))", sig),
      parse_formula("(forall (x) (atom Q x))", sig),
      parse_formula("(exists (x y) (atom E x y))", sig),
      parse_formula("(forall (x) (exists (y) (atom E x y)))", sig),
  };
  Rng rng(kSeed + 7);
  std::size_t faces = 0;
  std::size_t agree = 0;
  std::size_t codes = 0;
  std::size_t deepest = 0;
  for (std::size_t size = 1; size <= pool.size(); ++size) {
    const SentenceBasis d(std::vector<Formula>(pool.begin(), pool.begin() + static_cast<long>(size)));
    for (std::size_t k = 0; k < kC7Codes; ++k) {
      const BorelCode c = random_code(rng, kC7MaxDepth, size);
      if (c.depth() > kC7MaxDepth) continue;
      ++codes;
      deepest = std::max(deepest, c.depth());
      const Formula f = borel_to_formula(c, d);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
        const TheoryFace s = TheoryFace::from_mask(size, mask);
        ++faces;
        if (borel_membership(c, s) == testing::oracle::propositional(f, d.members(), s.member)) ++agree;
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu codes (depth <= %zu, deepest %zu) over bases of size 1..4, %zu faces, agreement %s, %.2f s (limit %.0f s)",
                codes, kC7MaxDepth, deepest, faces, pct(agree, faces).c_str(), secs, kC7MaxSeconds);
  return {meets(agree, faces) && codes >= 4 * kC7Codes && secs < kC7MaxSeconds, buf};
}

// ---- C8 -------------------------------------------------------------------

Outcome c8() {
  Rng rng(kSeed + 8);
  std::size_t ok = 0;
  std::size_t total = 0;
  std::string first_bad;
  auto note = [&](bool good, const Formula& f) {
    ++total;
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = " first failure: " + render_formula(f);
    }
  };
  for (std::size_t k = 0; k < kC8Formulas; ++k) {
    const Formula f = testing::random_formula(rng, {.max_depth = 4});
    const QuantClass c = classify(f);
    const QuantClass n = classify(formal_negate(f));
    const testing::oracle::Ranks r = testing::oracle::ranks(f);
    note(c.exists_rank <= c.sigma_rank && c.forall_rank <= c.pi_rank && n.exists_rank == c.forall_rank &&
             n.forall_rank == c.exists_rank && c.exists_rank == r.exists_rank && c.forall_rank == r.forall_rank &&
             c.sigma_rank == r.sigma_rank && c.pi_rank == r.pi_rank,
         f);
  }
  for (std::size_t k = 0; k < kC8Formulas / 4; ++k) {
    const Formula f = testing::random_formula(rng, {.max_depth = 4, .shape = testing::Shape::QuantifierFree});
    const QuantClass c = classify(f);
    note(c.exists_rank == 0 && c.forall_rank == 0, f);
  }
  return {meets(ok, total), std::to_string(total) + " formulas, sane in " + pct(ok, total) + first_bad};
}

// ---- C9 -------------------------------------------------------------------

Outcome c9() {
  const auto t0 = Clock::now();
  std::size_t pairs = 0;
  std::size_t agree = 0;
  std::size_t elementary = 0;
  std::string first_bad;
  for (std::size_t size = 1; size <= kC9MaxElements; ++size) {
    for (const FiniteStructure& b : testing::all_structures(size)) {
      for (const auto& names : testing::nonempty_subsets(b)) {
        const FiniteStructure a = b.restrict_to(names);
        for (unsigned n = 0; n <= kC9MaxLevel; ++n) {
          ++pairs;
          const bool game = n_elementary(a, b, n);
          elementary += game ? 1 : 0;
          if (game == testing::oracle::bounded_transfer(a, b, n)) {
            ++agree;
          } else if (first_bad.empty()) {
            first_bad = " first mismatch: n=" + std::to_string(n) + " A=" + a.to_json() + " B=" + b.to_json();
          }
        }
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%zu (A, B, n) cases up to 3 elements, n <= 2, %zu elementary, agreement %s, %.2f s",
                pairs, elementary, pct(agree, pairs).c_str(), seconds_since(t0));
  return {meets(agree, pairs), buf + first_bad};
}

}  // namespace

int main() {
  const std::vector<Triple> triples = collapse_triples();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"C1 finite collapse", [&] { return c1(triples); }},
      {"C2 complexity preservation", c2},
      {"C3 tree equivalence", c3},
      {"C4 block alternation", c4},
      {"C5 existential/universal preservation", c5},
      {"C6 negation completeness", [&] { return c6(triples); }},
      {"C7 Borel compiler", c7},
      {"C8 classification sanity", c8},
      {"C9 n-elementary game vs transfer", c9},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
