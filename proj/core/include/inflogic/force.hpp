#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inflogic/finite_model.hpp"
#include "inflogic/formula.hpp"
#include "inflogic/tags.hpp"

namespace inflogic {

// One step of the Force construction, kept in the shape of the definability
// argument: each node records which case produced it, its outer (alpha) and
// inner (beta) index domains, and its children. Domains never depend on the
// index values, so a family template is transformed once.
struct ForceNode {
  enum class Case : std::uint8_t { Atom, Neg, OrList, AndList, OrFam, AndFam, Exists };
  Case kind = Case::Atom;
  Formula source;                        // the subformula this node forces
  Domain outer;
  Domain inner;
  std::vector<std::shared_ptr<const ForceNode>> children;
  std::vector<std::string> index_vars;   // OrFam / AndFam
  std::vector<Symbol> vars;              // Exists
};

using ForceTree = std::shared_ptr<const ForceNode>;

// A disjunction over alpha of conjunctions over beta of finitary leaves
// theta(alpha, beta), presented intensionally.
class ElementaryFormula {
 public:
  explicit ElementaryFormula(ForceTree root) : root_(std::move(root)) {}

  const Formula& source() const { return root_->source; }
  const Domain& outer() const { return root_->outer; }
  const Domain& inner() const { return root_->inner; }
  const ForceTree& tree() const { return root_; }

  // theta(alpha, beta). Throws PreconditionError for tags outside the domains.
  Formula leaf(const Tag& alpha, const Tag& beta) const;

  friend bool operator==(const ElementaryFormula& a, const ElementaryFormula& b);

 private:
  ForceTree root_;
};

// The syntax-directed construction, one case per connective. Universal
// quantifiers are forced as the negation of an existential over a negation.
ElementaryFormula force(const Formula& f);

struct ElementaryLeaf {
  Tag alpha;
  Tag beta;
  Formula theta;
};

// Leaves for the first outer_bound alphas and inner_bound betas, both in the
// canonical tag enumeration order.
std::vector<ElementaryLeaf> elementary_leaves(const ElementaryFormula& e, std::size_t outer_bound,
                                              std::size_t inner_bound);

// Optional cleanup for display: drops trivially true leaves and repeats.
// Never applied by force() itself.
std::vector<ElementaryLeaf> simplify_leaves(std::vector<ElementaryLeaf> leaves);

struct ElementaryVerdict {
  TruthValue truth;
  std::optional<Tag> alpha;            // a witnessing alpha when true and one is computable
  std::vector<std::string> realized;   // elements realizing the outermost existential type, if any
};

// Decides "some alpha has every beta-leaf true" on a finite structure by
// recursion over the construction. The existential case
// AND_{S finite} EXISTS y AND_{b in S} theta(a, b) asks whether the type
// {theta(a, b)} is finitely satisfiable, which in a finite structure means
// realized, so it is decided by a realizing tuple.
ElementaryVerdict eval_elementary(const FiniteStructure& a, const ElementaryFormula& e, const Assignment& asg,
                                  std::size_t budget = kDefaultBudget);
ElementaryVerdict eval_elementary(const FiniteStructure& a, const ElementaryFormula& e, const Valuation& val,
                                  std::size_t budget);

// (OrFam OUTER (AndFam INNER (force FORMULA)))
std::string render_elementary(const ElementaryFormula& e);
// Re-runs force on the embedded formula and checks the declared domains.
ElementaryFormula parse_elementary(std::string_view text, const Signature& sig);

std::string to_string(ForceNode::Case c);

}  // namespace inflogic
