#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "inflogic/families.hpp"
#include "inflogic/finite_model.hpp"
#include "inflogic/formula.hpp"

namespace inflogic {

// Deciders for "the structure weak-forces the formula", in priority order.
enum class Route : std::uint8_t { TreeOracle, BlockOracle, FiniteCollapse, ForceElementary };

std::string to_string(Route r);

struct ForcingQuery {
  std::variant<FiniteStructure, TreeSpec, BlockConfig> structure;
  Formula formula;
  Assignment assignment;
  std::size_t budget = kDefaultBudget;
};

struct Witness {
  std::string kind;   // "tuple", "alpha" or "certificate"
  std::string value;
};

struct ForcingVerdict {
  TruthValue truth;
  Route route = Route::FiniteCollapse;
  std::optional<Witness> witness;
  // Plain truth of the formula in the structure when known, which shows
  // where forcing and satisfaction part ways.
  std::optional<bool> satisfied;

  std::string str() const;  // "TRUE route=tree-oracle certificate=[cycle r]"
};

// Routes able to answer the query, highest priority first. The oracles
// answer only their built-in sentence and its negation; a finite tree is
// also a finite structure.
std::vector<Route> applicable_routes(const ForcingQuery& q);

ForcingVerdict run_route(const ForcingQuery& q, Route r);

// Highest-priority applicable route, falling back to the next one while the
// answer is Unknown. Throws PreconditionError for unsupported queries.
ForcingVerdict weak_forces(const ForcingQuery& q);

struct AuditReport {
  std::vector<ForcingVerdict> verdicts;  // in route order
  bool agree = true;                     // decided verdicts coincide
  std::size_t decided = 0;
};

AuditReport audit(const ForcingQuery& q);

}  // namespace inflogic
