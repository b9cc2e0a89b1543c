#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "prepdiag/kb.hpp"
#include "prepdiag/model.hpp"
#include "prepdiag/term.hpp"

namespace prepdiag {

struct ProofStep {
  std::string clause;  // source rule name
  Literal head;        // clause head as instantiated at the end of the proof
};

struct AbductionResult {
  Literal target;
  /// Assumed literals, free variables renamed B, C, ... in order of
  /// appearance.
  std::vector<Literal> missing;
  /// Bindings of the target's variables. Variables in the values share
  /// the naming of `missing`.
  std::map<std::string, Term> bindings;
  std::size_t cost = 0;
  std::vector<ProofStep> proof_trace;
  /// Index into kb.horn() of the clause used for the target (or npos when
  /// the target closed against a fact).
  std::size_t root_clause = static_cast<std::size_t>(-1);
};

struct AbductionOptions {
  std::size_t max_missing = 3;
  std::size_t max_depth = 12;
};

/// Things that blocked proofs and may not be assumed: ground compat
/// literals that the lattice rejects.
struct AbductionTrace {
  std::vector<Literal> blockers;
};

/// Predicates that may be assumed.
const std::set<std::string>& abducible_predicates();

/// Backward proof of `target` from `model` and the Horn clauses of `kb`
/// that apply to the model's language, assuming at most
/// `options.max_missing` abducible literals. Returns the results of the
/// smallest cost that has any, deduplicated up to variable renaming, ordered
/// by clause and literal order. Throws UnknownPredicateError.
std::vector<AbductionResult> abduce(const Literal& target, const Model& model,
                                    const KnowledgeBase& kb,
                                    const AbductionOptions& options = {},
                                    AbductionTrace* trace = nullptr);

}  // namespace prepdiag
