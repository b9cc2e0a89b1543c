#pragma once

#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prepdiag/entity.hpp"
#include "prepdiag/kb.hpp"
#include "prepdiag/term.hpp"

namespace prepdiag {

/// Why a fact is in a model: the rule that produced it and that rule's
/// guard binding, or rule "anchored" for input facts.
struct Provenance {
  std::string rule;
  std::vector<std::pair<std::string, Term>> binding;
};

/// A Herbrand model: ground positive literals plus bookkeeping.
class Model {
 public:
  Language language = Language::En;

  const std::vector<Literal>& facts() const noexcept { return facts_; }
  const std::vector<Provenance>& provenance() const noexcept { return provenance_; }
  /// Nesting depth of every minted witness (entities not listed have 0).
  const std::map<std::string, std::size_t>& skolem_depth() const noexcept { return depth_; }
  /// Witness id -> sk_<rule>_<var>(universal bindings).
  const std::map<std::string, Term>& witness_origin() const noexcept { return origin_; }
  /// Entity id -> word predicate it was introduced with (office, Tbq_floor).
  const std::map<std::string, std::string>& lexical() const noexcept { return lexical_; }

  bool contains(const Literal& fact) const;
  /// Indices into facts() of the facts with this predicate.
  const std::vector<std::size_t>& indices(const std::string& predicate) const;
  std::size_t depth_of(const std::string& entity) const;
  std::set<std::string> entities() const;
  std::size_t size() const noexcept { return facts_.size(); }

  /// Canonical text of every fact, sorted.
  std::vector<std::string> sorted_lines() const;
  /// sorted_lines(), one per line.
  std::string serialize() const;

  /// Returns false if already present.
  bool add(Literal fact, Provenance why);

 private:
  friend class Saturator;
  std::vector<Literal> facts_;
  std::vector<Provenance> provenance_;
  std::unordered_set<Literal, LiteralHash> index_;
  std::map<std::string, std::vector<std::size_t>> by_predicate_;
  std::map<std::string, std::size_t> depth_;
  std::map<std::string, Term> origin_;
  std::map<std::string, std::string> lexical_;
};

struct SaturationOptions {
  Language language = Language::En;
  std::size_t skolem_cap = 2;
  std::size_t fact_budget = 10'000;
};

/// Forward saturation of `facts` under the rules of `kb` that apply to
/// `options.language`. Each (rule, guard binding) fires once; an
/// existential gets one witness per binding, known witnesses (from
/// `entities`) are reused, and witnesses deeper than the cap are not minted.
/// Throws SaturationOverflowError past the fact budget and
/// InconsistentModelError when an entity gets types from two partitions.
Model saturate(const std::vector<Literal>& facts, const KnowledgeBase& kb,
               EntityCounter& entities, const SaturationOptions& options = {});

/// As above with a private entity counter starting past the largest
/// numeric id in `facts`.
Model saturate(const std::vector<Literal>& facts, const KnowledgeBase& kb,
               const SaturationOptions& options = {});

}  // namespace prepdiag
