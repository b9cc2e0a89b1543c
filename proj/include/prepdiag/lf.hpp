#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prepdiag/entity.hpp"
#include "prepdiag/grammar.hpp"
#include "prepdiag/term.hpp"

namespace prepdiag {

struct LogicalForm {
  std::string utterance_type = "claim";
  Term body;

  /// utt(<type>, <body>)
  Term to_term() const;
};

/// Facts obtained by anchoring every ref term of a logical form.
struct AnchoredForm {
  std::vector<Literal> facts;
  /// (ref term, entity) in anchoring order, innermost first.
  std::vector<std::pair<Term, Term>> anchors;
  /// Entity id -> predicate of the first one-place literal of its
  /// restriction (the word used to refer to it).
  std::map<std::string, std::string> entity_words;
  /// The outer relation, e.g. on(#1, #2).
  Literal relation;
};

/// Throws UnsupportedUtteranceError unless the sign's semantics is
/// utt(claim, ...).
LogicalForm build_lf(const Sign& sign);
LogicalForm build_lf(const Term& semantics);

/// Replaces each ref by a fresh entity, innermost first. The speaker ref
/// anchors to #user and contributes type(#user, human). Throws
/// UnsupportedRestrictionError when a restriction does not reduce to a
/// conjunction of literals.
AnchoredForm anchor(const LogicalForm& lf, EntityCounter& entities);

}  // namespace prepdiag
