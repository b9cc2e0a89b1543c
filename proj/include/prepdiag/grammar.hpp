#pragma once

#include <map>
#include <string>
#include <vector>

#include "prepdiag/kb.hpp"
#include "prepdiag/lexicon.hpp"
#include "prepdiag/term.hpp"

namespace prepdiag {

using Features = std::map<std::string, std::string>;

/// A chart edge.
struct Sign {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string category;
  Features features;
  Term semantics;
  std::vector<Sign> children;
  std::string rule;  // schema name, or "lex"
  const LexEntry* entry = nullptr;
};

/// The language-specific part of the grammar. Everything else is shared.
struct ConstraintTable {
  bool modifier_precedes_noun = true;       // ordinal before its noun
  bool ordinal_takes_article = false;       // Al+ agreement on ordinals
  std::string possessive_category = "poss";  // my / +y
  bool possessive_precedes_noun = true;
  bool copula_required = true;               // Arabic nominal sentences omit it

  friend bool operator==(const ConstraintTable&, const ConstraintTable&) = default;
};

/// One rule schema: lhs -> daughters, written in head-first logical order.
/// When `order_key` names a constraint that is false the daughters are
/// realized in reverse surface order. `functor` is the daughter whose
/// semantics is applied to the other's.
struct Schema {
  std::string name;
  std::string lhs;
  std::vector<std::string> daughters;
  std::size_t functor = 0;
  std::string order_key;    // empty: fixed order
  std::string enabled_key;  // empty: always on; "!key" negates
  bool wrap_utterance = false;

  friend bool operator==(const Schema&, const Schema&) = default;
};

struct Grammar {
  std::vector<Schema> schemas;
  ConstraintTable constraints;

  static Grammar for_language(Language language);
};

/// Chart parse of a token list. Returns every complete utterance sign with
/// beta-reduced semantics, in a fixed order; empty when the tokens are not a
/// sentence. Throws UnknownWordError for a token missing from the lexicon.
std::vector<Sign> parse(const std::vector<std::string>& tokens, Language language,
                        const Lexicon& lexicon = Lexicon::builtin());

/// Bracketed rendering for debugging: [s [np ...] ...].
std::string to_string(const Sign& sign);

}  // namespace prepdiag
