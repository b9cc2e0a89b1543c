#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prepdiag/lattice.hpp"
#include "prepdiag/term.hpp"

namespace prepdiag {

enum class Language { En, Ar, Both };

std::string to_string(Language language);
/// Accepts "en", "ar", "both"; throws Error otherwise.
Language parse_language(std::string_view text);
/// Whether a rule tagged `rule_language` is used for input in `language`.
bool applies_to(Language rule_language, Language language) noexcept;

/// `all vars: [guard]`, one level of a guarded rule.
struct ForallBlock {
  std::vector<std::string> vars;
  std::vector<Literal> guard;
};

/// `=> some vars: literals.`
struct Consequent {
  std::vector<std::string> existential_vars;
  std::vector<Literal> literals;
};

/// A meaning postulate: nested universally quantified guards, outermost
/// first, ending in a consequent.
struct GuardedRule {
  std::string name;
  Language language = Language::Both;
  std::vector<ForallBlock> blocks;
  Consequent consequent;
  bool is_word = false;   // sugar from a `word` declaration
  bool plumbing = false;  // preceded by a `# plumbing` comment
  std::size_t line = 0;

  /// Universal variables in declaration order along the path.
  std::vector<std::string> universal_vars() const;
  /// Guard literals of every block, outermost first.
  std::vector<Literal> path_guard() const;
  bool concludes(const std::string& predicate) const;
};

/// For each existential variable (in `some` order), the terms it is
/// attached to: every other argument of a consequent literal that mentions
/// it, excluding existentials listed later. A witness's Skolem depth is one
/// more than the deepest of these.
std::vector<std::vector<Term>> witness_dependencies(const Consequent& c);

/// Backward-chaining form of one consequent literal of a guarded rule.
struct HornClause {
  Literal head;
  std::vector<Literal> body;
  std::string source_rule;
  std::size_t rule_index = 0;
  Language language = Language::Both;
  /// Existentials of the source consequent occurring in `head`.
  std::vector<std::string> existential_vars;
  /// Universal variables of the source rule, in order; Skolem functions for
  /// the existentials take these as arguments.
  std::vector<std::string> universal_vars;

  /// Head with existentials replaced by Skolem terms
  /// sk_<rule>_<var>(universals...).
  Literal skolemized_head() const;
};

std::vector<HornClause> flatten(const GuardedRule& rule,
                                std::size_t rule_index = 0);

std::string skolem_functor(const std::string& rule, const std::string& var);

class KnowledgeBase {
 public:
  const std::vector<GuardedRule>& rules() const noexcept { return rules_; }
  const std::vector<HornClause>& horn() const noexcept { return horn_; }
  const TypeLattice& lattice() const noexcept { return lattice_; }
  const std::vector<std::pair<std::string, std::string>>& equivalences()
      const noexcept {
    return equivalences_;
  }
  /// Word rules only (the lexical world).
  std::vector<const GuardedRule*> lexical_world() const;

  const GuardedRule* find_rule(std::string_view name) const;
  std::optional<std::size_t> arity(const std::string& predicate) const;
  bool known_predicate(const std::string& predicate) const;

  /// Predicates that open a rule concluding `located` (in, on, fy, Ely).
  bool is_preposition(const std::string& predicate) const;
  std::optional<Language> preposition_language(
      const std::string& predicate) const;
  const std::map<std::string, Language>& prepositions() const noexcept {
    return prepositions_;
  }

  bool equivalent(const std::string& a, const std::string& b) const;
  /// Other-language counterpart(s) of a predicate.
  std::vector<std::string> counterparts(const std::string& predicate) const;

  /// Builtin `compat` evaluation. Unregistered types are incompatible.
  bool compat(const Term& a, const Term& b) const;

  friend KnowledgeBase load_kb(std::string_view source);

 private:
  std::vector<GuardedRule> rules_;
  std::vector<HornClause> horn_;
  TypeLattice lattice_;
  std::vector<std::pair<std::string, std::string>> equivalences_;
  std::map<std::string, std::size_t> arities_;
  std::map<std::string, Language> prepositions_;
};

/// Parses and validates KB text. Throws ParseError (line/column),
/// ScopeError, ArityError or UnknownTypeError.
KnowledgeBase load_kb(std::string_view source);

/// The shipped KB (prepositions, R^n rules, plumbing, vocabulary), parsed
/// once. PREPDIAG_KB is honoured by the application layer, not here.
const KnowledgeBase& builtin_kb();

std::string to_text(const GuardedRule& rule);
/// Serialization that load_kb reads back to an equivalent KB.
std::string to_text(const KnowledgeBase& kb);

}  // namespace prepdiag
