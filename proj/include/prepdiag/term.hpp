#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prepdiag {

enum class TermKind : std::uint8_t {
  Var,
  Const,
  Entity,    // discourse / Skolem constant, printed #<id>
  Compound,  // functor(args...)
  Lambda,    // lam(Param, Body)
  Ref,       // ref(lam(X, ...)): a referring expression awaiting anchoring
  App,       // app(Fn, Arg): an unreduced application
};

/// Immutable logical term with shared structure. Copying a Term is cheap.
class Term {
 public:
  Term();  // the constant `nil`

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term entity(std::string id);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term lambda(std::string param, Term body);
  /// Throws Error unless `restriction` is a Lambda.
  static Term ref(Term restriction);
  static Term apply(Term function, Term argument);

  TermKind kind() const noexcept;
  bool is_var() const noexcept { return kind() == TermKind::Var; }
  bool is_const() const noexcept { return kind() == TermKind::Const; }
  bool is_entity() const noexcept { return kind() == TermKind::Entity; }
  bool is_compound() const noexcept { return kind() == TermKind::Compound; }
  bool is_lambda() const noexcept { return kind() == TermKind::Lambda; }
  bool is_ref() const noexcept { return kind() == TermKind::Ref; }
  bool is_app() const noexcept { return kind() == TermKind::App; }

  /// Variable or constant name, entity id (without '#'), functor, or the
  /// bound parameter of a Lambda.
  const std::string& name() const noexcept;
  /// Compound arguments; the single child of Lambda/Ref; function and
  /// argument of App.
  std::span<const Term> children() const noexcept;
  std::size_t arity() const noexcept { return children().size(); }

  const Term& body() const;         // Lambda
  const Term& restriction() const;  // Ref
  const Term& function() const;     // App
  const Term& argument() const;     // App

  std::size_t hash() const noexcept;
  std::size_t size() const noexcept;  // node count

  friend bool operator==(const Term& a, const Term& b) noexcept;
  friend bool operator!=(const Term& a, const Term& b) noexcept {
    return !(a == b);
  }
  /// Total order on canonical text; used for deterministic sorting.
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Canonical prefix text: `on(ref(lam(E, and(own(...), office(E)))), #3)`.
std::string to_string(const Term& t);
Term parse_term(std::string_view text);

/// True when `name` would be read back as a variable.
bool is_variable_name(std::string_view name) noexcept;

std::set<std::string> free_vars(const Term& t);
bool is_ground(const Term& t);
bool contains_entity(const Term& t);
void collect_entities(const Term& t, std::set<std::string>& out);

/// Fresh variable name that cannot clash with user-written names.
std::string fresh_var_name(std::string_view hint = "G");

/// Finite map from variable names to terms, kept idempotent: no bound
/// variable occurs in any binding's value.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const noexcept { return bindings_.empty(); }
  std::size_t size() const noexcept { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const noexcept {
    return bindings_;
  }
  const Term* lookup(const std::string& var) const;

  /// Adds var -> value. Returns false (and leaves *this unchanged) on an
  /// occurs-check violation or when var is already bound.
  bool bind(const std::string& var, const Term& value);

  /// Capture-avoiding application.
  Term apply(const Term& t) const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.bindings_ == b.bindings_;
  }

 private:
  std::map<std::string, Term> bindings_;
};

std::string to_string(const Substitution& s);

/// Capture-avoiding replacement of free occurrences of `var` by `value`.
Term substitute(const Term& t, const std::string& var, const Term& value);

/// First-order most general unifier extending `s`. Lambdas, Refs and Apps
/// unify only with alpha-equal terms (or with a variable).
std::optional<Substitution> unify(const Term& a, const Term& b,
                                  const Substitution& s = {});

struct BetaOptions {
  std::size_t max_steps = 10'000;
};

/// Normal-order reduction to beta-normal form. Throws ReductionLimitError
/// once the step cap is exceeded.
Term beta_reduce(const Term& t, const BetaOptions& options = {});

/// Path from the root to a subterm, as child indices.
using TermPath = std::vector<std::size_t>;

std::vector<TermPath> redex_positions(const Term& t);
/// Contracts the redex at `path`. Throws Error when it is not a redex.
Term contract_at(const Term& t, const TermPath& path);
bool is_redex(const Term& t) noexcept;

/// Consistent entity renaming built up while comparing two terms.
struct EntityBijection {
  std::unordered_map<std::string, std::string> forward;
  std::unordered_map<std::string, std::string> backward;

  /// Maps a -> b, failing if either side is already mapped elsewhere.
  bool link(const std::string& a, const std::string& b);
};

bool alpha_equal(const Term& a, const Term& b);
/// Alpha-equality where entity ids may differ under a consistent bijection.
/// On success `bijection` is extended; on failure it may be partially
/// extended, so pass a copy when that matters.
bool alpha_equal(const Term& a, const Term& b, EntityBijection& bijection);

/// Renames bound variables by order of occurrence (A, B, ..., A1, ...),
/// skipping names that are free in the term. Alpha-equal terms map to equal
/// terms.
Term canonical_bound_names(const Term& t);
/// Renames free variables by order of first occurrence, again from A.
Term canonical_free_names(const Term& t);

/// Conjuncts of nested `and(...)`.
std::vector<Term> flatten_conjunction(const Term& t);

/// predicate(args...), possibly negated. Facts are positive ground literals.
struct Literal {
  std::string predicate;
  std::vector<Term> args;
  bool positive = true;

  Literal() = default;
  Literal(std::string pred, std::vector<Term> arguments, bool pos = true)
      : predicate(std::move(pred)), args(std::move(arguments)), positive(pos) {}

  std::size_t arity() const noexcept { return args.size(); }
  bool ground() const;
  /// Compound form; negative literals are wrapped in not(...).
  Term to_term() const;
  /// Throws Error unless `t` is a Compound (or not(Compound)).
  static Literal from_term(const Term& t);

  friend bool operator==(const Literal& a, const Literal& b) noexcept {
    return a.positive == b.positive && a.predicate == b.predicate &&
           a.args == b.args;
  }
  friend bool operator!=(const Literal& a, const Literal& b) noexcept {
    return !(a == b);
  }
  friend bool operator<(const Literal& a, const Literal& b);
};

struct LiteralHash {
  std::size_t operator()(const Literal& l) const noexcept;
};

std::string to_string(const Literal& l);
Literal parse_literal(std::string_view text);
Literal apply(const Substitution& s, const Literal& l);
std::optional<Substitution> unify(const Literal& a, const Literal& b,
                                  const Substitution& s = {});
/// Bound variables inside lambda-valued arguments renamed canonically.
Literal canonical_bound_names(const Literal& l);

}  // namespace prepdiag
