#include "prepdiag/term.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <functional>
#include <sstream>

#include "prepdiag/errors.hpp"

namespace prepdiag {

struct Term::Node {
  TermKind kind;
  std::string name;
  std::vector<Term> children;
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

const Term& nil_term() {
  static const Term nil = Term::constant("nil");
  return nil;
}

}  // namespace

Term::Term() : Term(nil_term()) {}

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::var(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Var;
  node->name = std::move(name);
  node->hash = hash_combine(1, std::hash<std::string>{}(node->name));
  node->size = 1;
  return Term(std::move(node));
}

Term Term::constant(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Const;
  node->name = std::move(name);
  node->hash = hash_combine(2, std::hash<std::string>{}(node->name));
  node->size = 1;
  return Term(std::move(node));
}

Term Term::entity(std::string id) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Entity;
  node->name = std::move(id);
  node->hash = hash_combine(3, std::hash<std::string>{}(node->name));
  node->size = 1;
  return Term(std::move(node));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Compound;
  node->name = std::move(functor);
  std::size_t h = hash_combine(4, std::hash<std::string>{}(node->name));
  std::size_t size = 1;
  for (const auto& a : args) {
    h = hash_combine(h, a.hash());
    size += a.size();
  }
  node->hash = h;
  node->size = size;
  node->children = std::move(args);
  return Term(std::move(node));
}

Term Term::lambda(std::string param, Term body) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Lambda;
  node->name = std::move(param);
  node->hash = hash_combine(
      hash_combine(5, std::hash<std::string>{}(node->name)), body.hash());
  node->size = 1 + body.size();
  node->children.push_back(std::move(body));
  return Term(std::move(node));
}

Term Term::ref(Term restriction) {
  if (!restriction.is_lambda()) {
    throw Error("ref restriction must be a lambda: " + to_string(restriction));
  }
  auto node = std::make_shared<Node>();
  node->kind = TermKind::Ref;
  node->hash = hash_combine(6, restriction.hash());
  node->size = 1 + restriction.size();
  node->children.push_back(std::move(restriction));
  return Term(std::move(node));
}

Term Term::apply(Term function, Term argument) {
  auto node = std::make_shared<Node>();
  node->kind = TermKind::App;
  node->hash = hash_combine(hash_combine(7, function.hash()), argument.hash());
  node->size = 1 + function.size() + argument.size();
  node->children.push_back(std::move(function));
  node->children.push_back(std::move(argument));
  return Term(std::move(node));
}

TermKind Term::kind() const noexcept { return node_->kind; }
const std::string& Term::name() const noexcept { return node_->name; }
std::span<const Term> Term::children() const noexcept {
  return node_->children;
}

const Term& Term::body() const {
  if (!is_lambda()) throw Error("body() on non-lambda " + to_string(*this));
  return node_->children[0];
}

const Term& Term::restriction() const {
  if (!is_ref()) throw Error("restriction() on non-ref " + to_string(*this));
  return node_->children[0];
}

const Term& Term::function() const {
  if (!is_app()) throw Error("function() on non-application");
  return node_->children[0];
}

const Term& Term::argument() const {
  if (!is_app()) throw Error("argument() on non-application");
  return node_->children[1];
}

std::size_t Term::hash() const noexcept { return node_->hash; }
std::size_t Term::size() const noexcept { return node_->size; }

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
      a.node_->size != b.node_->size || a.node_->name != b.node_->name) {
    return false;
  }
  const auto& ac = a.node_->children;
  const auto& bc = b.node_->children;
  if (ac.size() != bc.size()) return false;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (!(ac[i] == bc[i])) return false;
  }
  return true;
}

bool operator<(const Term& a, const Term& b) {
  return to_string(a) < to_string(b);
}

// ---------------------------------------------------------------------------
// Text form

bool is_variable_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  if (name[0] == '_') return true;
  if (name[0] < 'A' || name[0] > 'Z') return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool needs_quotes(const std::string& name) {
  if (name.empty()) return true;
  if (is_variable_name(name)) return true;
  if (name == "lam" || name == "ref" || name == "app") return false;
  return !std::all_of(name.begin(), name.end(), is_ident_char);
}

void write(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      os << t.name();
      return;
    case TermKind::Const:
      if (needs_quotes(t.name())) {
        os << '\'';
        for (char c : t.name()) {
          if (c == '\'' || c == '\\') os << '\\';
          os << c;
        }
        os << '\'';
      } else {
        os << t.name();
      }
      return;
    case TermKind::Entity:
      os << '#' << t.name();
      return;
    case TermKind::Compound: {
      os << t.name();
      if (t.arity() == 0) {
        os << "()";
        return;
      }
      os << '(';
      bool first = true;
      for (const auto& a : t.children()) {
        if (!first) os << ", ";
        first = false;
        write(os, a);
      }
      os << ')';
      return;
    }
    case TermKind::Lambda:
      os << "lam(" << t.name() << ", ";
      write(os, t.body());
      os << ')';
      return;
    case TermKind::Ref:
      os << "ref(";
      write(os, t.restriction());
      os << ')';
      return;
    case TermKind::App:
      os << "app(";
      write(os, t.function());
      os << ", ";
      write(os, t.argument());
      os << ')';
      return;
  }
}

class TermReader {
 public:
  explicit TermReader(std::string_view text) : text_(text) {}

  Term read_all() {
    Term t = read();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("term: " + what, line, column);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '\'') {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail("unterminated quoted atom");
    ++pos_;
    return out;
  }

  std::vector<Term> arguments() {
    std::vector<Term> args;
    expect('(');
    if (peek(')')) {
      ++pos_;
      return args;
    }
    args.push_back(read());
    while (peek(',')) {
      ++pos_;
      args.push_back(read());
    }
    expect(')');
    return args;
  }

  Term read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '#') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      if (start == pos_) fail("empty entity id");
      return Term::entity(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == '\'') return Term::constant(quoted());
    std::string name = identifier();
    if (!peek('(')) {
      if (is_variable_name(name)) return Term::var(name);
      return Term::constant(name);
    }
    if (name == "lam") {
      expect('(');
      std::string param = identifier();
      if (!is_variable_name(param)) fail("lambda parameter must be a variable");
      expect(',');
      Term body = read();
      expect(')');
      return Term::lambda(param, body);
    }
    if (name == "ref") {
      expect('(');
      Term r = read();
      expect(')');
      if (!r.is_lambda()) fail("ref restriction must be a lambda");
      return Term::ref(r);
    }
    if (name == "app") {
      expect('(');
      Term f = read();
      expect(',');
      Term a = read();
      expect(')');
      return Term::apply(f, a);
    }
    return Term::compound(name, arguments());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  write(os, t);
  return os.str();
}

Term parse_term(std::string_view text) { return TermReader(text).read_all(); }

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end()) {
        out.insert(t.name());
      }
      return;
    case TermKind::Lambda:
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : t.children()) collect_free(c, bound, out);
  }
}

bool occurs_free(const Term& t, const std::string& var) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == var;
    case TermKind::Lambda:
      return t.name() != var && occurs_free(t.body(), var);
    default:
      for (const auto& c : t.children()) {
        if (occurs_free(c, var)) return true;
      }
      return false;
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

bool is_ground(const Term& t) { return free_vars(t).empty(); }

bool contains_entity(const Term& t) {
  if (t.is_entity()) return true;
  for (const auto& c : t.children()) {
    if (contains_entity(c)) return true;
  }
  return false;
}

void collect_entities(const Term& t, std::set<std::string>& out) {
  if (t.is_entity()) out.insert(t.name());
  for (const auto& c : t.children()) collect_entities(c, out);
}

std::string fresh_var_name(std::string_view hint) {
  static std::atomic<std::uint64_t> counter{0};
  std::string name = "_";
  name += hint;
  name += std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
  return name;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Term rebuild(const Term& t, std::vector<Term> children) {
  switch (t.kind()) {
    case TermKind::Compound:
      return Term::compound(t.name(), std::move(children));
    case TermKind::Lambda:
      return Term::lambda(t.name(), std::move(children[0]));
    case TermKind::Ref:
      return Term::ref(std::move(children[0]));
    case TermKind::App:
      return Term::apply(std::move(children[0]), std::move(children[1]));
    default:
      return t;
  }
}

// Simultaneous capture-avoiding substitution.
Term subst_map(const Term& t, const std::map<std::string, Term>& map) {
  if (map.empty()) return t;
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = map.find(t.name());
      return it == map.end() ? t : it->second;
    }
    case TermKind::Const:
    case TermKind::Entity:
      return t;
    case TermKind::Lambda: {
      std::map<std::string, Term> inner = map;
      inner.erase(t.name());
      if (inner.empty()) return t;
      // Only bindings for variables actually free in the body matter.
      std::set<std::string> body_free = free_vars(t.body());
      for (auto it = inner.begin(); it != inner.end();) {
        if (!body_free.count(it->first)) {
          it = inner.erase(it);
        } else {
          ++it;
        }
      }
      if (inner.empty()) return t;
      bool capture = false;
      for (const auto& [_, value] : inner) {
        if (occurs_free(value, t.name())) {
          capture = true;
          break;
        }
      }
      std::string param = t.name();
      Term body = t.body();
      if (capture) {
        std::string renamed = fresh_var_name(param.substr(0, 1) == "_"
                                                 ? std::string_view("G")
                                                 : std::string_view(param));
        body = subst_map(body, {{param, Term::var(renamed)}});
        param = renamed;
      }
      return Term::lambda(param, subst_map(body, inner));
    }
    default: {
      std::vector<Term> children;
      children.reserve(t.arity());
      bool changed = false;
      for (const auto& c : t.children()) {
        children.push_back(subst_map(c, map));
        if (!(children.back() == c)) changed = true;
      }
      return changed ? rebuild(t, std::move(children)) : t;
    }
  }
}

}  // namespace

Term substitute(const Term& t, const std::string& var, const Term& value) {
  return subst_map(t, {{var, value}});
}

const Term* Substitution::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

bool Substitution::bind(const std::string& var, const Term& value) {
  if (bindings_.count(var)) return false;
  Term resolved = apply(value);
  if (resolved.is_var() && resolved.name() == var) return true;
  if (occurs_free(resolved, var)) return false;
  for (auto& [_, v] : bindings_) {
    if (occurs_free(v, var)) v = substitute(v, var, resolved);
  }
  bindings_.emplace(var, std::move(resolved));
  return true;
}

Term Substitution::apply(const Term& t) const { return subst_map(t, bindings_); }

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [var, value] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += var + " -> " + to_string(value);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Unification

namespace {

bool unify_into(const Term& a0, const Term& b0, Substitution& s) {
  Term a = s.apply(a0);
  Term b = s.apply(b0);
  if (a == b) return true;
  if (a.is_var()) return s.bind(a.name(), b);
  if (b.is_var()) return s.bind(b.name(), a);
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Const:
    case TermKind::Entity:
      return a.name() == b.name();
    case TermKind::Compound: {
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!unify_into(a.children()[i], b.children()[i], s)) return false;
      }
      return true;
    }
    case TermKind::Lambda:
    case TermKind::Ref:
    case TermKind::App:
      return alpha_equal(a, b);
    case TermKind::Var:
      break;
  }
  return false;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b,
                                  const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------
// Beta reduction

bool is_redex(const Term& t) noexcept {
  return t.is_app() && t.children()[0].is_lambda();
}

namespace {

Term contract(const Term& redex) {
  const Term& fn = redex.function();
  return substitute(fn.body(), fn.name(), redex.argument());
}

// Leftmost-outermost single step; returns nullopt when in normal form.
std::optional<Term> step_normal_order(const Term& t) {
  if (is_redex(t)) return contract(t);
  if (t.arity() == 0) return std::nullopt;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (auto reduced = step_normal_order(t.children()[i])) {
      std::vector<Term> children(t.children().begin(), t.children().end());
      children[i] = std::move(*reduced);
      return rebuild(t, std::move(children));
    }
  }
  return std::nullopt;
}

void collect_redexes(const Term& t, TermPath& path, std::vector<TermPath>& out) {
  if (is_redex(t)) out.push_back(path);
  for (std::size_t i = 0; i < t.arity(); ++i) {
    path.push_back(i);
    collect_redexes(t.children()[i], path, out);
    path.pop_back();
  }
}

Term contract_path(const Term& t, const TermPath& path, std::size_t depth) {
  if (depth == path.size()) {
    if (!is_redex(t)) throw Error("no redex at path in " + to_string(t));
    return contract(t);
  }
  std::size_t i = path[depth];
  if (i >= t.arity()) throw Error("term path out of range");
  std::vector<Term> children(t.children().begin(), t.children().end());
  children[i] = contract_path(children[i], path, depth + 1);
  return rebuild(t, std::move(children));
}

}  // namespace

Term beta_reduce(const Term& t, const BetaOptions& options) {
  Term current = t;
  for (std::size_t steps = 0;; ++steps) {
    auto next = step_normal_order(current);
    if (!next) return current;
    if (steps >= options.max_steps) {
      throw ReductionLimitError("beta reduction exceeded " +
                                std::to_string(options.max_steps) +
                                " steps; malformed grammar annotation?");
    }
    current = std::move(*next);
  }
}

std::vector<TermPath> redex_positions(const Term& t) {
  std::vector<TermPath> out;
  TermPath path;
  collect_redexes(t, path, out);
  return out;
}

Term contract_at(const Term& t, const TermPath& path) {
  return contract_path(t, path, 0);
}

// ---------------------------------------------------------------------------
// Alpha equivalence

bool EntityBijection::link(const std::string& a, const std::string& b) {
  auto f = forward.find(a);
  auto r = backward.find(b);
  if (f != forward.end() || r != backward.end()) {
    return f != forward.end() && r != backward.end() && f->second == b &&
           r->second == a;
  }
  forward.emplace(a, b);
  backward.emplace(b, a);
  return true;
}

namespace {

// Bound variables are compared by binder depth (de Bruijn levels).
using Scope = std::vector<std::pair<std::string, std::string>>;

int bound_level(const Scope& scope, const std::string& name, bool left) {
  for (int i = static_cast<int>(scope.size()) - 1; i >= 0; --i) {
    const auto& entry = scope[static_cast<std::size_t>(i)];
    if ((left ? entry.first : entry.second) == name) return i;
  }
  return -1;
}

bool alpha_rec(const Term& a, const Term& b, Scope& scope,
               EntityBijection* bijection) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      int la = bound_level(scope, a.name(), true);
      int lb = bound_level(scope, b.name(), false);
      if (la != lb) return false;
      return la >= 0 || a.name() == b.name();
    }
    case TermKind::Const:
      return a.name() == b.name();
    case TermKind::Entity:
      if (bijection) return bijection->link(a.name(), b.name());
      return a.name() == b.name();
    case TermKind::Lambda: {
      scope.emplace_back(a.name(), b.name());
      bool ok = alpha_rec(a.body(), b.body(), scope, bijection);
      scope.pop_back();
      return ok;
    }
    default:
      if (a.name() != b.name() || a.arity() != b.arity()) return false;
      for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!alpha_rec(a.children()[i], b.children()[i], scope, bijection)) {
          return false;
        }
      }
      return true;
  }
}

}  // namespace

bool alpha_equal(const Term& a, const Term& b) {
  if (a == b) return true;
  Scope scope;
  return alpha_rec(a, b, scope, nullptr);
}

bool alpha_equal(const Term& a, const Term& b, EntityBijection& bijection) {
  Scope scope;
  return alpha_rec(a, b, scope, &bijection);
}

namespace {

std::string letter_name(std::size_t index) {
  std::string name(1, static_cast<char>('A' + index % 26));
  if (index >= 26) name += std::to_string(index / 26);
  return name;
}

class CanonicalNamer {
 public:
  explicit CanonicalNamer(std::set<std::string> avoid)
      : avoid_(std::move(avoid)) {}

  std::string next() {
    while (true) {
      std::string candidate = letter_name(counter_++);
      if (!avoid_.count(candidate)) return candidate;
    }
  }

 private:
  std::set<std::string> avoid_;
  std::size_t counter_ = 0;
};

Term rename_bound(const Term& t, CanonicalNamer& namer,
                  std::map<std::string, std::string>& env) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = env.find(t.name());
      return it == env.end() ? t : Term::var(it->second);
    }
    case TermKind::Const:
    case TermKind::Entity:
      return t;
    case TermKind::Lambda: {
      std::string fresh = namer.next();
      auto saved = env.find(t.name());
      std::optional<std::string> previous;
      if (saved != env.end()) previous = saved->second;
      env[t.name()] = fresh;
      Term body = rename_bound(t.body(), namer, env);
      if (previous) {
        env[t.name()] = *previous;
      } else {
        env.erase(t.name());
      }
      return Term::lambda(fresh, body);
    }
    default: {
      std::vector<Term> children;
      for (const auto& c : t.children()) {
        children.push_back(rename_bound(c, namer, env));
      }
      return rebuild(t, std::move(children));
    }
  }
}

void first_free_order(const Term& t, std::vector<std::string>& bound,
                      std::vector<std::string>& order) {
  switch (t.kind()) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t.name()) == bound.end() &&
          std::find(order.begin(), order.end(), t.name()) == order.end()) {
        order.push_back(t.name());
      }
      return;
    case TermKind::Lambda:
      bound.push_back(t.name());
      first_free_order(t.body(), bound, order);
      bound.pop_back();
      return;
    default:
      for (const auto& c : t.children()) first_free_order(c, bound, order);
  }
}

}  // namespace

Term canonical_bound_names(const Term& t) {
  CanonicalNamer namer(free_vars(t));
  std::map<std::string, std::string> env;
  return rename_bound(t, namer, env);
}

Term canonical_free_names(const Term& t) {
  std::vector<std::string> bound, order;
  first_free_order(t, bound, order);
  if (order.empty()) return t;
  // Move bound names out of the way first so the new free names cannot be
  // captured.
  std::map<std::string, Term> tmp, final_map;
  for (std::size_t i = 0; i < order.size(); ++i) {
    tmp.emplace(order[i], Term::var("_free" + std::to_string(i)));
  }
  Term staged = subst_map(t, tmp);
  for (std::size_t i = 0; i < order.size(); ++i) {
    final_map.emplace("_free" + std::to_string(i), Term::var(letter_name(i)));
  }
  return subst_map(staged, final_map);
}

std::vector<Term> flatten_conjunction(const Term& t) {
  std::vector<Term> out;
  std::function<void(const Term&)> walk = [&](const Term& x) {
    if (x.is_compound() && x.name() == "and") {
      for (const auto& c : x.children()) walk(c);
    } else {
      out.push_back(x);
    }
  };
  walk(t);
  return out;
}

// ---------------------------------------------------------------------------
// Literals

bool Literal::ground() const {
  return std::all_of(args.begin(), args.end(),
                     [](const Term& t) { return is_ground(t); });
}

Term Literal::to_term() const {
  Term atom = Term::compound(predicate, args);
  return positive ? atom : Term::compound("not", {atom});
}

Literal Literal::from_term(const Term& t) {
  if (t.is_compound() && t.name() == "not" && t.arity() == 1 &&
      t.children()[0].is_compound()) {
    Literal l = from_term(t.children()[0]);
    l.positive = !l.positive;
    return l;
  }
  if (!t.is_compound()) throw Error("not a literal: " + to_string(t));
  return Literal(t.name(), std::vector<Term>(t.children().begin(),
                                             t.children().end()));
}

bool operator<(const Literal& a, const Literal& b) {
  return to_string(a) < to_string(b);
}

std::size_t LiteralHash::operator()(const Literal& l) const noexcept {
  std::size_t h = std::hash<std::string>{}(l.predicate) + (l.positive ? 1 : 0);
  for (const auto& a : l.args) h = hash_combine(h, a.hash());
  return h;
}

std::string to_string(const Literal& l) { return to_string(l.to_term()); }

Literal parse_literal(std::string_view text) {
  return Literal::from_term(parse_term(text));
}

Literal apply(const Substitution& s, const Literal& l) {
  Literal out = l;
  for (auto& a : out.args) a = s.apply(a);
  return out;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b,
                                  const Substitution& s) {
  if (a.positive != b.positive || a.predicate != b.predicate ||
      a.args.size() != b.args.size()) {
    return std::nullopt;
  }
  Substitution out = s;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify_into(a.args[i], b.args[i], out)) return std::nullopt;
  }
  return out;
}

Literal canonical_bound_names(const Literal& l) {
  Literal out = l;
  for (auto& a : out.args) {
    if (!a.is_var() && !a.is_const() && !a.is_entity()) {
      a = canonical_bound_names(a);
    }
  }
  return out;
}

}  // namespace prepdiag
