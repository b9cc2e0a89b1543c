#include "prepdiag/kb.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"

namespace prepdiag {

std::string to_string(Language language) {
  switch (language) {
    case Language::En:
      return "en";
    case Language::Ar:
      return "ar";
    case Language::Both:
      return "both";
  }
  return "both";
}

Language parse_language(std::string_view text) {
  if (text == "en") return Language::En;
  if (text == "ar") return Language::Ar;
  if (text == "both") return Language::Both;
  throw Error("unknown language: " + std::string(text));
}

bool applies_to(Language rule_language, Language language) noexcept {
  return rule_language == Language::Both || language == Language::Both ||
         rule_language == language;
}

std::vector<std::string> GuardedRule::universal_vars() const {
  std::vector<std::string> out;
  for (const auto& b : blocks) out.insert(out.end(), b.vars.begin(), b.vars.end());
  return out;
}

std::vector<Literal> GuardedRule::path_guard() const {
  std::vector<Literal> out;
  for (const auto& b : blocks) out.insert(out.end(), b.guard.begin(), b.guard.end());
  return out;
}

bool GuardedRule::concludes(const std::string& predicate) const {
  return std::any_of(consequent.literals.begin(), consequent.literals.end(),
                     [&](const Literal& l) { return l.predicate == predicate; });
}

std::vector<std::vector<Term>> witness_dependencies(const Consequent& c) {
  std::vector<std::vector<Term>> out(c.existential_vars.size());
  for (std::size_t k = 0; k < c.existential_vars.size(); ++k) {
    const std::string& v = c.existential_vars[k];
    std::set<std::string> later(c.existential_vars.begin() + static_cast<long>(k),
                                c.existential_vars.end());
    for (const auto& lit : c.literals) {
      bool mentions = std::any_of(lit.args.begin(), lit.args.end(), [&](const Term& a) {
        return a.is_var() && a.name() == v;
      });
      if (!mentions) continue;
      for (const auto& a : lit.args) {
        if (a.is_var() && later.count(a.name())) continue;
        if (std::find(out[k].begin(), out[k].end(), a) == out[k].end()) {
          out[k].push_back(a);
        }
      }
    }
  }
  return out;
}

std::string skolem_functor(const std::string& rule, const std::string& var) {
  return "sk_" + rule + "_" + var;
}

Literal HornClause::skolemized_head() const {
  if (existential_vars.empty()) return head;
  std::vector<Term> args;
  for (const auto& u : universal_vars) args.push_back(Term::var(u));
  Substitution s;
  for (const auto& e : existential_vars) {
    s.bind(e, Term::compound(skolem_functor(source_rule, e), args));
  }
  return apply(s, head);
}

std::vector<HornClause> flatten(const GuardedRule& rule, std::size_t rule_index) {
  std::vector<HornClause> out;
  std::vector<Literal> body = rule.path_guard();
  std::vector<std::string> universals = rule.universal_vars();
  for (const auto& lit : rule.consequent.literals) {
    HornClause clause;
    clause.head = lit;
    clause.body = body;
    clause.source_rule = rule.name;
    clause.rule_index = rule_index;
    clause.language = rule.language;
    clause.universal_vars = universals;
    std::set<std::string> vars;
    for (const auto& a : lit.args) {
      auto fv = free_vars(a);
      vars.insert(fv.begin(), fv.end());
    }
    for (const auto& e : rule.consequent.existential_vars) {
      if (vars.count(e)) clause.existential_vars.push_back(e);
    }
    out.push_back(std::move(clause));
  }
  return out;
}

// ---------------------------------------------------------------------------
// KnowledgeBase queries

std::vector<const GuardedRule*> KnowledgeBase::lexical_world() const {
  std::vector<const GuardedRule*> out;
  for (const auto& r : rules_) {
    if (r.is_word) out.push_back(&r);
  }
  return out;
}

const GuardedRule* KnowledgeBase::find_rule(std::string_view name) const {
  for (const auto& r : rules_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::optional<std::size_t> KnowledgeBase::arity(const std::string& predicate) const {
  auto it = arities_.find(predicate);
  if (it == arities_.end()) return std::nullopt;
  return it->second;
}

bool KnowledgeBase::known_predicate(const std::string& predicate) const {
  return arities_.count(predicate) != 0;
}

bool KnowledgeBase::is_preposition(const std::string& predicate) const {
  return prepositions_.count(predicate) != 0;
}

std::optional<Language> KnowledgeBase::preposition_language(
    const std::string& predicate) const {
  auto it = prepositions_.find(predicate);
  if (it == prepositions_.end()) return std::nullopt;
  return it->second;
}

bool KnowledgeBase::equivalent(const std::string& a, const std::string& b) const {
  if (a == b) return true;
  return std::any_of(equivalences_.begin(), equivalences_.end(), [&](const auto& e) {
    return (e.first == a && e.second == b) || (e.first == b && e.second == a);
  });
}

std::vector<std::string> KnowledgeBase::counterparts(const std::string& predicate) const {
  std::vector<std::string> out;
  for (const auto& [en, ar] : equivalences_) {
    if (en == predicate) out.push_back(ar);
    if (ar == predicate) out.push_back(en);
  }
  return out;
}

bool KnowledgeBase::compat(const Term& a, const Term& b) const {
  if (!a.is_const() || !b.is_const()) return false;
  if (!lattice_.contains(a.name()) || !lattice_.contains(b.name())) return false;
  return lattice_.compatible(a.name(), b.name());
}

// ---------------------------------------------------------------------------
// Loader

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class KbParser {
 public:
  explicit KbParser(std::string_view src) : src_(src) {}

  struct Output {
    std::vector<GuardedRule> rules;
    TypeLattice lattice;
    std::vector<std::pair<std::string, std::string>> equivalences;
    // Lattice declarations are replayed after parsing so they may appear in
    // any order relative to each other.
    std::vector<std::pair<std::string, std::size_t>> partitions;
    std::vector<std::tuple<std::string, std::string, std::size_t>> subtypes;
  };

  Output parse() {
    Output out;
    while (true) {
      skip();
      if (at_end()) break;
      std::size_t start = pos_;
      std::string keyword = ident();
      if (keyword == "partition") {
        std::string name = ident();
        expect(".");
        out.partitions.emplace_back(name, start);
      } else if (keyword == "type") {
        std::string child = ident();
        expect("<");
        std::string parent = ident();
        expect(".");
        out.subtypes.emplace_back(child, parent, start);
      } else if (keyword == "equiv") {
        std::string a = ident();
        expect("~");
        std::string b = ident();
        expect(".");
        out.equivalences.emplace_back(a, b);
      } else if (keyword == "rule") {
        out.rules.push_back(rule(start));
      } else if (keyword == "word") {
        out.rules.push_back(word(start));
      } else {
        fail_at(start, "unknown declaration '" + keyword + "'");
      }
    }
    return out;
  }

  std::pair<std::size_t, std::size_t> location(std::size_t pos) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) const {
    auto [line, column] = location(pos);
    throw ParseError("kb: " + what, line, column);
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }

  void skip() {
    while (!at_end()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        std::size_t end = src_.find('\n', pos_);
        if (end == std::string_view::npos) end = src_.size();
        std::string_view text = src_.substr(pos_ + 1, end - pos_ - 1);
        while (!text.empty() && (text.front() == ' ' || text.front() == '#')) {
          text.remove_prefix(1);
        }
        if (text.substr(0, 8) == "plumbing") plumbing_pending_ = true;
        pos_ = end;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view token) {
    skip();
    return src_.substr(pos_, token.size()) == token;
  }

  void expect(std::string_view token) {
    if (!peek(token)) fail_at(pos_, "expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (!at_end() && ident_char(src_[pos_])) ++pos_;
    if (start == pos_) fail_at(pos_, "expected name");
    return std::string(src_.substr(start, pos_ - start));
  }

  bool peek_ident_followed_by_paren() {
    skip();
    std::size_t p = pos_;
    while (p < src_.size() && ident_char(src_[p])) ++p;
    while (p < src_.size() && src_[p] == ' ') ++p;
    return p < src_.size() && src_[p] == '(';
  }

  Literal literal() {
    skip();
    std::size_t start = pos_;
    while (!at_end() && ident_char(src_[pos_])) ++pos_;
    if (start == pos_) fail_at(pos_, "expected literal");
    skip();
    if (!peek("(")) fail_at(pos_, "expected '(' after predicate");
    int depth = 0;
    bool quoted = false;
    for (; !at_end(); ++pos_) {
      char c = src_[pos_];
      if (quoted) {
        if (c == '\\') {
          ++pos_;
        } else if (c == '\'') {
          quoted = false;
        }
        continue;
      }
      if (c == '\'') quoted = true;
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) {
        ++pos_;
        break;
      }
    }
    if (depth != 0) fail_at(start, "unbalanced parentheses");
    std::string_view text = src_.substr(start, pos_ - start);
    try {
      Literal lit = Literal::from_term(parse_term(text));
      line_of_.emplace(to_string(lit), start);
      return lit;
    } catch (const ParseError& e) {
      fail_at(start, e.what());
    }
  }

  std::vector<std::string> var_list() {
    std::vector<std::string> vars;
    vars.push_back(ident());
    while (peek(",")) {
      ++pos_;
      vars.push_back(ident());
    }
    for (const auto& v : vars) {
      if (!is_variable_name(v)) fail_at(pos_, "not a variable name: " + v);
    }
    return vars;
  }

  std::vector<Literal> literal_list() {
    std::vector<Literal> lits;
    lits.push_back(literal());
    while (peek(",")) {
      ++pos_;
      lits.push_back(literal());
    }
    return lits;
  }

  Language language_tag() {
    expect("(");
    std::string lang = ident();
    expect(")");
    try {
      return parse_language(lang);
    } catch (const Error&) {
      fail_at(pos_, "unknown language tag '" + lang + "'");
    }
  }

  GuardedRule rule(std::size_t start) {
    GuardedRule r;
    r.plumbing = plumbing_pending_;
    plumbing_pending_ = false;
    r.line = location(start).first;
    r.name = ident();
    r.language = language_tag();
    expect(":");
    while (true) {
      skip();
      if (peek("=>")) {
        pos_ += 2;
        if (peek("some") && !peek_ident_followed_by_paren()) {
          pos_ += 4;
          r.consequent.existential_vars = var_list();
          expect(":");
        }
        r.consequent.literals = literal_list();
        expect(".");
        return r;
      }
      std::string kw = ident();
      if (kw != "all") fail_at(pos_, "expected 'all' or '=>'");
      ForallBlock block;
      block.vars = var_list();
      expect(":");
      expect("[");
      block.guard = literal_list();
      expect("]");
      r.blocks.push_back(std::move(block));
    }
  }

  GuardedRule word(std::size_t start) {
    GuardedRule r;
    r.plumbing = plumbing_pending_;
    plumbing_pending_ = false;
    r.is_word = true;
    r.line = location(start).first;
    std::string predicate = ident();
    r.name = "word_" + predicate;
    r.language = language_tag();
    if (r.language == Language::Both) fail_at(pos_, "word must be en or ar");
    expect(":");

    const Term subject = Term::var("B");
    ForallBlock block;
    block.vars = {"B"};
    block.guard = {Literal(predicate, {subject})};
    r.blocks.push_back(block);

    std::vector<Literal> raw;
    struct Embedding {
      std::string dim;
      bool orientable;
    };
    std::vector<Embedding> embeddings;
    std::vector<std::string> types;
    do {
      if (!r.consequent.literals.empty() || !embeddings.empty() || !types.empty() ||
          !raw.empty()) {
        ++pos_;  // the comma
      }
      if (peek_ident_followed_by_paren()) {
        raw.push_back(literal());
        continue;
      }
      std::size_t item_pos = pos_;
      std::string item = ident();
      if (item == "type") {
        types.push_back(ident());
      } else if (item.rfind("embedding", 0) == 0 && item.size() > 9 &&
                 std::all_of(item.begin() + 9, item.end(),
                             [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        Embedding e{item.substr(9), false};
        skip();
        if (peek("orientable")) {
          ident();
          e.orientable = true;
        }
        embeddings.push_back(e);
      } else {
        fail_at(item_pos, "unknown word feature '" + item + "'");
      }
    } while (peek(","));
    expect(".");

    std::set<std::string> used{"B"};
    for (const auto& l : raw) {
      for (const auto& a : l.args) {
        auto fv = free_vars(a);
        used.insert(fv.begin(), fv.end());
      }
    }
    for (const auto& t : types) {
      r.consequent.literals.emplace_back("type", std::vector<Term>{subject, Term::constant(t)});
    }
    char next = 'C';
    for (const auto& e : embeddings) {
      std::string v;
      for (std::size_t suffix = 0;; ++suffix) {
        v = std::string(1, next);
        if (suffix > 0) v += std::to_string(suffix);
        if (!used.count(v)) break;
      }
      used.insert(v);
      if (next < 'Z') ++next;
      r.consequent.existential_vars.push_back(v);
      r.consequent.literals.emplace_back(
          "embedding",
          std::vector<Term>{Term::var(v), subject, Term::constant("r" + e.dim)});
      if (e.orientable) r.consequent.literals.emplace_back("orientable", std::vector<Term>{Term::var(v)});
    }
    for (const auto& l : raw) {
      for (const auto& a : l.args) {
        for (const auto& v : free_vars(a)) {
          if (v != "B" && std::find(r.consequent.existential_vars.begin(),
                                    r.consequent.existential_vars.end(),
                                    v) == r.consequent.existential_vars.end()) {
            r.consequent.existential_vars.push_back(v);
          }
        }
      }
      r.consequent.literals.push_back(l);
    }
    return r;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  bool plumbing_pending_ = false;
  std::map<std::string, std::size_t> line_of_;
};

void check_arity(std::map<std::string, std::size_t>& arities, const Literal& l,
                 const std::string& rule) {
  auto [it, inserted] = arities.emplace(l.predicate, l.arity());
  if (!inserted && it->second != l.arity()) {
    throw ArityError("rule " + rule + ": predicate " + l.predicate + " used with arity " +
                     std::to_string(l.arity()) + " but declared with arity " +
                     std::to_string(it->second));
  }
}

void validate_scope(const GuardedRule& r) {
  std::set<std::string> bound;
  auto check = [&](const Literal& l) {
    for (const auto& a : l.args) {
      for (const auto& v : free_vars(a)) {
        if (!bound.count(v)) throw ScopeError(r.name, v);
      }
    }
  };
  for (const auto& b : r.blocks) {
    bound.insert(b.vars.begin(), b.vars.end());
    for (const auto& l : b.guard) check(l);
  }
  bound.insert(r.consequent.existential_vars.begin(), r.consequent.existential_vars.end());
  for (const auto& l : r.consequent.literals) check(l);
}

void check_types(const TypeLattice& lattice, const GuardedRule& r) {
  auto check = [&](const Literal& l) {
    if (l.predicate == "type" && l.arity() == 2 && l.args[1].is_const()) {
      lattice.root(l.args[1].name());
    }
    if (l.predicate == "compat") {
      for (const auto& a : l.args) {
        if (a.is_const()) lattice.root(a.name());
      }
    }
  };
  for (const auto& b : r.blocks) {
    for (const auto& l : b.guard) check(l);
  }
  for (const auto& l : r.consequent.literals) check(l);
}

}  // namespace

KnowledgeBase load_kb(std::string_view source) {
  KbParser parser(source);
  KbParser::Output parsed = parser.parse();

  KnowledgeBase kb;
  for (const auto& [name, pos] : parsed.partitions) {
    try {
      kb.lattice_.add_partition(name);
    } catch (const UnknownTypeError&) {
      throw;
    } catch (const Error& e) {
      parser.fail_at(pos, e.what());
    }
  }
  // Subtypes may name parents declared further down.
  auto pending = parsed.subtypes;
  while (!pending.empty()) {
    std::size_t before = pending.size();
    for (auto it = pending.begin(); it != pending.end();) {
      const auto& [child, parent, pos] = *it;
      if (kb.lattice_.contains(parent)) {
        try {
          kb.lattice_.add_subtype(child, parent);
        } catch (const UnknownTypeError&) {
          throw;
        } catch (const Error& e) {
          parser.fail_at(pos, e.what());
        }
        it = pending.erase(it);
      } else {
        ++it;
      }
    }
    if (pending.size() == before) {
      throw UnknownTypeError(std::get<1>(pending.front()));
    }
  }
  kb.equivalences_ = parsed.equivalences;

  kb.arities_["compat"] = 2;
  kb.arities_["located"] = 2;
  std::set<std::string> names;
  for (auto& r : parsed.rules) {
    if (!names.insert(r.name).second) throw Error("duplicate rule name: " + r.name);
    validate_scope(r);
    for (const auto& b : r.blocks) {
      for (const auto& l : b.guard) check_arity(kb.arities_, l, r.name);
    }
    for (const auto& l : r.consequent.literals) check_arity(kb.arities_, l, r.name);
    check_types(kb.lattice_, r);
    if (r.concludes("located")) {
      if (r.blocks.empty() || r.blocks.front().guard.size() != 1) {
        throw Error("rule " + r.name +
                    ": the outermost guard of a preposition rule must hold exactly "
                    "one preposition literal");
      }
      kb.prepositions_[r.blocks.front().guard.front().predicate] = r.language;
    }
  }
  kb.rules_ = std::move(parsed.rules);
  for (std::size_t i = 0; i < kb.rules_.size(); ++i) {
    auto clauses = flatten(kb.rules_[i], i);
    kb.horn_.insert(kb.horn_.end(), clauses.begin(), clauses.end());
  }
  return kb;
}

const KnowledgeBase& builtin_kb() {
  static const KnowledgeBase kb = load_kb(builtin::kb_text());
  return kb;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string join_vars(const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i];
  }
  return out;
}

std::string join_literals(const std::vector<Literal>& lits) {
  std::string out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i) out += ", ";
    out += to_string(lits[i]);
  }
  return out;
}

}  // namespace

std::string to_text(const GuardedRule& rule) {
  std::ostringstream os;
  if (rule.plumbing) os << "# plumbing\n";
  os << "rule " << rule.name << " (" << to_string(rule.language) << "):\n";
  for (const auto& b : rule.blocks) {
    os << "  all " << join_vars(b.vars) << ": [" << join_literals(b.guard) << "]\n";
  }
  os << "  =>";
  if (!rule.consequent.existential_vars.empty()) {
    os << " some " << join_vars(rule.consequent.existential_vars) << ":";
  }
  os << " " << join_literals(rule.consequent.literals) << ".\n";
  return os.str();
}

std::string to_text(const KnowledgeBase& kb) {
  std::ostringstream os;
  for (const auto& p : kb.lattice().partitions()) os << "partition " << p << ".\n";
  for (const auto& [child, parent] : kb.lattice().subtypes()) {
    os << "type " << child << " < " << parent << ".\n";
  }
  for (const auto& [a, b] : kb.equivalences()) os << "equiv " << a << " ~ " << b << ".\n";
  for (const auto& r : kb.rules()) os << "\n" << to_text(r);
  return os.str();
}

}  // namespace prepdiag
