#include "oracle.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "prepdiag/errors.hpp"

#ifndef PREPDIAG_GOLDEN_DIR
#error "PREPDIAG_GOLDEN_DIR must be defined"
#endif

namespace prepdiag::oracle {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string golden(const std::string& name) { return std::string(PREPDIAG_GOLDEN_DIR) + "/" + name; }

std::vector<Literal> read_facts(const std::string& path) {
  std::vector<Literal> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto last = line.find_last_not_of(" \t\r");
    out.push_back(parse_literal(line.substr(first, last - first + 1)));
  }
  return out;
}

// ---------------------------------------------------------------- unification

namespace {

Term walk(Term t, const std::map<std::string, Term>& s) {
  while (t.is_var()) {
    auto it = s.find(t.name());
    if (it == s.end()) break;
    t = it->second;
  }
  return t;
}

bool occurs(const std::string& v, const Term& t, const std::map<std::string, Term>& s) {
  Term w = walk(t, s);
  if (w.is_var()) return w.name() == v;
  for (const auto& c : w.children()) {
    if (occurs(v, c, s)) return true;
  }
  return false;
}

}  // namespace

Term resolve(const Term& t, const std::map<std::string, Term>& s) {
  Term w = walk(t, s);
  if (!w.is_compound()) return w;
  std::vector<Term> args;
  for (const auto& c : w.children()) args.push_back(resolve(c, s));
  return Term::compound(w.name(), std::move(args));
}

std::optional<std::map<std::string, Term>> robinson(const Term& a, const Term& b) {
  std::map<std::string, Term> s;
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x0, y0] = work.back();
    work.pop_back();
    Term x = walk(x0, s);
    Term y = walk(y0, s);
    if (x.is_var() && y.is_var() && x.name() == y.name()) continue;
    if (x.is_var()) {
      if (occurs(x.name(), y, s)) return std::nullopt;
      s[x.name()] = y;
    } else if (y.is_var()) {
      if (occurs(y.name(), x, s)) return std::nullopt;
      s[y.name()] = x;
    } else if (x.is_compound() && y.is_compound()) {
      if (x.name() != y.name() || x.arity() != y.arity()) return std::nullopt;
      for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.children()[i], y.children()[i]);
    } else if (x.kind() != y.kind() || x.name() != y.name()) {
      return std::nullopt;
    }
  }
  return s;
}

namespace {

bool variant_walk(const Term& a, const Term& b, std::map<std::string, std::string>& fwd,
                  std::map<std::string, std::string>& bwd) {
  if (a.is_var() || b.is_var()) {
    if (!a.is_var() || !b.is_var()) return false;
    auto f = fwd.emplace(a.name(), b.name()).first;
    auto g = bwd.emplace(b.name(), a.name()).first;
    return f->second == b.name() && g->second == a.name();
  }
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!variant_walk(a.children()[i], b.children()[i], fwd, bwd)) return false;
  }
  return true;
}

}  // namespace

bool variant(const Term& a, const Term& b) {
  std::map<std::string, std::string> fwd, bwd;
  return variant_walk(a, b, fwd, bwd);
}

// ---------------------------------------------------------------- lambda terms

namespace {

void all_var_names(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      out.insert(t.name());
      return;
    case TermKind::Lambda:
      out.insert(t.name());
      all_var_names(t.body(), out);
      return;
    case TermKind::Ref:
      all_var_names(t.restriction(), out);
      return;
    case TermKind::App:
      all_var_names(t.function(), out);
      all_var_names(t.argument(), out);
      return;
    case TermKind::Compound:
      for (const auto& c : t.children()) all_var_names(c, out);
      return;
    default:
      return;
  }
}

Term rename_in(const Term& t, std::map<std::string, std::string> env, std::set<std::string>& used,
               std::mt19937& rng) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = env.find(t.name());
      return it == env.end() ? t : Term::var(it->second);
    }
    case TermKind::Lambda: {
      std::string fresh;
      do {
        fresh = std::string(1, static_cast<char>('P' + rng() % 4)) + std::to_string(rng() % 1000);
      } while (used.count(fresh));
      used.insert(fresh);
      env[t.name()] = fresh;
      return Term::lambda(fresh, rename_in(t.body(), env, used, rng));
    }
    case TermKind::Ref:
      return Term::ref(rename_in(t.restriction(), env, used, rng));
    case TermKind::App:
      return Term::apply(rename_in(t.function(), env, used, rng),
                         rename_in(t.argument(), env, used, rng));
    case TermKind::Compound: {
      std::vector<Term> args;
      for (const auto& c : t.children()) args.push_back(rename_in(c, env, used, rng));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

}  // namespace

Term rename_bound(const Term& t, std::mt19937& rng) {
  std::set<std::string> used;
  all_var_names(t, used);
  return rename_in(t, {}, used, rng);
}

Term random_order_normal_form(const Term& t, std::mt19937& rng, std::size_t max_steps) {
  Term cur = t;
  for (std::size_t step = 0; step < max_steps; ++step) {
    auto redexes = redex_positions(cur);
    if (redexes.empty()) return cur;
    cur = contract_at(cur, redexes[rng() % redexes.size()]);
  }
  throw std::runtime_error("random_order_normal_form: step limit");
}

// ---------------------------------------------------------------- generation

namespace {

std::size_t pick(std::mt19937& rng, std::size_t n) { return rng() % n; }

}  // namespace

Term random_first_order(std::mt19937& rng, int depth) {
  static const char* vars[] = {"X", "Y", "Z", "W"};
  static const char* consts[] = {"a", "b", "c"};
  if (depth <= 0 || pick(rng, 3) == 0) {
    switch (pick(rng, 5)) {
      case 0:
      case 1:
        return Term::var(vars[pick(rng, 4)]);
      case 2:
      case 3:
        return Term::constant(consts[pick(rng, 3)]);
      default:
        return Term::entity(std::to_string(1 + pick(rng, 2)));
    }
  }
  static const std::pair<const char*, std::size_t> functors[] = {{"f", 1}, {"g", 2}, {"h", 3}};
  auto [name, arity] = functors[pick(rng, 3)];
  std::vector<Term> args;
  for (std::size_t i = 0; i < arity; ++i) args.push_back(random_first_order(rng, depth - 1));
  return Term::compound(name, std::move(args));
}

Term random_lambda(std::mt19937& rng, int depth, std::vector<std::string>& scope) {
  static const char* names[] = {"X", "Y", "Z"};
  if (depth <= 0) {
    if (pick(rng, 4) != 0) return Term::var(names[pick(rng, 3)]);
    return Term::constant(pick(rng, 2) ? "a" : "b");
  }
  switch (pick(rng, 5)) {
    case 0:
      return Term::compound("p", {random_lambda(rng, depth - 1, scope)});
    case 1:
      return Term::compound("q", {random_lambda(rng, depth - 1, scope),
                                  random_lambda(rng, depth - 1, scope)});
    case 2: {
      std::string v = names[pick(rng, 3)];
      scope.push_back(v);
      Term body = random_lambda(rng, depth - 1, scope);
      scope.pop_back();
      return Term::lambda(v, body);
    }
    default: {
      std::string v = names[pick(rng, 3)];
      scope.push_back(v);
      Term body = random_lambda(rng, depth - 1, scope);
      scope.pop_back();
      return Term::apply(Term::lambda(v, body), random_lambda(rng, depth - 1, scope));
    }
  }
}

std::vector<Literal> random_facts(std::mt19937& rng, const KnowledgeBase& kb, std::size_t max_facts) {
  enum Kind { E, T, D, S };
  struct Shape {
    std::string pred;
    std::vector<Kind> args;
  };
  std::vector<Shape> shapes;
  for (const auto& r : kb.rules()) {
    if (r.name.rfind("word_", 0) == 0) shapes.push_back({r.name.substr(5), {E}});
  }
  for (const auto& [p, lang] : kb.prepositions()) shapes.push_back({p, {E, E}});
  const std::vector<Shape> structural = {
      {"type", {E, T}},       {"dim", {E, D}},         {"embedding", {E, E, S}},
      {"orientable", {E}},    {"interior", {E, E}},    {"surface", {E, E}},
      {"view", {E, E}},       {"bottom", {E, E}},      {"top", {E, E}},
      {"touching", {E, E}},   {"subset", {E, E}},      {"lower_bound", {E, E}},
      {"upper_bound", {E, E}}};
  for (const auto& s : structural) {
    auto arity = kb.arity(s.pred);
    if (arity && *arity == s.args.size()) shapes.push_back(s);
  }
  std::vector<std::string> types = kb.lattice().partitions();
  for (const auto& [child, parent] : kb.lattice().subtypes()) types.push_back(child);

  std::vector<Literal> out;
  std::size_t n = 1 + pick(rng, max_facts);
  for (std::size_t i = 0; i < n; ++i) {
    const Shape& s = shapes[pick(rng, shapes.size())];
    std::vector<Term> args;
    for (Kind k : s.args) {
      switch (k) {
        case E:
          args.push_back(Term::entity(std::to_string(1 + pick(rng, 4))));
          break;
        case T:
          args.push_back(Term::constant(types[pick(rng, types.size())]));
          break;
        case D:
          args.push_back(Term::constant(pick(rng, 2) ? "2" : "3"));
          break;
        case S:
          args.push_back(Term::constant(pick(rng, 2) ? "r2" : "r3"));
          break;
      }
    }
    Literal l(s.pred, std::move(args));
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  }
  return out;
}

// ---------------------------------------------------------------- saturation

namespace {

bool is_skolem(const Term& t) { return t.is_compound() && t.name().rfind("sk_", 0) == 0; }

bool match_term(const Term& pattern, const Term& fact, std::map<std::string, Term>& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.name());
    if (it != s.end()) return it->second == fact;
    s.emplace(pattern.name(), fact);
    return true;
  }
  if (pattern.is_compound()) {
    if (!fact.is_compound() || pattern.name() != fact.name() || pattern.arity() != fact.arity()) {
      return false;
    }
    for (std::size_t i = 0; i < pattern.arity(); ++i) {
      if (!match_term(pattern.children()[i], fact.children()[i], s)) return false;
    }
    return true;
  }
  return pattern == fact;
}

Term substitute_all(const Term& t, const std::map<std::string, Term>& s) {
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& c : t.children()) args.push_back(substitute_all(c, s));
  return Term::compound(t.name(), std::move(args));
}

class Naive {
 public:
  Naive(const KnowledgeBase& kb, Language lang, std::size_t cap) : kb_(kb), lang_(lang), cap_(cap) {}

  NaiveResult run(const std::vector<Literal>& input) {
    for (const auto& f : input) add(f);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& hc : kb_.horn()) {
        if (!applies_to(hc.language, lang_)) continue;
        std::vector<std::map<std::string, Term>> matches;
        join(hc.body, 0, {}, matches);
        for (const auto& s : matches) {
          if (auto head = instantiate(hc, s)) changed |= add(*head);
        }
      }
    }
    NaiveResult r;
    for (const auto& f : facts_) r.facts.insert(to_string(f));
    r.inconsistent = inconsistent();
    return r;
  }

 private:
  bool add(const Literal& f) {
    if (!seen_.insert(to_string(f)).second) return false;
    facts_.push_back(f);
    return true;
  }

  void join(const std::vector<Literal>& body, std::size_t i, std::map<std::string, Term> s,
            std::vector<std::map<std::string, Term>>& out) const {
    if (i == body.size()) {
      out.push_back(std::move(s));
      return;
    }
    const Literal& goal = body[i];
    if (goal.predicate == "compat") {
      Term a = substitute_all(goal.args[0], s);
      Term b = substitute_all(goal.args[1], s);
      const auto& lat = kb_.lattice();
      if (a.is_const() && b.is_const() && lat.contains(a.name()) && lat.contains(b.name()) &&
          lat.root(a.name()) == lat.root(b.name())) {
        join(body, i + 1, std::move(s), out);
      }
      return;
    }
    for (const auto& f : facts_) {
      if (f.predicate != goal.predicate || f.arity() != goal.arity()) continue;
      auto next = s;
      bool ok = true;
      for (std::size_t k = 0; k < f.arity() && ok; ++k) ok = match_term(goal.args[k], f.args[k], next);
      if (ok) join(body, i + 1, std::move(next), out);
    }
  }

  std::size_t depth(const Term& t) const {
    if (is_skolem(t)) return depth_.at(to_string(t));
    std::size_t d = 0;
    if (t.is_compound()) {
      for (const auto& c : t.children()) d = std::max(d, depth(c));
    } else if (t.is_lambda()) {
      d = depth(t.body());
    }
    return d;
  }

  std::optional<Literal> instantiate(const HornClause& hc, const std::map<std::string, Term>& s) {
    const GuardedRule* rule = kb_.find_rule(hc.source_rule);
    const auto& ex = rule->consequent.existential_vars;
    std::vector<Term> universals;
    for (const auto& u : hc.universal_vars) universals.push_back(s.at(u));

    // Depth of each existential, in declaration order; nullopt = over the cap.
    std::map<std::string, std::optional<std::size_t>> d;
    for (std::size_t k = 0; k < ex.size(); ++k) {
      const std::string& v = ex[k];
      std::size_t best = 0;
      bool dropped = false;
      for (const auto& lit : rule->consequent.literals) {
        bool here = false;
        for (const auto& a : lit.args) here |= a.is_var() && a.name() == v;
        if (!here) continue;
        for (const auto& a : lit.args) {
          if (a.is_var()) {
            auto pos = std::find(ex.begin(), ex.end(), a.name());
            if (pos != ex.end()) {
              std::size_t idx = static_cast<std::size_t>(pos - ex.begin());
              if (idx >= k) continue;
              if (!d[a.name()]) {
                dropped = true;
              } else {
                best = std::max(best, *d[a.name()]);
              }
              continue;
            }
          }
          best = std::max(best, depth(substitute_all(a, s)));
        }
      }
      if (dropped || best + 1 > cap_) {
        d[v] = std::nullopt;
      } else {
        d[v] = best + 1;
      }
    }

    std::map<std::string, Term> full = s;
    for (const auto& v : hc.existential_vars) {
      if (!d[v]) return std::nullopt;
      Term sk = Term::compound("sk_" + hc.source_rule + "_" + v, universals);
      depth_.emplace(to_string(sk), *d[v]);
      full[v] = sk;
    }
    Literal head = hc.head;
    for (auto& a : head.args) a = substitute_all(a, full);
    return head;
  }

  bool inconsistent() const {
    std::map<std::string, std::string> root;
    for (const auto& f : facts_) {
      if (f.predicate != "type" || f.arity() != 2 || !f.args[1].is_const()) continue;
      if (f.args[0].is_const() || f.args[0].is_var()) continue;
      if (!kb_.lattice().contains(f.args[1].name())) continue;
      const std::string& r = kb_.lattice().root(f.args[1].name());
      auto [it, fresh] = root.emplace(to_string(f.args[0]), r);
      if (!fresh && it->second != r) return true;
    }
    return false;
  }

  const KnowledgeBase& kb_;
  Language lang_;
  std::size_t cap_;
  std::vector<Literal> facts_;
  std::set<std::string> seen_;
  std::map<std::string, std::size_t> depth_;
};

}  // namespace

NaiveResult naive_model(const std::vector<Literal>& facts, const KnowledgeBase& kb,
                        Language language, std::size_t cap) {
  return Naive(kb, language, cap).run(facts);
}

std::set<std::string> skolem_view(const Model& m) {
  std::function<Term(const Term&)> conv = [&](const Term& t) -> Term {
    if (t.is_entity()) {
      auto it = m.witness_origin().find(t.name());
      if (it == m.witness_origin().end()) return t;
      std::vector<Term> args;
      for (const auto& c : it->second.children()) args.push_back(conv(c));
      return Term::compound(it->second.name(), std::move(args));
    }
    if (t.is_compound()) {
      std::vector<Term> args;
      for (const auto& c : t.children()) args.push_back(conv(c));
      return Term::compound(t.name(), std::move(args));
    }
    if (t.is_lambda()) return Term::lambda(t.name(), conv(t.body()));
    return t;
  };
  std::set<std::string> out;
  for (const auto& f : m.facts()) {
    Literal l = f;
    for (auto& a : l.args) a = conv(a);
    out.insert(to_string(l));
  }
  return out;
}

// ---------------------------------------------------------------- isomorphism

namespace {

bool embed_from(const std::vector<Literal>& a, const std::vector<Literal>& b,
                std::vector<bool>& done, std::vector<bool>& used, const EntityBijection& bij) {
  // Most constrained fact first.
  std::size_t best = a.size();
  std::vector<std::size_t> best_cands;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> cands;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || a[i].predicate != b[j].predicate || a[i].arity() != b[j].arity()) continue;
      EntityBijection trial = bij;
      if (alpha_equal(a[i].to_term(), b[j].to_term(), trial)) cands.push_back(j);
    }
    if (cands.empty()) return false;
    if (best == a.size() || cands.size() < best_cands.size()) {
      best = i;
      best_cands = std::move(cands);
    }
  }
  if (best == a.size()) return true;
  done[best] = true;
  for (std::size_t j : best_cands) {
    EntityBijection next = bij;
    if (!alpha_equal(a[best].to_term(), b[j].to_term(), next)) continue;
    used[j] = true;
    if (embed_from(a, b, done, used, next)) return true;
    used[j] = false;
  }
  done[best] = false;
  return false;
}

}  // namespace

bool embeds(const std::vector<Literal>& small, const std::vector<Literal>& large) {
  if (small.size() > large.size()) return false;
  EntityBijection bij;
  bij.link(kUserEntity, kUserEntity);
  std::vector<bool> done(small.size(), false);
  std::vector<bool> used(large.size(), false);
  return embed_from(small, large, done, used, bij);
}

bool isomorphic(const std::vector<Literal>& a, const std::vector<Literal>& b) {
  return a.size() == b.size() && embeds(a, b);
}

// ---------------------------------------------------------------- abduction

namespace {

bool derivable(const Literal& target, const std::vector<Literal>& extra, const Model& model,
               const KnowledgeBase& kb, EntityCounter& entities) {
  std::vector<Literal> facts = model.facts();
  facts.insert(facts.end(), extra.begin(), extra.end());
  SaturationOptions options;
  options.language = model.language;
  try {
    Model m = saturate(facts, kb, entities, options);
    for (std::size_t i : m.indices(target.predicate)) {
      if (robinson(target.to_term(), m.facts()[i].to_term())) return true;
    }
  } catch (const InconsistentModelError&) {
    return false;
  } catch (const SaturationOverflowError&) {
    return false;
  }
  return false;
}

std::vector<Literal> candidates(const Literal& target, const Model& model, const KnowledgeBase& kb) {
  std::set<std::string> ids;
  for (const auto& id : model.entities()) {
    if (!model.witness_origin().count(id)) ids.insert(id);
  }
  for (const auto& a : target.args) collect_entities(a, ids);
  ids.insert("o1");
  ids.insert("o2");
  std::vector<Term> es;
  for (const auto& id : ids) es.push_back(Term::entity(id));

  std::vector<Term> types;
  for (const auto& p : kb.lattice().partitions()) types.push_back(Term::constant(p));
  for (const auto& [child, parent] : kb.lattice().subtypes()) types.push_back(Term::constant(child));
  const std::vector<Term> dims = {Term::constant("1"), Term::constant("2"), Term::constant("3")};
  const std::vector<Term> spaces = {Term::constant("r2"), Term::constant("r3")};

  std::vector<Literal> out;
  for (const char* p : {"view", "interior", "surface", "bottom", "top", "touching", "subset"}) {
    for (const auto& x : es) {
      for (const auto& y : es) out.emplace_back(p, std::vector<Term>{x, y});
    }
  }
  for (const auto& x : es) {
    out.emplace_back("orientable", std::vector<Term>{x});
    for (const auto& t : types) out.emplace_back("type", std::vector<Term>{x, t});
    for (const auto& d : dims) out.emplace_back("dim", std::vector<Term>{x, d});
    for (const auto& y : es) {
      for (const auto& s : spaces) out.emplace_back("embedding", std::vector<Term>{x, y, s});
    }
  }
  return out;
}

// Calls f on every k-subset of [0, n) until it returns false.
bool for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return true;
  while (true) {
    if (!f(idx)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

MinimalityReport check_minimality(const Literal& target, const AbductionResult& result,
                                  const Model& model, const KnowledgeBase& kb,
                                  EntityCounter& entities) {
  MinimalityReport rep;
  // Ground the missing set: each variable becomes a fresh entity.
  std::map<std::string, Term> ground;
  std::vector<Literal> grounded;
  for (const auto& l : result.missing) {
    Literal g = l;
    for (auto& a : g.args) {
      std::set<std::string> vs = free_vars(a);
      for (const auto& v : vs) {
        if (!ground.count(v)) ground.emplace(v, Term::entity("g" + std::to_string(ground.size() + 1)));
      }
      a = substitute_all(a, ground);
    }
    grounded.push_back(g);
  }
  rep.sufficient = derivable(target, grounded, model, kb, entities);
  if (!rep.sufficient) rep.detail = "missing set does not make the target derivable";

  rep.subset_minimal = true;
  const std::size_t n = grounded.size();
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<Literal> sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(grounded[i]);
    }
    if (derivable(target, sub, model, kb, entities)) {
      rep.subset_minimal = false;
      rep.detail = "a proper subset already suffices";
      break;
    }
  }

  // Assuming the target itself is not an explanation.
  auto cands = candidates(target, model, kb);
  cands.erase(std::remove_if(cands.begin(), cands.end(),
                             [&](const Literal& c) {
                               return c.predicate == target.predicate &&
                                      robinson(c.to_term(), target.to_term()).has_value();
                             }),
              cands.end());
  rep.candidates = cands.size();
  rep.no_cheaper = true;
  for (std::size_t k = 0; k < result.cost && rep.no_cheaper; ++k) {
    for_each_subset(cands.size(), k, [&](const std::vector<std::size_t>& idx) {
      std::vector<Literal> sub;
      for (std::size_t i : idx) sub.push_back(cands[i]);
      if (derivable(target, sub, model, kb, entities)) {
        rep.no_cheaper = false;
        rep.detail = "a cheaper set exists";
        for (const auto& l : sub) rep.detail += " " + to_string(l);
        return false;
      }
      return true;
    });
  }
  return rep;
}

}  // namespace prepdiag::oracle
