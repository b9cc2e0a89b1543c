#include "prepdiag/abduction.hpp"

#include <algorithm>
#include <map>

#include "prepdiag/errors.hpp"

namespace prepdiag {

const std::set<std::string>& abducible_predicates() {
  static const std::set<std::string> preds = {
      "view",   "type",      "dim",        "interior", "surface",  "bottom",
      "top",    "embedding", "orientable", "compat",   "touching", "subset"};
  return preds;
}

namespace {

constexpr std::size_t kNoClause = static_cast<std::size_t>(-1);

struct Goal {
  Literal literal;
  bool root = false;
};

struct Clause {
  std::size_t index;
  const HornClause* horn;
  Literal head;  // skolemized
  std::vector<Literal> body;
  std::set<std::string> vars;
};

Term rename_vars(const Term& t, const std::map<std::string, std::string>& names) {
  Substitution s;
  for (const auto& [from, to] : names) s.bind(from, Term::var(to));
  return s.apply(t);
}

Literal rename_vars(const Literal& l, const std::map<std::string, std::string>& names) {
  Literal out = l;
  for (auto& a : out.args) a = rename_vars(a, names);
  return out;
}

std::string var_name(std::size_t k) {
  std::string name(1, static_cast<char>('A' + k % 26));
  if (k >= 26) name += std::to_string(k / 26);
  return name;
}

void first_appearance(const Term& t, std::vector<std::string>& order) {
  if (t.is_var()) {
    if (std::find(order.begin(), order.end(), t.name()) == order.end()) order.push_back(t.name());
    return;
  }
  for (const auto& c : t.children()) first_appearance(c, order);
}

// Free variables renamed B, C, ... by first appearance across the list.
std::vector<Literal> canonical_missing(std::vector<Literal> lits,
                                       std::map<std::string, std::string>& renaming) {
  // Sort on a renaming-insensitive key first so equal sets line up.
  std::stable_sort(lits.begin(), lits.end(), [](const Literal& a, const Literal& b) {
    return to_string(canonical_free_names(a.to_term())) <
           to_string(canonical_free_names(b.to_term()));
  });
  std::vector<std::string> order;
  for (const auto& l : lits) {
    for (const auto& a : l.args) first_appearance(a, order);
  }
  // Through temporaries so that existing names cannot collide.
  std::map<std::string, std::string> to_tmp, from_tmp;
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::string tmp = "_C" + std::to_string(i);
    to_tmp[order[i]] = tmp;
    from_tmp[tmp] = var_name(i + 1);
    renaming[order[i]] = var_name(i + 1);
  }
  std::vector<Literal> out;
  for (const auto& l : lits) out.push_back(rename_vars(rename_vars(l, to_tmp), from_tmp));
  return out;
}

std::string missing_key(const std::vector<Literal>& missing) {
  std::string key;
  for (const auto& l : missing) key += to_string(l) + ";";
  return key;
}

class Prover {
 public:
  Prover(const Model& model, const KnowledgeBase& kb, const AbductionOptions& options,
         AbductionTrace* trace)
      : model_(model), kb_(kb), options_(options), trace_(trace) {
    const auto& horn = kb.horn();
    for (std::size_t i = 0; i < horn.size(); ++i) {
      if (!applies_to(horn[i].language, model.language)) continue;
      Clause c{i, &horn[i], horn[i].skolemized_head(), horn[i].body, {}};
      for (const auto& a : c.head.args) {
        for (const auto& v : free_vars(a)) c.vars.insert(v);
      }
      for (const auto& l : c.body) {
        for (const auto& a : l.args) {
          for (const auto& v : free_vars(a)) c.vars.insert(v);
        }
      }
      clauses_.push_back(std::move(c));
    }
  }

  std::vector<AbductionResult> run(const Literal& target) {
    target_ = target;
    for (std::size_t k = 0; k <= options_.max_missing; ++k) {
      budget_ = k;
      results_.clear();
      seen_.clear();
      std::vector<Goal> goals{{target, true}};
      solve(goals, Substitution{}, {}, {}, 0, kNoClause);
      if (!results_.empty()) return results_;
    }
    return {};
  }

 private:
  bool matches_fact(const Literal& g, const Substitution& s) const {
    for (std::size_t idx : model_.indices(g.predicate)) {
      if (unify(g, model_.facts()[idx], s)) return true;
    }
    return false;
  }

  void record(const Substitution& s, const std::vector<Literal>& assumed,
              const std::vector<std::pair<std::string, Literal>>& steps, std::size_t root_clause) {
    std::vector<Literal> missing;
    for (const auto& a : assumed) missing.push_back(apply(s, a));
    std::map<std::string, std::string> renaming;
    missing = canonical_missing(std::move(missing), renaming);
    std::string key = missing_key(missing);
    if (!seen_.insert(key).second) return;

    AbductionResult r;
    r.target = target_;
    r.missing = std::move(missing);
    r.cost = r.missing.size();
    r.root_clause = root_clause;
    // Leftover clause variables continue the B, C, ... naming.
    auto canon = [&](const Term& t) {
      std::vector<std::string> order;
      first_appearance(t, order);
      std::map<std::string, std::string> to_tmp, names;
      for (const auto& x : order) {
        auto it = renaming.find(x);
        if (it == renaming.end()) it = renaming.emplace(x, var_name(renaming.size() + 1)).first;
        to_tmp[x] = "_T" + x;
        names["_T" + x] = it->second;
      }
      return rename_vars(rename_vars(t, to_tmp), names);
    };
    for (const auto& a : target_.args) {
      for (const auto& v : free_vars(a)) {
        Term value = s.apply(Term::var(v));
        if (value != Term::var(v)) r.bindings[v] = canon(value);
      }
    }
    for (const auto& [clause, head] : steps) {
      Literal h = apply(s, head);
      for (auto& x : h.args) x = canon(x);
      r.proof_trace.push_back({clause, std::move(h)});
    }
    results_.push_back(std::move(r));
  }

  void blocker(const Literal& g) {
    if (!trace_) return;
    if (std::find(trace_->blockers.begin(), trace_->blockers.end(), g) == trace_->blockers.end()) {
      trace_->blockers.push_back(g);
    }
  }

  void solve(const std::vector<Goal>& goals, const Substitution& s,
             const std::vector<Literal>& assumed,
             const std::vector<std::pair<std::string, Literal>>& steps, std::size_t depth,
             std::size_t root_clause) {
    if (goals.empty()) {
      record(s, assumed, steps, root_clause);
      return;
    }
    const Goal& first = goals.front();
    std::vector<Goal> rest(goals.begin() + 1, goals.end());
    Literal g = apply(s, first.literal);

    if (g.predicate == "compat" && g.arity() == 2) {
      if (g.ground()) {
        if (kb_.compat(g.args[0], g.args[1])) {
          solve(rest, s, assumed, steps, depth, root_clause);
        } else {
          blocker(g);
        }
        return;
      }
    } else {
      // Close against model facts.
      for (std::size_t idx : model_.indices(g.predicate)) {
        if (auto next = unify(g, model_.facts()[idx], s)) {
          solve(rest, *next, assumed, steps, depth, root_clause);
        }
      }
    }

    // Close against something already assumed, at no extra cost.
    for (const auto& a : assumed) {
      if (auto next = unify(g, a, s)) solve(rest, *next, assumed, steps, depth, root_clause);
    }

    // Resolve with a clause.
    if (depth < options_.max_depth) {
      for (const Clause& c : clauses_) {
        if (c.head.predicate != g.predicate || c.head.arity() != g.arity()) continue;
        std::map<std::string, std::string> names;
        std::string suffix = std::to_string(++rename_counter_);
        for (const auto& v : c.vars) names[v] = "_R" + suffix + "_" + v;
        Literal head = rename_vars(c.head, names);
        auto next = unify(g, head, s);
        if (!next) continue;
        std::vector<Literal> body;
        for (const auto& b : c.body) body.push_back(rename_vars(b, names));
        // A preposition rule is only tried where the preposition was used.
        if (g.predicate == "located" && (body.empty() || !matches_fact(apply(*next, body[0]), *next))) {
          continue;
        }
        std::vector<Goal> goals2;
        for (auto& b : body) goals2.push_back({std::move(b), false});
        goals2.insert(goals2.end(), rest.begin(), rest.end());
        auto steps2 = steps;
        steps2.emplace_back(c.horn->source_rule, head);
        solve(goals2, *next, assumed, steps2, depth + 1, first.root ? c.index : root_clause);
      }
    }

    // Assume it.
    if (!first.root && assumed.size() < budget_ && abducible_predicates().count(g.predicate) &&
        !matches_fact(g, s) &&
        std::none_of(assumed.begin(), assumed.end(),
                     [&](const Literal& a) { return apply(s, a) == g; })) {
      auto assumed2 = assumed;
      assumed2.push_back(g);
      solve(rest, s, assumed2, steps, depth, root_clause);
    }
  }

  const Model& model_;
  const KnowledgeBase& kb_;
  AbductionOptions options_;
  AbductionTrace* trace_;
  std::vector<Clause> clauses_;
  Literal target_;
  std::size_t budget_ = 0;
  std::size_t rename_counter_ = 0;
  std::vector<AbductionResult> results_;
  std::set<std::string> seen_;
};

}  // namespace

std::vector<AbductionResult> abduce(const Literal& target, const Model& model,
                                    const KnowledgeBase& kb, const AbductionOptions& options,
                                    AbductionTrace* trace) {
  if (!kb.known_predicate(target.predicate) && model.indices(target.predicate).empty()) {
    throw UnknownPredicateError(target.predicate);
  }
  Prover prover(model, kb, options, trace);
  return prover.run(target);
}

}  // namespace prepdiag
