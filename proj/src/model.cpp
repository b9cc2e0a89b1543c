#include "prepdiag/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

#include "prepdiag/errors.hpp"

namespace prepdiag {

bool Model::contains(const Literal& fact) const { return index_.count(fact) != 0; }

const std::vector<std::size_t>& Model::indices(const std::string& predicate) const {
  static const std::vector<std::size_t> none;
  auto it = by_predicate_.find(predicate);
  return it == by_predicate_.end() ? none : it->second;
}

std::size_t Model::depth_of(const std::string& entity) const {
  auto it = depth_.find(entity);
  return it == depth_.end() ? 0 : it->second;
}

std::set<std::string> Model::entities() const {
  std::set<std::string> out;
  for (const auto& f : facts_) {
    for (const auto& a : f.args) collect_entities(a, out);
  }
  return out;
}

std::vector<std::string> Model::sorted_lines() const {
  std::vector<std::string> lines;
  lines.reserve(facts_.size());
  for (const auto& f : facts_) lines.push_back(to_string(f));
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::string Model::serialize() const {
  std::string out;
  for (const auto& line : sorted_lines()) out += line + "\n";
  return out;
}

bool Model::add(Literal fact, Provenance why) {
  if (index_.count(fact)) return false;
  index_.insert(fact);
  by_predicate_[fact.predicate].push_back(facts_.size());
  facts_.push_back(std::move(fact));
  provenance_.push_back(std::move(why));
  return true;
}

namespace {

std::size_t term_depth(const Term& t, const Model& m) {
  std::set<std::string> ids;
  collect_entities(t, ids);
  std::size_t d = 0;
  for (const auto& id : ids) d = std::max(d, m.depth_of(id));
  return d;
}

std::string binding_key(std::size_t rule_index, const std::vector<Term>& values) {
  std::string key = std::to_string(rule_index);
  for (const auto& v : values) key += "\x1f" + to_string(v);
  return key;
}

}  // namespace

class Saturator {
 public:
  Saturator(const KnowledgeBase& kb, EntityCounter& entities, const SaturationOptions& options)
      : kb_(kb), entities_(entities), options_(options) {
    for (std::size_t i = 0; i < kb.rules().size(); ++i) {
      const GuardedRule& r = kb.rules()[i];
      if (!applies_to(r.language, options.language)) continue;
      active_.push_back(Active{i, &r, r.path_guard(), r.universal_vars(),
                               witness_dependencies(r.consequent)});
    }
    model_.language = options.language;
  }

  Model run(const std::vector<Literal>& facts) {
    for (const auto& f : facts) {
      if (!f.positive || !f.ground()) {
        throw Error("saturate: input facts must be ground positive literals: " + to_string(f));
      }
      add(f, Provenance{"anchored", {}});
    }
    for (const auto& f : facts) {
      if (f.arity() == 1 && f.args[0].is_entity() &&
          kb_.find_rule("word_" + f.predicate) != nullptr) {
        model_.lexical_.emplace(f.args[0].name(), f.predicate);
      }
    }
    preseed();

    bool changed = true;
    while (changed) {
      changed = false;
      for (const Active& rule : active_) {
        std::vector<Substitution> matches;
        match(rule.guard, 0, Substitution{}, matches);
        for (const auto& s : matches) {
          std::vector<Term> values;
          values.reserve(rule.universals.size());
          for (const auto& v : rule.universals) values.push_back(s.apply(Term::var(v)));
          std::string key = binding_key(rule.index, values);
          if (!fired_.insert(key).second) continue;
          changed = true;
          fire(rule, s, values, key);
        }
      }
    }
    return std::move(model_);
  }

 private:
  struct Active {
    std::size_t index;
    const GuardedRule* rule;
    std::vector<Literal> guard;
    std::vector<std::string> universals;
    std::vector<std::vector<Term>> dependencies;
  };

  void add(const Literal& fact, Provenance why) {
    if (!model_.add(fact, std::move(why))) return;
    if (model_.size() > options_.fact_budget) {
      throw SaturationOverflowError("saturation exceeded the fact budget of " +
                                    std::to_string(options_.fact_budget));
    }
    if (fact.predicate == "type" && fact.arity() == 2 && fact.args[0].is_entity() &&
        fact.args[1].is_const() && kb_.lattice().contains(fact.args[1].name())) {
      const std::string& root = kb_.lattice().root(fact.args[1].name());
      auto [it, inserted] = partition_of_.emplace(fact.args[0].name(), root);
      if (!inserted && it->second != root) {
        throw InconsistentModelError("#" + fact.args[0].name() + " has types from partitions " +
                                     it->second + " and " + root);
      }
    }
  }

  // Witnesses already present in the input keep serving their bindings.
  void preseed() {
    for (const auto& id : model_.entities()) {
      auto origin = entities_.witness(id);
      if (!origin) continue;
      const GuardedRule* rule = kb_.find_rule(origin->rule);
      if (!rule) continue;
      std::size_t index = static_cast<std::size_t>(rule - kb_.rules().data());
      memo_[binding_key(index, origin->universals)][origin->var] = Term::entity(id);
      model_.depth_[id] = origin->depth;
      model_.origin_[id] =
          Term::compound(skolem_functor(origin->rule, origin->var), origin->universals);
    }
  }

  void match(const std::vector<Literal>& guard, std::size_t i, const Substitution& s,
             std::vector<Substitution>& out) {
    if (i == guard.size()) {
      out.push_back(s);
      return;
    }
    Literal goal = apply(s, guard[i]);
    if (goal.predicate == "compat") {
      if (goal.ground() && goal.arity() == 2 && kb_.compat(goal.args[0], goal.args[1])) {
        match(guard, i + 1, s, out);
      }
      return;
    }
    // Copy: the index is stable during matching, but be explicit about it.
    const std::vector<std::size_t> candidates = model_.indices(goal.predicate);
    for (std::size_t idx : candidates) {
      const Literal& fact = model_.facts()[idx];
      if (fact.arity() != goal.arity()) continue;
      if (auto next = unify(goal, fact, s)) match(guard, i + 1, *next, out);
    }
  }

  void fire(const Active& rule, const Substitution& s, const std::vector<Term>& values,
            const std::string& key) {
    const Consequent& c = rule.rule->consequent;
    const std::size_t n = c.existential_vars.size();
    std::vector<std::optional<std::size_t>> depth(n);
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t d = 0;
      bool dropped = false;
      for (const Term& dep : rule.dependencies[k]) {
        if (dep.is_var()) {
          auto pos = std::find(c.existential_vars.begin(), c.existential_vars.end(), dep.name());
          if (pos != c.existential_vars.end()) {
            auto& dd = depth[static_cast<std::size_t>(pos - c.existential_vars.begin())];
            if (!dd) {
              dropped = true;
              break;
            }
            d = std::max(d, *dd);
            continue;
          }
        }
        d = std::max(d, term_depth(s.apply(dep), model_));
      }
      if (!dropped && d + 1 <= options_.skolem_cap) depth[k] = d + 1;
    }

    Provenance why{rule.rule->name, {}};
    for (std::size_t u = 0; u < rule.universals.size(); ++u) {
      why.binding.emplace_back(rule.universals[u], values[u]);
    }

    auto& witnesses = memo_[key];
    for (const Literal& lit : c.literals) {
      Substitution full = s;
      bool skip = false;
      for (std::size_t k = 0; k < n && !skip; ++k) {
        const std::string& v = c.existential_vars[k];
        bool mentions = std::any_of(lit.args.begin(), lit.args.end(), [&](const Term& a) {
          return free_vars(a).count(v) != 0;
        });
        if (!mentions) continue;
        if (!depth[k]) {
          skip = true;
          break;
        }
        auto it = witnesses.find(v);
        if (it == witnesses.end()) {
          Term w = entities_.fresh();
          entities_.record_witness(w.name(), WitnessOrigin{rule.rule->name, v, values, *depth[k]});
          model_.depth_[w.name()] = *depth[k];
          model_.origin_[w.name()] = Term::compound(skolem_functor(rule.rule->name, v), values);
          it = witnesses.emplace(v, w).first;
        }
        full.bind(v, it->second);
      }
      if (skip) continue;
      add(apply(full, lit), why);
    }
  }

  const KnowledgeBase& kb_;
  EntityCounter& entities_;
  SaturationOptions options_;
  std::vector<Active> active_;
  Model model_;
  std::set<std::string> fired_;
  std::map<std::string, std::map<std::string, Term>> memo_;
  std::map<std::string, std::string> partition_of_;
};

Model saturate(const std::vector<Literal>& facts, const KnowledgeBase& kb,
               EntityCounter& entities, const SaturationOptions& options) {
  if (options.skolem_cap < 1) throw Error("saturate: the Skolem depth cap must be at least 1");
  Saturator saturator(kb, entities, options);
  return saturator.run(facts);
}

Model saturate(const std::vector<Literal>& facts, const KnowledgeBase& kb,
               const SaturationOptions& options) {
  std::uint64_t next = 1;
  for (const auto& f : facts) {
    std::set<std::string> ids;
    for (const auto& a : f.args) collect_entities(a, ids);
    for (const auto& id : ids) {
      if (!id.empty() && std::all_of(id.begin(), id.end(), ::isdigit)) {
        next = std::max<std::uint64_t>(next, std::stoull(id) + 1);
      }
    }
  }
  EntityCounter entities(next);
  return saturate(facts, kb, entities, options);
}

}  // namespace prepdiag
