#include "prepdiag/grammar.hpp"

#include <set>
#include <sstream>

#include "prepdiag/errors.hpp"

namespace prepdiag {

namespace {

const std::vector<Schema>& shared_schemas() {
  static const std::vector<Schema> schemas = {
      {"nbar_noun", "nbar", {"noun"}, 0, "", "", false},
      {"ordp_bare", "ordp", {"ord"}, 0, "", "", false},
      {"ordp_article", "ordp", {"art", "ord"}, 0, "", "ordinal_takes_article", false},
      {"nbar_ordinal", "nbar", {"ordp", "nbar"}, 0, "modifier_precedes_noun", "", false},
      {"np_det", "np", {"det", "nbar"}, 0, "", "", false},
      {"np_possessive", "np", {"$possessive", "nbar"}, 0, "possessive_precedes_noun", "", false},
      {"np_name", "np", {"name"}, 0, "", "", false},
      {"pp", "pp", {"prep", "np"}, 0, "", "", false},
      {"pred_copula", "pred", {"cop", "pp"}, 0, "", "copula_required", false},
      {"pred_bare", "pred", {"pp"}, 0, "", "!copula_required", false},
      {"utterance", "s", {"np", "pred"}, 1, "", "", true},
  };
  return schemas;
}

bool flag(const ConstraintTable& c, const std::string& key) {
  if (key == "modifier_precedes_noun") return c.modifier_precedes_noun;
  if (key == "ordinal_takes_article") return c.ordinal_takes_article;
  if (key == "possessive_precedes_noun") return c.possessive_precedes_noun;
  if (key == "copula_required") return c.copula_required;
  throw Error("grammar: unknown constraint " + key);
}

bool enabled(const ConstraintTable& c, const std::string& key) {
  if (key.empty()) return true;
  if (key.front() == '!') return !flag(c, key.substr(1));
  return flag(c, key);
}

std::string resolve(const ConstraintTable& c, const std::string& category) {
  if (category == "$possessive") return c.possessive_category;
  return category;
}

// Definiteness agreement: daughters that carry `def` must agree.
bool merge_features(const std::vector<const Sign*>& daughters, Features& out) {
  for (const Sign* d : daughters) {
    auto it = d->features.find("def");
    if (it == d->features.end()) continue;
    auto [pos, inserted] = out.emplace("def", it->second);
    if (!inserted && pos->second != it->second) return false;
  }
  return true;
}

struct Chart {
  std::size_t n;
  // cell[start][end]
  std::vector<std::vector<std::vector<Sign>>> cells;
  std::vector<std::vector<std::set<std::string>>> keys;

  explicit Chart(std::size_t size)
      : n(size),
        cells(size + 1, std::vector<std::vector<Sign>>(size + 1)),
        keys(size + 1, std::vector<std::set<std::string>>(size + 1)) {}

  bool add(Sign sign) {
    std::string key = sign.category + "|";
    for (const auto& [k, v] : sign.features) key += k + "=" + v + ";";
    key += "|" + to_string(sign.semantics);
    if (!keys[sign.start][sign.end].insert(key).second) return false;
    cells[sign.start][sign.end].push_back(std::move(sign));
    return true;
  }
};

Sign combine(const Schema& schema, std::vector<const Sign*> logical) {
  Sign s;
  s.category = schema.lhs;
  s.rule = schema.name;
  Term sem;
  if (logical.size() == 1) {
    sem = logical[0]->semantics;
  } else {
    const Sign* fn = logical[schema.functor];
    const Sign* arg = logical[1 - schema.functor];
    sem = Term::apply(fn->semantics, arg->semantics);
  }
  if (schema.wrap_utterance) sem = Term::compound("utt", {Term::constant("claim"), sem});
  s.semantics = canonical_bound_names(beta_reduce(sem));
  return s;
}

}  // namespace

Grammar Grammar::for_language(Language language) {
  Grammar g;
  g.schemas = shared_schemas();
  if (language == Language::Ar) {
    g.constraints.modifier_precedes_noun = false;
    g.constraints.ordinal_takes_article = true;
    g.constraints.possessive_category = "clitic";
    g.constraints.possessive_precedes_noun = false;
    g.constraints.copula_required = false;
  } else if (language != Language::En) {
    throw Error("grammar: language must be en or ar");
  }
  return g;
}

std::vector<Sign> parse(const std::vector<std::string>& tokens, Language language,
                        const Lexicon& lexicon) {
  const Grammar grammar = Grammar::for_language(language);
  const ConstraintTable& table = grammar.constraints;
  const std::size_t n = tokens.size();
  Chart chart(n);

  std::vector<const Schema*> unary, binary;
  for (const auto& s : grammar.schemas) {
    if (!enabled(table, s.enabled_key)) continue;
    (s.daughters.size() == 1 ? unary : binary).push_back(&s);
  }

  auto close_unary = [&](std::size_t i, std::size_t j) {
    // Cells grow while we iterate, so index instead of holding iterators.
    for (std::size_t k = 0; k < chart.cells[i][j].size(); ++k) {
      for (const Schema* s : unary) {
        const Sign& d = chart.cells[i][j][k];
        if (d.category != resolve(table, s->daughters[0])) continue;
        Sign out = combine(*s, {&d});
        out.features = d.features;
        // Without the article an ordinal is indefinite where articles agree.
        if (s->name == "ordp_bare" && table.ordinal_takes_article) out.features["def"] = "-";
        out.start = i;
        out.end = j;
        out.children = {d};
        chart.add(std::move(out));
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    auto entries = lexicon.lookup(tokens[i], language);
    if (entries.empty()) throw UnknownWordError(tokens[i]);
    for (const LexEntry* e : entries) {
      Sign s;
      s.start = i;
      s.end = i + 1;
      s.category = e->category;
      s.features = e->features;
      s.semantics = e->semantics;
      s.rule = "lex";
      s.entry = e;
      chart.add(std::move(s));
    }
    close_unary(i, i + 1);
  }

  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      for (std::size_t m = i + 1; m < j; ++m) {
        for (const Schema* s : binary) {
          bool surface_as_listed = s->order_key.empty() || flag(table, s->order_key);
          std::string left_cat = resolve(table, s->daughters[surface_as_listed ? 0 : 1]);
          std::string right_cat = resolve(table, s->daughters[surface_as_listed ? 1 : 0]);
          const auto& lefts = chart.cells[i][m];
          const auto& rights = chart.cells[m][j];
          for (std::size_t a = 0; a < lefts.size(); ++a) {
            if (lefts[a].category != left_cat) continue;
            for (std::size_t b = 0; b < rights.size(); ++b) {
              if (rights[b].category != right_cat) continue;
              const Sign* l = &chart.cells[i][m][a];
              const Sign* r = &chart.cells[m][j][b];
              std::vector<const Sign*> logical =
                  surface_as_listed ? std::vector<const Sign*>{l, r}
                                    : std::vector<const Sign*>{r, l};
              Features features;
              if (!merge_features(logical, features)) continue;
              Sign out = combine(*s, logical);
              if (s->lhs == "nbar" || s->lhs == "ordp") out.features = features;
              out.start = i;
              out.end = j;
              out.children = {*l, *r};
              chart.add(std::move(out));
            }
          }
        }
      }
      close_unary(i, j);
    }
  }

  std::vector<Sign> complete;
  if (n == 0) return complete;
  for (const auto& s : chart.cells[0][n]) {
    if (s.category == "s") complete.push_back(s);
  }
  return complete;
}

std::string to_string(const Sign& sign) {
  std::ostringstream os;
  if (sign.rule == "lex" && sign.entry) {
    os << "[" << sign.category << " " << sign.entry->surface << "]";
    return os.str();
  }
  os << "[" << sign.category;
  for (const auto& c : sign.children) os << " " << to_string(c);
  os << "]";
  return os.str();
}

}  // namespace prepdiag
