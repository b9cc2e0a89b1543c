#include "prepdiag/diagnostics.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <sstream>

#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"
#include "prepdiag/pipeline.hpp"

namespace prepdiag {

// ---------------------------------------------------------------- templates

Templates Templates::load(std::string_view text) {
  Templates t;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    if (line.compare(first, 9, "template ") != 0) {
      throw ParseError("templates: expected 'template'", line_no, first + 1);
    }
    std::size_t colon = line.find(':', first);
    if (colon == std::string::npos) throw ParseError("templates: expected ':'", line_no, 1);
    std::string key = line.substr(first + 9, colon - first - 9);
    key.erase(0, key.find_first_not_of(' '));
    key.erase(key.find_last_not_of(' ') + 1);
    std::size_t open = line.find('"', colon);
    std::size_t close = line.rfind('"');
    if (key.empty()) throw ParseError("templates: empty key", line_no, first + 10);
    if (open == std::string::npos || close == open) {
      throw ParseError("templates: expected a quoted pattern", line_no, colon + 1);
    }
    if (!t.patterns_.emplace(key, line.substr(open + 1, close - open - 1)).second) {
      throw ParseError("templates: duplicate key " + key, line_no, first + 10);
    }
  }
  return t;
}

const Templates& Templates::builtin() {
  static const Templates t = load(builtin::templates_text());
  return t;
}

const std::string& Templates::pattern(const std::string& key) const {
  auto it = patterns_.find(key);
  if (it == patterns_.end()) throw Error("no template " + key);
  return it->second;
}

std::string Templates::render(const std::string& key,
                              const std::map<std::string, std::string>& slots) const {
  const std::string& p = pattern(key);
  std::string out;
  std::size_t i = 0;
  while (i < p.size()) {
    if (p[i] != '{') {
      out += p[i++];
      continue;
    }
    std::size_t close = p.find('}', i);
    if (close == std::string::npos) throw Error("template " + key + ": unclosed slot");
    std::string slot = p.substr(i + 1, close - i - 1);
    auto it = slots.find(slot);
    if (it == slots.end()) throw Error("template " + key + ": no value for {" + slot + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

std::vector<std::string> Templates::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : patterns_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------- verdicts

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Accepted:
      return "accepted";
    case Verdict::Rejected:
      return "rejected";
    case Verdict::NoParse:
      return "no_parse";
    case Verdict::UnknownWord:
      return "unknown_word";
  }
  return "?";
}

// ---------------------------------------------------------------- model comparison

std::vector<PrepositionUse> preposition_uses(const Model& model, const KnowledgeBase& kb) {
  std::vector<PrepositionUse> out;
  for (const auto& f : model.facts()) {
    if (f.arity() != 2 || !kb.is_preposition(f.predicate)) continue;
    PrepositionUse use;
    use.language = kb.preposition_language(f.predicate).value_or(model.language);
    use.literal = f;
    use.located = model.contains(Literal("located", {f.args[0], f.args[1]}));
    out.push_back(std::move(use));
  }
  return out;
}

namespace {

bool same_referent(const Term& a, const Model& ma, const Term& b, const Model& mb,
                   const KnowledgeBase& kb) {
  if (!a.is_entity() || !b.is_entity()) return false;
  if (a.name() == kUserEntity || b.name() == kUserEntity) {
    return a.name() == kUserEntity && b.name() == kUserEntity;
  }
  auto wa = ma.lexical().find(a.name());
  auto wb = mb.lexical().find(b.name());
  if (wa == ma.lexical().end() || wb == mb.lexical().end()) return false;
  return wa->second == wb->second || kb.equivalent(wa->second, wb->second);
}

const PrepositionUse* counterpart(const PrepositionUse& use, const Model& m,
                                  const std::vector<PrepositionUse>& others, const Model& om,
                                  const KnowledgeBase& kb) {
  for (const auto& o : others) {
    if (same_referent(use.literal.args[0], m, o.literal.args[0], om, kb) &&
        same_referent(use.literal.args[1], m, o.literal.args[1], om, kb)) {
      return &o;
    }
  }
  return nullptr;
}

}  // namespace

std::vector<Mismatch> compare_models(const Model& source, const Model& attempt,
                                     const KnowledgeBase& kb) {
  std::vector<Mismatch> out;
  auto src = preposition_uses(source, kb);
  auto att = preposition_uses(attempt, kb);
  for (const auto& u : src) {
    const PrepositionUse* c = counterpart(u, source, att, attempt, kb);
    if (!c) {
      out.push_back(Mismatch{"no_equivalent", source.language, u, std::nullopt});
    } else if (u.located && !c->located) {
      out.push_back(Mismatch{"located", attempt.language, *c, u});
    } else if (!u.located && c->located) {
      out.push_back(Mismatch{"located", source.language, u, *c});
    }
  }
  for (const auto& u : att) {
    if (!counterpart(u, attempt, src, source, kb)) {
      out.push_back(Mismatch{"no_equivalent", attempt.language, u, std::nullopt});
    }
  }
  return out;
}

// ---------------------------------------------------------------- JSON

namespace {

nlohmann::json use_json(const PrepositionUse& u) {
  return {{"language", to_string(u.language)},
          {"literal", to_string(u.literal)},
          {"located", u.located}};
}

std::string canonical_text(const Literal& l) { return to_string(l); }

}  // namespace

nlohmann::json to_json(const Diagnosis& d, bool trace) {
  nlohmann::json j;
  j["id"] = d.id;
  j["verdict"] = to_string(d.verdict);
  j["message"] = d.message;
  j["depth"] = d.depth;
  j["missing"] = nlohmann::json::array();
  for (const auto& m : d.missing) j["missing"].push_back(canonical_text(m));
  j["missing_phrases"] = d.missing_phrases;
  j["preposition_pairs"] = nlohmann::json::array();
  for (const auto& u : d.preposition_pairs) j["preposition_pairs"].push_back(use_json(u));
  j["children"] = nlohmann::json::object();
  for (const auto& [key, child] : d.children) j["children"][key] = to_json(*child, trace);
  if (d.target) j["target"] = to_string(*d.target);
  if (!d.token.empty()) j["token"] = d.token;
  j["parse_count"] = d.parse_count;
  if (d.context) {
    j["exercise_id"] = d.context->exercise_id;
    j["attempt"] = d.context->attempt_text;
  }
  j["words"] = nlohmann::json::array();
  for (const auto& [bw, script] : d.words) {
    j["words"].push_back({{"buckwalter", bw}, {"script", script}});
  }
  if (trace) {
    j["proof_trace"] = nlohmann::json::array();
    for (const auto& s : d.proof) {
      j["proof_trace"].push_back({{"clause", s.clause}, {"head", to_string(s.head)}});
    }
    j["blockers"] = nlohmann::json::array();
    for (const auto& b : d.blockers) j["blockers"].push_back(to_string(b));
  }
  return j;
}

std::string shape(const Diagnosis& d) {
  nlohmann::json j = to_json(d);
  std::function<void(nlohmann::json&)> strip = [&](nlohmann::json& x) {
    x.erase("id");
    for (auto& [k, c] : x["children"].items()) strip(c);
  };
  strip(j);
  std::string text = j.dump();
  // Renumber entity ids by first appearance.
  static const std::regex id_re("#([A-Za-z0-9_]+)");
  std::map<std::string, std::string> names;
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), id_re);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    out += text.substr(last, static_cast<std::size_t>(m.position()) - last);
    std::string id = m[1].str();
    auto found = names.find(id);
    if (found == names.end()) {
      std::string n = id == kUserEntity ? id : "e" + std::to_string(names.size());
      found = names.emplace(id, n).first;
    }
    out += "#" + found->second;
    last = static_cast<std::size_t>(m.position() + m.length());
  }
  out += text.substr(last);
  return out;
}

// ---------------------------------------------------------------- diagnostics

Diagnostics::Diagnostics(const KnowledgeBase& kb, const Lexicon& lexicon,
                         const Transliteration& table, const Templates& templates,
                         DiagnosticsOptions options)
    : kb_(kb), lexicon_(lexicon), table_(table), templates_(templates), options_(options) {}

std::string Diagnostics::word_of(const std::string& entity, const Model& model) const {
  auto it = model.lexical().find(entity);
  if (it == model.lexical().end()) return {};
  const LexEntry* e = lexicon_.word_for_predicate(it->second);
  if (!e) return {};
  return e->language == Language::Ar ? bilingual_form(table_, e->surface) : e->surface;
}

std::string Diagnostics::describe(const Term& entity, const Model& model) const {
  if (!entity.is_entity()) return "something";
  if (entity.name() == kUserEntity) return "you";
  std::string w = word_of(entity.name(), model);
  return w.empty() ? "something" : w;
}

std::string Diagnostics::prep_word(const std::string& predicate) const {
  const LexEntry* e = lexicon_.preposition_for(predicate);
  if (!e) return predicate;
  return e->language == Language::Ar ? bilingual_form(table_, e->surface) : e->surface;
}

namespace {

std::string dim_word(const Term& t) {
  if (t.is_const()) {
    if (t.name() == "3") return "three-dimensional";
    if (t.name() == "2") return "two-dimensional";
    if (t.name() == "1") return "one-dimensional";
    return "of dimension " + t.name();
  }
  return "of the right dimension";
}

std::string space_word(const Term& t) {
  if (t.is_const()) {
    if (t.name() == "r3") return "three-dimensional space";
    if (t.name() == "r2") return "a plane";
  }
  return "space";
}

// The entity a missing literal is about. An orientable place is about the
// thing it is the place of.
Term subject_of(const Literal& l, const std::vector<Literal>& set) {
  if (l.predicate == "embedding" && l.arity() == 3) return l.args[1];
  if (l.predicate == "orientable" && l.arity() == 1) {
    for (const auto& o : set) {
      if (o.predicate == "embedding" && o.arity() == 3 && o.args[0] == l.args[0]) return o.args[1];
    }
  }
  return l.args.empty() ? Term() : l.args[0];
}

std::optional<Term> space_of(const Term& x, const std::vector<Literal>& set, const Model& model) {
  for (const auto& l : set) {
    if (l.predicate == "embedding" && l.arity() == 3 && l.args[0] == x) return l.args[2];
  }
  for (std::size_t i : model.indices("embedding")) {
    const Literal& f = model.facts()[i];
    if (f.arity() == 3 && f.args[0] == x) return f.args[2];
  }
  return std::nullopt;
}

bool same_missing(const Literal& a, const Literal& b) {
  return canonical_free_names(a.to_term()) == canonical_free_names(b.to_term());
}

}  // namespace

std::string Diagnostics::phrase(const Literal& literal, const std::vector<Literal>& set,
                                const Model& model) const {
  const std::string key = "missing_" + literal.predicate;
  if (!abducible_predicates().count(literal.predicate) || !templates_.has(key)) {
    throw Error("no phrase for " + literal.predicate);
  }
  std::map<std::string, std::string> slots;
  slots["subject_word_ar"] = describe(subject_of(literal, set), model);
  if (literal.arity() >= 2) slots["partner_word_ar"] = describe(literal.args[1], model);
  if (literal.predicate == "dim" && literal.arity() == 2) {
    slots["dim_word"] = dim_word(literal.args[1]);
  } else if (literal.predicate == "embedding" && literal.arity() == 3) {
    slots["space"] = space_word(literal.args[2]);
  } else if (literal.predicate == "orientable" && literal.arity() == 1) {
    auto space = space_of(literal.args[0], set, model);
    slots["space"] = space ? space_word(*space) : "space";
  }
  return templates_.render(key, slots);
}

namespace {

std::string join_and(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " and ";
    out += parts[i];
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> arabic_words(
    const std::vector<std::string>& tokens, Language language, const Transliteration& table) {
  std::vector<std::pair<std::string, std::string>> out;
  if (language != Language::Ar) return out;
  for (const auto& t : tokens) out.emplace_back(t, table.to_script(t));
  return out;
}

}  // namespace

Diagnosis Diagnostics::diagnose(const Exercise& exercise, std::string_view attempt,
                                EntityCounter& entities) const {
  auto ctx = std::make_shared<DiagnosisContext>();
  ctx->exercise_id = exercise.id;
  ctx->attempt_text = std::string(attempt);

  Analysis source = analyse(exercise.source_text, exercise.source_language, kb_, entities,
                            lexicon_, table_);
  if (!source.parsed()) throw Error("exercise " + exercise.id + ": source does not parse");
  ctx->source = std::move(source.model);
  const Language target_language =
      exercise.source_language == Language::En ? Language::Ar : Language::En;
  ctx->attempt.language = target_language;

  Diagnosis d;
  d.context = ctx;
  std::map<std::string, std::string> slots;
  Analysis a;
  try {
    a.tokens = tokenize(attempt, target_language, lexicon_, table_);
    d.words = arabic_words(a.tokens, target_language, table_);
    if (!exercise.lexical_scope.empty()) {
      for (const auto& t : a.tokens) {
        for (const LexEntry* e : lexicon_.lookup(t, target_language)) {
          bool content = e->category == "noun" || e->category == "prep" ||
                         e->category == "ord" || e->category == "name";
          if (content && std::find(exercise.lexical_scope.begin(), exercise.lexical_scope.end(),
                                   t) == exercise.lexical_scope.end()) {
            throw UnknownWordError(t);
          }
        }
      }
    }
    a = analyse(attempt, target_language, kb_, entities, lexicon_, table_);
  } catch (const UnknownWordError& e) {
    d.verdict = Verdict::UnknownWord;
    d.token = e.token();
  } catch (const UnknownCharacterError& e) {
    d.verdict = Verdict::UnknownWord;
    d.token = e.character();
  } catch (const UnsupportedRestrictionError&) {
    d.verdict = Verdict::NoParse;
  } catch (const UnsupportedUtteranceError&) {
    d.verdict = Verdict::NoParse;
  }
  if (d.verdict == Verdict::UnknownWord) {
    bool arabic = target_language == Language::Ar &&
                  std::all_of(d.token.begin(), d.token.end(),
                              [&](char c) { return table_.is_buckwalter_char(c); });
    d.message = templates_.render(
        "unknown_word", {{"token", arabic ? bilingual_form(table_, d.token) : d.token}});
    return d;
  }
  d.parse_count = a.signs.size();
  if (!a.parsed()) {
    d.verdict = Verdict::NoParse;
    d.message = templates_.render("no_parse", {});
    return d;
  }
  ctx->attempt = std::move(a.model);

  const auto source_uses = preposition_uses(ctx->source, kb_);
  const auto uses = preposition_uses(ctx->attempt, kb_);
  d.preposition_pairs = source_uses;
  d.preposition_pairs.insert(d.preposition_pairs.end(), uses.begin(), uses.end());

  for (const auto& u : uses) {
    if (!u.located) return reject(std::move(d), *ctx, u, source_uses);
  }

  d.verdict = Verdict::Accepted;
  std::string learner = uses.empty() ? "your sentence" : prep_word(uses.front().literal.predicate);
  std::string source_prep;
  if (!uses.empty()) {
    if (const PrepositionUse* c =
            counterpart(uses.front(), ctx->attempt, source_uses, ctx->source, kb_)) {
      source_prep = prep_word(c->literal.predicate);
    }
  }
  if (source_prep.empty() && !source_uses.empty()) {
    source_prep = prep_word(source_uses.front().literal.predicate);
  }
  d.message = templates_.render("accepted", {{"learner_prep", learner}, {"source_prep", source_prep}});
  return d;
}

Diagnosis Diagnostics::reject(Diagnosis d, const DiagnosisContext& ctx, const PrepositionUse& use,
                              const std::vector<PrepositionUse>& source_uses) const {
  d.verdict = Verdict::Rejected;
  const Model& m = ctx.attempt;
  const Term& figure = use.literal.args[0];
  const Term& ground = use.literal.args[1];

  // The source use about the same figure.
  const PrepositionUse* src = nullptr;
  for (const auto& s : source_uses) {
    if (same_referent(figure, m, s.literal.args[0], ctx.source, kb_)) {
      src = &s;
      break;
    }
  }
  if (!src && !source_uses.empty()) src = &source_uses.front();

  std::map<std::string, std::string> slots;
  slots["learner_prep"] = prep_word(use.literal.predicate);
  slots["source_prep"] = src ? prep_word(src->literal.predicate) : "";
  slots["ground_word_ar"] = describe(ground, m);
  slots["ground_word_en"] = src ? describe(src->literal.args[1], ctx.source) : "something";
  slots["subject_word_ar"] = describe(figure, m);
  slots["partner_word_ar"] = describe(ground, m);

  if (src && !same_referent(ground, m, src->literal.args[1], ctx.source, kb_)) {
    d.message = templates_.render("wrong_ground_word", slots);
    return d;
  }

  AbductionTrace trace;
  auto results = abduce(Literal("located", {figure, ground}), m, kb_, options_.abduction, &trace);
  d.blockers = trace.blockers;
  if (results.empty()) {
    d.message = templates_.render(trace.blockers.empty() ? "no_explanation" : "blocked_types", slots);
    return d;
  }
  // Prefer the explanation that goes through the preposition actually used.
  const AbductionResult* chosen = &results.front();
  for (const auto& r : results) {
    if (r.root_clause >= kb_.horn().size()) continue;
    const GuardedRule* rule = kb_.find_rule(kb_.horn()[r.root_clause].source_rule);
    if (rule && !rule->path_guard().empty() &&
        rule->path_guard().front().predicate == use.literal.predicate) {
      chosen = &r;
      break;
    }
  }
  d.missing = chosen->missing;
  d.proof = chosen->proof_trace;
  for (const auto& l : d.missing) d.missing_phrases.push_back(phrase(l, d.missing, m));
  slots["missing_property"] = join_and(d.missing_phrases);
  d.message = templates_.render("wrong_preposition", slots);
  return d;
}

Diagnosis Diagnostics::why(const Diagnosis& parent, const Literal& missing) const {
  auto it = std::find_if(parent.missing.begin(), parent.missing.end(),
                         [&](const Literal& l) { return same_missing(l, missing); });
  if (it == parent.missing.end()) {
    throw Error("why: " + to_string(missing) + " is not in the missing set");
  }
  if (!parent.context) throw Error("why: diagnosis has no models");
  const Model& m = parent.context->attempt;

  Diagnosis d;
  d.verdict = parent.verdict;
  d.context = parent.context;
  d.depth = parent.depth + 1;
  d.target = *it;
  d.words = parent.words;

  std::map<std::string, std::string> slots;
  slots["target_phrase"] = phrase(*it, parent.missing, m);
  slots["subject_word_ar"] = describe(subject_of(*it, parent.missing), m);

  if (parent.depth >= options_.why_depth_cap) {
    d.message = templates_.render("why_depth_cap", slots);
    return d;
  }
  AbductionTrace trace;
  auto results = abduce(*it, m, kb_, options_.abduction, &trace);
  d.blockers = trace.blockers;
  if (results.empty() || results.front().missing.empty()) {
    d.message = templates_.render("why_lexical", slots);
    return d;
  }
  const AbductionResult& r = results.front();
  d.missing = r.missing;
  d.proof = r.proof_trace;
  for (const auto& l : d.missing) d.missing_phrases.push_back(phrase(l, d.missing, m));

  // An oriented surface is needed but the word's meaning fixes another shape.
  for (const auto& e : d.missing) {
    if (e.predicate != "embedding" || e.arity() != 3) continue;
    bool orientable = std::any_of(d.missing.begin(), d.missing.end(), [&](const Literal& o) {
      return o.predicate == "orientable" && o.arity() == 1 && o.args[0] == e.args[0];
    });
    if (!orientable) continue;
    const Term& subject = e.args[1];
    std::string shape_word;
    for (std::size_t i : m.indices("embedding")) {
      const Literal& f = m.facts()[i];
      if (f.arity() != 3 || f.args[1] != subject || !f.args[2].is_const()) continue;
      if (f.args[2].name() == "r3") shape_word = "three-dimensional container";
      if (f.args[2].name() == "r2" && shape_word.empty()) shape_word = "flat object";
    }
    if (shape_word.empty()) break;
    slots["subject_word_ar"] = describe(subject, m);
    slots["subject_shape"] = shape_word;
    d.message = templates_.render("why_embedding_orientable", slots);
    return d;
  }
  slots["missing_property"] = join_and(d.missing_phrases);
  d.message = templates_.render("why_generic", slots);
  return d;
}

// ---------------------------------------------------------------- cache

std::shared_ptr<Diagnosis> DiagnosisCache::insert(Diagnosis d) {
  std::lock_guard<std::mutex> lock(mu_);
  d.id = "d" + std::to_string(next_++);
  auto p = std::make_shared<Diagnosis>(std::move(d));
  entries_.emplace(p->id, p);
  return p;
}

std::shared_ptr<Diagnosis> DiagnosisCache::get(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw StaleDiagnosisError("unknown diagnosis " + id);
  return it->second;
}

bool DiagnosisCache::contains(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.count(id) != 0;
}

void DiagnosisCache::attach(const std::string& parent_id, const std::string& key,
                            std::shared_ptr<Diagnosis> child) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(parent_id);
  if (it == entries_.end()) throw StaleDiagnosisError("unknown diagnosis " + parent_id);
  it->second->children[key] = std::move(child);
}

std::size_t DiagnosisCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

namespace {

Diagnosis deep_copy(const Diagnosis& d) {
  Diagnosis out = d;
  for (auto& [k, c] : out.children) c = std::make_shared<Diagnosis>(deep_copy(*c));
  return out;
}

}  // namespace

Diagnosis DiagnosisCache::snapshot(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw StaleDiagnosisError("unknown diagnosis " + id);
  return deep_copy(*it->second);
}

}  // namespace prepdiag
