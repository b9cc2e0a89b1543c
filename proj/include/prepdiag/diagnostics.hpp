#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prepdiag/abduction.hpp"
#include "prepdiag/entity.hpp"
#include "prepdiag/exercise.hpp"
#include "prepdiag/kb.hpp"
#include "prepdiag/lexicon.hpp"
#include "prepdiag/model.hpp"
#include "prepdiag/translit.hpp"
#include "vendor/json.hpp"

namespace prepdiag {

/// Canned phrases with {slot}s, keyed by name.
class Templates {
 public:
  /// Lines `template <key>: "<pattern>"`; `#` comments. Throws ParseError.
  static Templates load(std::string_view text);
  static const Templates& builtin();

  bool has(const std::string& key) const { return patterns_.count(key) != 0; }
  const std::string& pattern(const std::string& key) const;
  /// Throws Error for an unknown key or a slot without a value.
  std::string render(const std::string& key,
                     const std::map<std::string, std::string>& slots) const;
  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::string> patterns_;
};

enum class Verdict { Accepted, Rejected, NoParse, UnknownWord };

std::string to_string(Verdict v);

/// A preposition literal of a model and whether its `located` fact holds.
struct PrepositionUse {
  Language language = Language::En;
  Literal literal;
  bool located = false;
};

std::vector<PrepositionUse> preposition_uses(const Model& model, const KnowledgeBase& kb);

struct Mismatch {
  /// "located" (paired, located on one side only) or "no_equivalent".
  std::string kind;
  /// The side whose use is not located or has no counterpart.
  Language side = Language::En;
  PrepositionUse use;
  std::optional<PrepositionUse> counterpart;
};

/// Pairs the preposition uses of two models through the entities' words
/// and the KB's equivalence table.
std::vector<Mismatch> compare_models(const Model& source, const Model& attempt,
                                     const KnowledgeBase& kb);

/// Models behind a diagnosis, shared by its drill-downs.
struct DiagnosisContext {
  std::string exercise_id;
  std::string attempt_text;
  Model source;
  Model attempt;
};

struct Diagnosis {
  std::string id;
  Verdict verdict = Verdict::NoParse;
  std::vector<PrepositionUse> preposition_pairs;
  std::string message;
  std::vector<Literal> missing;
  /// Learner-facing phrase for each literal of `missing`.
  std::vector<std::string> missing_phrases;
  /// Keyed by the canonical text of a missing literal.
  std::map<std::string, std::shared_ptr<Diagnosis>> children;
  /// 0 for a top-level diagnosis, n for the n-th why.
  std::size_t depth = 0;
  /// The literal asked about (drill-downs only).
  std::optional<Literal> target;
  /// Offending token for unknown_word.
  std::string token;
  std::size_t parse_count = 0;
  /// (Buckwalter, script) for every Arabic token of the attempt.
  std::vector<std::pair<std::string, std::string>> words;
  /// Proof of the chosen explanation and the compat checks that failed.
  std::vector<ProofStep> proof;
  std::vector<Literal> blockers;
  std::shared_ptr<const DiagnosisContext> context;
};

/// JSON tree: id, verdict, message, missing (canonical text), children.
/// `trace` adds the raw proof material.
nlohmann::json to_json(const Diagnosis& d, bool trace = false);

/// Entity-id bijection-insensitive text of a diagnosis tree (ids and
/// entity numbers dropped), for replay comparisons.
std::string shape(const Diagnosis& d);

struct DiagnosticsOptions {
  std::size_t why_depth_cap = 3;
  AbductionOptions abduction;
};

class Diagnostics {
 public:
  Diagnostics(const KnowledgeBase& kb, const Lexicon& lexicon = Lexicon::builtin(),
              const Transliteration& table = Transliteration::builtin(),
              const Templates& templates = Templates::builtin(),
              DiagnosticsOptions options = {});

  /// Parses, anchors and saturates the exercise's source and the attempt,
  /// then explains every preposition use of the attempt that is not
  /// located. The result has no id yet.
  Diagnosis diagnose(const Exercise& exercise, std::string_view attempt,
                     EntityCounter& entities) const;

  /// Drill-down on one missing literal of `parent`. Throws Error when the
  /// literal is not in parent.missing.
  Diagnosis why(const Diagnosis& parent, const Literal& missing) const;

  /// Learner-facing phrase for one literal, given the other literals of its
  /// set and the model they are about.
  std::string phrase(const Literal& literal, const std::vector<Literal>& set,
                     const Model& model) const;

  /// "طابق (TAbq)" for an Arabic entity, "floor" for an English one,
  /// "something" otherwise.
  std::string describe(const Term& entity, const Model& model) const;

  const KnowledgeBase& kb() const noexcept { return kb_; }

 private:
  std::string word_of(const std::string& entity, const Model& model) const;
  std::string prep_word(const std::string& predicate) const;
  Diagnosis reject(Diagnosis d, const DiagnosisContext& ctx, const PrepositionUse& use,
                   const std::vector<PrepositionUse>& source_uses) const;

  const KnowledgeBase& kb_;
  const Lexicon& lexicon_;
  const Transliteration& table_;
  const Templates& templates_;
  DiagnosticsOptions options_;
};

/// Thread-safe id -> Diagnosis store.
class DiagnosisCache {
 public:
  /// Assigns the next id ("d1", "d2", ...) and stores the diagnosis.
  std::shared_ptr<Diagnosis> insert(Diagnosis d);
  /// Throws StaleDiagnosisError for an unknown id.
  std::shared_ptr<Diagnosis> get(const std::string& id) const;
  bool contains(const std::string& id) const;
  /// Records `child` under `parent` for the given literal.
  void attach(const std::string& parent_id, const std::string& key,
              std::shared_ptr<Diagnosis> child);
  std::size_t size() const;
  /// Copy of a stored tree taken under the lock.
  Diagnosis snapshot(const std::string& id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Diagnosis>> entries_;
  std::size_t next_ = 1;
};

}  // namespace prepdiag
