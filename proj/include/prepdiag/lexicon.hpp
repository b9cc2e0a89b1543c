#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "prepdiag/kb.hpp"
#include "prepdiag/term.hpp"
#include "prepdiag/translit.hpp"

namespace prepdiag {

struct LexEntry {
  std::string surface;
  Language language = Language::En;
  /// noun, name, cop, prep, det, art, ord, poss, clitic
  std::string category;
  std::map<std::string, std::string> features;
  Term semantics;
  /// Triliteral root for Arabic, the stem for English.
  std::string root;
};

class Lexicon {
 public:
  /// Lines `lex <surface> (<en|ar>) <category> root=<root> [feat=val ...]
  /// sem=<term>.`; `#` comments. Throws ParseError, including for open
  /// semantics.
  static Lexicon load(std::string_view text);
  static const Lexicon& builtin();

  const std::vector<LexEntry>& entries() const noexcept { return entries_; }
  std::vector<const LexEntry*> lookup(std::string_view surface, Language language) const;
  bool contains(std::string_view surface, Language language) const;
  bool is_noun(std::string_view surface, Language language) const;

  /// The noun or name whose semantics applies `predicate`, e.g. Tbq_floor
  /// -> TAbq. nullptr when there is none.
  const LexEntry* word_for_predicate(const std::string& predicate) const;
  /// The preposition entry whose semantics builds `predicate`.
  const LexEntry* preposition_for(const std::string& predicate) const;

 private:
  std::vector<LexEntry> entries_;
  std::map<std::string, std::size_t> by_predicate_;
};

/// Tokens of one sentence. English is lowercased and split at whitespace
/// and punctuation. Arabic may be script or Buckwalter and comes out in
/// Buckwalter with the article split off (Al+) and possessive clitics split
/// (mktby -> mktb +y). Throws UnknownCharacterError with the byte offset in
/// `text`.
std::vector<std::string> tokenize(std::string_view text, Language language,
                                  const Lexicon& lexicon = Lexicon::builtin(),
                                  const Transliteration& table = Transliteration::builtin());

}  // namespace prepdiag
