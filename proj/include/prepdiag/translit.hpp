#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prepdiag {

/// Arabic script <-> Buckwalter table. Rows holding a single script letter
/// give the letter-level mapping; longer rows are whole words and take
/// precedence in both directions.
class Transliteration {
 public:
  /// Two-column UTF-8 TSV, `#` comments. Throws ParseError.
  static Transliteration load(std::string_view tsv);
  static const Transliteration& builtin();

  /// Converts one script word (no spaces) to Buckwalter. Diacritics and
  /// tatweel are dropped. Throws UnknownCharacterError with the byte offset
  /// inside `word`.
  std::string to_buckwalter(std::string_view word) const;
  /// Buckwalter word to script; characters without a row pass through.
  std::string to_script(std::string_view buckwalter) const;

  bool is_buckwalter_char(char c) const;

  const std::vector<std::pair<std::string, std::string>>& letters() const noexcept {
    return letters_;
  }
  const std::vector<std::pair<std::string, std::string>>& words() const noexcept {
    return words_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> letters_;
  std::vector<std::pair<std::string, std::string>> words_;
  std::map<std::string, std::string> letter_to_bw_;
  std::map<char, std::string> bw_to_letter_;
  std::map<std::string, std::string> word_to_bw_;
  std::map<std::string, std::string> bw_to_word_;
};

/// Decodes the UTF-8 sequence starting at `pos`; returns (code point,
/// length). Invalid bytes decode as U+FFFD with length 1.
std::pair<char32_t, std::size_t> decode_utf8(std::string_view text, std::size_t pos);

/// True for Arabic harakat, shadda, sukun, dagger alif and tatweel.
bool is_arabic_diacritic(char32_t c) noexcept;

/// "طابق (TAbq)": script form followed by the Buckwalter form.
std::string bilingual_form(const Transliteration& table, std::string_view buckwalter);

}  // namespace prepdiag
