#include "prepdiag/translit.hpp"

#include <sstream>

#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"

namespace prepdiag {

std::pair<char32_t, std::size_t> decode_utf8(std::string_view text, std::size_t pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(text[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > text.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

bool is_arabic_diacritic(char32_t c) noexcept {
  return (c >= 0x064B && c <= 0x0652) || c == 0x0670 || c == 0x0640;
}

Transliteration Transliteration::load(std::string_view tsv) {
  Transliteration t;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    std::size_t end = tsv.find('\n', pos);
    if (end == std::string_view::npos) end = tsv.size();
    std::string_view line = tsv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == tsv.size()) break;
      continue;
    }
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError("transliteration: expected two tab-separated columns", line_no, 1);
    }
    std::string script(line.substr(0, tab));
    std::string bw(line.substr(tab + 1));
    if (script.empty() || bw.empty()) {
      throw ParseError("transliteration: empty column", line_no, 1);
    }
    if (decode_utf8(script, 0).second == script.size()) {
      if (bw.size() != 1) {
        throw ParseError("transliteration: a letter maps to one character", line_no, tab + 2);
      }
      t.letters_.emplace_back(script, bw);
      t.letter_to_bw_[script] = bw;
      t.bw_to_letter_[bw[0]] = script;
    } else {
      t.words_.emplace_back(script, bw);
      t.word_to_bw_[script] = bw;
      t.bw_to_word_[bw] = script;
    }
    if (end == tsv.size()) break;
  }
  return t;
}

const Transliteration& Transliteration::builtin() {
  static const Transliteration table = load(builtin::transliteration_text());
  return table;
}

std::string Transliteration::to_buckwalter(std::string_view word) const {
  std::string stripped;
  for (std::size_t i = 0; i < word.size();) {
    auto [cp, len] = decode_utf8(word, i);
    if (!is_arabic_diacritic(cp)) stripped.append(word.substr(i, len));
    i += len;
  }
  if (auto it = word_to_bw_.find(stripped); it != word_to_bw_.end()) return it->second;

  std::string out;
  for (std::size_t i = 0; i < word.size();) {
    auto [cp, len] = decode_utf8(word, i);
    std::string ch(word.substr(i, len));
    if (!is_arabic_diacritic(cp)) {
      auto it = letter_to_bw_.find(ch);
      if (it == letter_to_bw_.end()) throw UnknownCharacterError(ch, i);
      out += it->second;
    }
    i += len;
  }
  return out;
}

std::string Transliteration::to_script(std::string_view buckwalter) const {
  if (auto it = bw_to_word_.find(std::string(buckwalter)); it != bw_to_word_.end()) {
    return it->second;
  }
  std::string out;
  for (char c : buckwalter) {
    auto it = bw_to_letter_.find(c);
    if (it == bw_to_letter_.end()) {
      out += c;
    } else {
      out += it->second;
    }
  }
  return out;
}

bool Transliteration::is_buckwalter_char(char c) const {
  // Buckwalter vowel and gemination marks have no letter row.
  static constexpr std::string_view marks = "aiuo~FNK`";
  return bw_to_letter_.count(c) != 0 || marks.find(c) != std::string_view::npos;
}

std::string bilingual_form(const Transliteration& table, std::string_view buckwalter) {
  std::ostringstream os;
  os << table.to_script(buckwalter) << " (" << buckwalter << ")";
  return os.str();
}

}  // namespace prepdiag
