#include "prepdiag/lexicon.hpp"

#include <algorithm>
#include <cctype>

#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"

namespace prepdiag {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Predicate applied by the innermost lambda body of a lexical annotation.
std::string head_predicate(Term t) {
  while (t.is_lambda() || t.is_ref()) t = t.is_lambda() ? t.body() : t.restriction();
  return t.is_compound() ? t.name() : std::string();
}

}  // namespace

Lexicon Lexicon::load(std::string_view text) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    auto fail = [&](const std::string& what) -> void {
      throw ParseError("lexicon: " + what, line_no, 1);
    };
    if (line.substr(0, 4) != "lex ") fail("expected 'lex'");
    std::size_t sem_at = line.find(" sem=");
    if (sem_at == std::string_view::npos) fail("missing sem=");
    std::string_view head = trim(line.substr(4, sem_at - 4));
    std::string_view sem_text = trim(line.substr(sem_at + 5));
    if (sem_text.empty() || sem_text.back() != '.') fail("entry must end with '.'");
    sem_text.remove_suffix(1);

    std::vector<std::string> fields;
    std::size_t p = 0;
    while (p < head.size()) {
      std::size_t q = head.find(' ', p);
      if (q == std::string_view::npos) q = head.size();
      if (q > p) fields.emplace_back(head.substr(p, q - p));
      p = q + 1;
    }
    if (fields.size() < 3) fail("expected surface, language and category");
    LexEntry e;
    e.surface = fields[0];
    const std::string& lang = fields[1];
    if (lang.size() < 3 || lang.front() != '(' || lang.back() != ')') fail("expected (en) or (ar)");
    e.language = parse_language(lang.substr(1, lang.size() - 2));
    if (e.language == Language::Both) fail("entries are en or ar");
    e.category = fields[2];
    for (std::size_t i = 3; i < fields.size(); ++i) {
      std::size_t eq = fields[i].find('=');
      if (eq == std::string::npos) fail("expected key=value: " + fields[i]);
      std::string key = fields[i].substr(0, eq);
      std::string value = fields[i].substr(eq + 1);
      if (key == "root") {
        e.root = value;
      } else {
        e.features[key] = value;
      }
    }
    if (e.root.empty()) fail("missing root= for " + e.surface);
    try {
      e.semantics = parse_term(sem_text);
    } catch (const ParseError& err) {
      throw ParseError(std::string("lexicon: ") + err.what(), line_no, err.column());
    }
    if (!free_vars(e.semantics).empty()) fail("open semantics for " + e.surface);
    lex.entries_.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < lex.entries_.size(); ++i) {
    const LexEntry& e = lex.entries_[i];
    if (e.category == "noun" || e.category == "name" || e.category == "prep") {
      lex.by_predicate_.emplace(head_predicate(e.semantics), i);
    }
  }
  return lex;
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lex = load(builtin::lexicon_text());
  return lex;
}

std::vector<const LexEntry*> Lexicon::lookup(std::string_view surface, Language language) const {
  std::vector<const LexEntry*> out;
  for (const auto& e : entries_) {
    if (e.surface == surface && (language == Language::Both || e.language == language)) {
      out.push_back(&e);
    }
  }
  return out;
}

bool Lexicon::contains(std::string_view surface, Language language) const {
  return !lookup(surface, language).empty();
}

bool Lexicon::is_noun(std::string_view surface, Language language) const {
  auto found = lookup(surface, language);
  return std::any_of(found.begin(), found.end(),
                     [](const LexEntry* e) { return e->category == "noun"; });
}

const LexEntry* Lexicon::word_for_predicate(const std::string& predicate) const {
  auto it = by_predicate_.find(predicate);
  if (it == by_predicate_.end()) return nullptr;
  const LexEntry& e = entries_[it->second];
  return e.category == "prep" ? nullptr : &e;
}

const LexEntry* Lexicon::preposition_for(const std::string& predicate) const {
  auto it = by_predicate_.find(predicate);
  if (it == by_predicate_.end()) return nullptr;
  const LexEntry& e = entries_[it->second];
  return e.category == "prep" ? &e : nullptr;
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

bool is_punct(char c) {
  static constexpr std::string_view p = ".,;:!?\"()";
  return p.find(c) != std::string_view::npos;
}

std::vector<std::string> tokenize_english(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
      continue;
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
    if (std::isspace(c) || is_punct(static_cast<char>(c)) || c == '\'' || c == '-') continue;
    auto [cp, len] = decode_utf8(text, i);
    throw UnknownCharacterError(std::string(text.substr(i, len)), i);
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

// Splits a Buckwalter word into article, stem and possessive clitic.
std::vector<std::string> segment(const std::string& word, const Lexicon& lex) {
  if (lex.contains(word, Language::Ar)) return {word};
  if (word.size() > 2 && word.compare(0, 2, "Al") == 0) {
    std::string rest = word.substr(2);
    if (lex.contains(rest, Language::Ar)) return {"Al+", rest};
  }
  if (word.size() > 1 && word.back() == 'y') {
    std::string stem = word.substr(0, word.size() - 1);
    if (lex.is_noun(stem, Language::Ar)) return {stem, "+y"};
    // Ta marbuta is written t before a suffix: grfty -> grfp +y.
    if (!stem.empty() && stem.back() == 't') {
      std::string repaired = stem.substr(0, stem.size() - 1) + "p";
      if (lex.is_noun(repaired, Language::Ar)) return {repaired, "+y"};
    }
  }
  return {word};
}

bool is_arabic_punct(char32_t c) {
  return c == 0x060C || c == 0x061B || c == 0x061F || c == 0x06D4;
}

std::vector<std::string> tokenize_arabic(std::string_view text, const Lexicon& lex,
                                         const Transliteration& table) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    // One whitespace-delimited chunk, punctuation removed.
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::string word;
    bool script = false;
    std::size_t word_start = std::string::npos;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      auto [cp, len] = decode_utf8(text, i);
      if (cp < 0x80 && is_punct(static_cast<char>(cp))) {
        i += len;
        continue;
      }
      if (is_arabic_punct(cp)) {
        i += len;
        continue;
      }
      if (cp >= 0x80) {
        script = true;
      } else if (!table.is_buckwalter_char(static_cast<char>(cp)) && cp != '+') {
        throw UnknownCharacterError(std::string(text.substr(i, len)), i);
      }
      if (word_start == std::string::npos) word_start = i;
      word.append(text.substr(i, len));
      i += len;
    }
    if (word.empty()) continue;
    std::string bw;
    if (script) {
      try {
        bw = table.to_buckwalter(word);
      } catch (const UnknownCharacterError& e) {
        throw UnknownCharacterError(e.character(), word_start + e.offset());
      }
    } else {
      bw = word;
    }
    for (auto& t : segment(bw, lex)) tokens.push_back(std::move(t));
  }
  return tokens;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, Language language, const Lexicon& lexicon,
                                  const Transliteration& table) {
  switch (language) {
    case Language::En:
      return tokenize_english(text);
    case Language::Ar:
      return tokenize_arabic(text, lexicon, table);
    case Language::Both:
      break;
  }
  throw Error("tokenize: language must be en or ar");
}

}  // namespace prepdiag
