#include "prepdiag/exercise.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "prepdiag/errors.hpp"

namespace prepdiag {

namespace {

class LineReader {
 public:
  LineReader(std::string_view line, std::size_t line_no) : s_(line), line_(line_no) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("bank: " + what, line_, pos_ + 1);
  }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }

  std::string word() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '=' && s_[pos_] != ':') {
      ++pos_;
    }
    if (start == pos_) fail("expected a word");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string quoted() {
    expect('"');
    std::size_t end = s_.find('"', pos_);
    if (end == std::string_view::npos) fail("unterminated string");
    std::string out(s_.substr(pos_, end - pos_));
    pos_ = end + 1;
    return out;
  }

  std::string bare() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a value");
    return std::string(s_.substr(start, pos_ - start));
  }

 private:
  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Exercise> parse_bank(std::string_view text) {
  std::vector<Exercise> bank;
  std::set<std::string> ids;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    LineReader r(line, line_no);
    if (r.word() != "exercise") r.fail("expected 'exercise'");
    Exercise ex;
    ex.id = r.word();
    r.expect(':');
    bool have_en = false;
    while (!r.done()) {
      std::string key = r.word();
      r.expect('=');
      if (key == "en") {
        if (have_en) r.fail("second en= source");
        ex.source_text = r.quoted();
        have_en = true;
      } else if (key == "ar") {
        ex.reference_translations.push_back(r.quoted());
      } else if (key == "wrong") {
        ex.wrong_attempts.push_back(r.quoted());
      } else if (key == "scope") {
        std::string list = r.bare();
        std::size_t start = 0;
        while (start <= list.size()) {
          std::size_t comma = list.find(',', start);
          if (comma == std::string::npos) comma = list.size();
          if (comma > start) ex.lexical_scope.push_back(list.substr(start, comma - start));
          start = comma + 1;
        }
      } else {
        r.fail("unknown field " + key);
      }
    }
    if (!have_en) r.fail("exercise " + ex.id + " has no en= source");
    if (ex.reference_translations.empty()) r.fail("exercise " + ex.id + " has no ar= reference");
    if (!ids.insert(ex.id).second) r.fail("duplicate exercise " + ex.id);
    bank.push_back(std::move(ex));
  }
  return bank;
}

const Exercise* find_exercise(const std::vector<Exercise>& bank, std::string_view id) {
  for (const auto& ex : bank) {
    if (ex.id == id) return &ex;
  }
  return nullptr;
}

}  // namespace prepdiag
