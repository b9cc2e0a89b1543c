#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prepdiag/kb.hpp"

namespace prepdiag {

/// A translation exercise: an English sentence and its Arabic renderings.
struct Exercise {
  std::string id;
  Language source_language = Language::En;
  std::string source_text;
  std::vector<std::string> reference_translations;
  /// Lexicon surface forms the learner may use (Buckwalter for Arabic).
  std::vector<std::string> lexical_scope;
  /// Known wrong attempts, kept for regression checks.
  std::vector<std::string> wrong_attempts;
};

/// Lines `exercise <id>: en="..." ar="..." [ar="..."] scope=w1,w2,...
/// [wrong="..."]`; `#` comments. Throws ParseError with the line number.
std::vector<Exercise> parse_bank(std::string_view text);

const Exercise* find_exercise(const std::vector<Exercise>& bank, std::string_view id);

}  // namespace prepdiag
