#pragma once

#include <string_view>

// Data files compiled into the library (see data/).
namespace prepdiag::builtin {

std::string_view kb_text();
std::string_view lexicon_text();
std::string_view templates_text();
std::string_view transliteration_text();
std::string_view bank_text();

}  // namespace prepdiag::builtin
