#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "prepdiag/entity.hpp"
#include "prepdiag/grammar.hpp"
#include "prepdiag/kb.hpp"
#include "prepdiag/lexicon.hpp"
#include "prepdiag/lf.hpp"
#include "prepdiag/model.hpp"

namespace prepdiag {

/// One sentence taken through tokenizing, parsing, anchoring and
/// saturation. When the sentence has no parse, `signs` is empty and the
/// later stages are left default.
struct Analysis {
  std::vector<std::string> tokens;
  std::vector<Sign> signs;
  LogicalForm lf;
  AnchoredForm anchored;
  Model model;

  bool parsed() const noexcept { return !signs.empty(); }
};

/// Uses the first parse. Throws UnknownCharacterError and UnknownWordError
/// for input outside the lexicon, and the errors of anchor and saturate.
Analysis analyse(std::string_view text, Language language, const KnowledgeBase& kb,
                 EntityCounter& entities, const Lexicon& lexicon = Lexicon::builtin(),
                 const Transliteration& table = Transliteration::builtin(),
                 std::size_t skolem_cap = 2);

/// Canonical text of the first parse's logical form.
std::string logical_form_text(std::string_view text, Language language,
                              const Lexicon& lexicon = Lexicon::builtin());

}  // namespace prepdiag
