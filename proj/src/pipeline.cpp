#include "prepdiag/pipeline.hpp"

#include "prepdiag/errors.hpp"

namespace prepdiag {

Analysis analyse(std::string_view text, Language language, const KnowledgeBase& kb,
                 EntityCounter& entities, const Lexicon& lexicon, const Transliteration& table,
                 std::size_t skolem_cap) {
  Analysis a;
  a.tokens = tokenize(text, language, lexicon, table);
  a.signs = parse(a.tokens, language, lexicon);
  if (a.signs.empty()) return a;
  a.lf = build_lf(a.signs.front());
  a.anchored = anchor(a.lf, entities);
  SaturationOptions options;
  options.language = language;
  options.skolem_cap = skolem_cap;
  a.model = saturate(a.anchored.facts, kb, entities, options);
  return a;
}

std::string logical_form_text(std::string_view text, Language language, const Lexicon& lexicon) {
  auto signs = parse(tokenize(text, language, lexicon), language, lexicon);
  if (signs.empty()) throw Error("no parse: " + std::string(text));
  return to_string(build_lf(signs.front()).to_term());
}

}  // namespace prepdiag
