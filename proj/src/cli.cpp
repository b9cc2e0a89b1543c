#include <cstdlib>
#include <fstream>
#include <sstream>

#include "prepdiag/app.hpp"
#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"
#include "prepdiag/pipeline.hpp"
#include "vendor/CLI11.hpp"

namespace prepdiag {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeBase load_kb_option(const std::string& path) {
  if (!path.empty()) return load_kb(read_file(path));
  if (const char* env = std::getenv("PREPDIAG_KB"); env && *env) return load_kb(read_file(env));
  return builtin_kb();
}

std::vector<Exercise> load_bank_option(const std::string& path) {
  return parse_bank(path.empty() ? std::string(builtin::bank_text()) : read_file(path));
}

void print_tree(std::ostream& out, const Diagnosis& d, const std::string& indent, bool trace) {
  out << indent << "verdict: " << to_string(d.verdict) << "\n";
  out << indent << "message: " << d.message << "\n";
  if (!d.token.empty()) out << indent << "token: " << d.token << "\n";
  if (trace) {
    for (const auto& u : d.preposition_pairs) {
      out << indent << "use: " << to_string(u.literal) << (u.located ? " located" : " not located")
          << "\n";
    }
    for (const auto& s : d.proof) out << indent << "step: " << s.clause << " " << to_string(s.head) << "\n";
    for (const auto& b : d.blockers) out << indent << "blocked: " << to_string(b) << "\n";
  }
  if (!d.missing.empty()) out << indent << "missing:\n";
  for (std::size_t i = 0; i < d.missing.size(); ++i) {
    out << indent << "  " << to_string(d.missing[i]) << ": " << d.missing_phrases[i] << "\n";
    auto it = d.children.find(to_string(d.missing[i]));
    if (it != d.children.end()) print_tree(out, *it->second, indent + "    ", trace);
  }
}

void expand(const Diagnostics& dx, Diagnosis& d, std::size_t levels) {
  if (levels == 0) return;
  for (const auto& m : d.missing) {
    auto child = std::make_shared<Diagnosis>(dx.why(d, m));
    expand(dx, *child, levels - 1);
    d.children[to_string(m)] = child;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preposition diagnosis engine"};
  app.require_subcommand(1);

  std::string lang = "en";
  std::string text;
  std::string kb_path;
  std::string bank_path;

  auto* parse_cmd = app.add_subcommand("parse", "Print the logical form of a sentence");
  parse_cmd->add_option("--lang", lang, "en or ar")->check(CLI::IsMember({"en", "ar"}));
  parse_cmd->add_option("text", text)->required();

  auto* model_cmd = app.add_subcommand("model", "Print the saturated model of a sentence");
  model_cmd->add_option("--lang", lang, "en or ar")->check(CLI::IsMember({"en", "ar"}));
  model_cmd->add_option("--kb", kb_path, "Knowledge base file");
  model_cmd->add_option("text", text)->required();

  std::string exercise_id;
  std::string answer;
  bool trace = false;
  bool json = false;
  std::size_t why_depth = 0;
  auto* diag_cmd = app.add_subcommand("diagnose", "Diagnose an answer to an exercise");
  diag_cmd->add_option("--exercise", exercise_id)->required();
  diag_cmd->add_option("--answer", answer)->required();
  diag_cmd->add_option("--kb", kb_path, "Knowledge base file");
  diag_cmd->add_option("--bank", bank_path, "Exercise bank file");
  diag_cmd->add_option("--why-depth", why_depth, "Expand why for this many levels");
  diag_cmd->add_flag("--trace", trace, "Show proofs and preposition uses");
  diag_cmd->add_flag("--json", json, "Print the diagnosis as JSON");

  std::string kb_file;
  auto* check_cmd = app.add_subcommand("check-kb", "Validate a knowledge base file");
  check_cmd->add_option("file", kb_file)->required();

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string sessions;
  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--host", host);
  serve_cmd->add_option("--kb", kb_path, "Knowledge base file");
  serve_cmd->add_option("--bank", bank_path, "Exercise bank file");
  serve_cmd->add_option("--sessions", sessions, "Directory for session logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Language language = parse_language(lang);
    if (*parse_cmd) {
      try {
        out << logical_form_text(text, language) << "\n";
      } catch (const UnknownWordError& e) {
        err << "unknown word: " << e.token() << "\n";
        return 1;
      } catch (const UnknownCharacterError& e) {
        err << e.what() << "\n";
        return 1;
      }
      return 0;
    }
    if (*model_cmd) {
      KnowledgeBase kb = load_kb_option(kb_path);
      EntityCounter entities;
      try {
        Analysis a = analyse(text, language, kb, entities);
        if (!a.parsed()) {
          err << "no parse\n";
          return 1;
        }
        out << a.model.serialize();
      } catch (const UnknownWordError& e) {
        err << "unknown word: " << e.token() << "\n";
        return 1;
      } catch (const UnknownCharacterError& e) {
        err << e.what() << "\n";
        return 1;
      }
      return 0;
    }
    if (*diag_cmd) {
      KnowledgeBase kb = load_kb_option(kb_path);
      auto bank = load_bank_option(bank_path);
      const Exercise* ex = find_exercise(bank, exercise_id);
      if (!ex) {
        err << "unknown exercise: " << exercise_id << "\n";
        return 2;
      }
      Diagnostics dx(kb);
      EntityCounter entities;
      Diagnosis d = dx.diagnose(*ex, answer, entities);
      expand(dx, d, why_depth);
      if (json) {
        out << to_json(d, trace).dump(2) << "\n";
      } else {
        print_tree(out, d, "", trace);
      }
      return d.verdict == Verdict::NoParse || d.verdict == Verdict::UnknownWord ? 1 : 0;
    }
    if (*check_cmd) {
      KnowledgeBase kb = load_kb(read_file(kb_file));
      out << "OK: " << kb.rules().size() << " rules\n";
      return 0;
    }
    if (*serve_cmd) {
      KnowledgeBase kb = load_kb_option(kb_path);
      auto bank = load_bank_option(bank_path);
      validate_bank(bank, Diagnostics(kb));
      std::optional<std::filesystem::path> dir;
      if (!sessions.empty()) dir = sessions;
      Service service(std::move(kb), std::move(bank), dir);
      serve(service, host, port);
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace prepdiag
