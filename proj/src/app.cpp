#include "prepdiag/app.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <regex>

#include "prepdiag/errors.hpp"
#include "prepdiag/pipeline.hpp"

namespace prepdiag {

void validate_bank(const std::vector<Exercise>& bank, const Diagnostics& diagnostics) {
  for (const auto& ex : bank) {
    EntityCounter entities;
    for (const auto& ref : ex.reference_translations) {
      Diagnosis d = diagnostics.diagnose(ex, ref, entities);
      if (d.verdict != Verdict::Accepted) {
        throw Error("bank: exercise " + ex.id + ": reference \"" + ref + "\" is " +
                    to_string(d.verdict) + ": " + d.message);
      }
    }
    for (const auto& wrong : ex.wrong_attempts) {
      Diagnosis d = diagnostics.diagnose(ex, wrong, entities);
      if (d.verdict != Verdict::Rejected) {
        throw Error("bank: exercise " + ex.id + ": wrong attempt \"" + wrong + "\" is " +
                    to_string(d.verdict));
      }
      if (d.message.find('#') != std::string::npos) {
        throw Error("bank: exercise " + ex.id + ": message mentions an entity id: " + d.message);
      }
    }
  }
}

namespace {

std::string now_utc() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool valid_session_id(const std::string& id) {
  static const std::regex re("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(id, re);
}

Response error(int status, const std::string& message) {
  return Response{status, {{"error", message}}};
}

// Throws BadRequest for a missing or non-string field.
struct BadRequest : Error {
  using Error::Error;
};

std::string field(const nlohmann::json& j, const std::string& name) {
  if (!j.is_object() || !j.contains(name) || !j[name].is_string()) {
    throw BadRequest("missing string field \"" + name + "\"");
  }
  return j[name].get<std::string>();
}

Language language_field(const nlohmann::json& j) {
  std::string lang = field(j, "language");
  if (lang != "en" && lang != "ar") throw BadRequest("language must be en or ar");
  return parse_language(lang);
}

nlohmann::json words_json(const std::vector<std::string>& tokens, Language language) {
  nlohmann::json out = nlohmann::json::array();
  if (language != Language::Ar) return out;
  for (const auto& t : tokens) {
    out.push_back({{"buckwalter", t}, {"script", Transliteration::builtin().to_script(t)}});
  }
  return out;
}

nlohmann::json uses_json(const std::vector<PrepositionUse>& uses) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& u : uses) {
    out.push_back({{"language", to_string(u.language)},
                   {"literal", to_string(u.literal)},
                   {"located", u.located}});
  }
  return out;
}

Response learner_error(const std::string& verdict, const std::string& token = {}) {
  nlohmann::json body{{"verdict", verdict}};
  if (!token.empty()) body["token"] = token;
  return Response{422, body};
}

}  // namespace

Service::Service(KnowledgeBase kb, std::vector<Exercise> bank,
                 std::optional<std::filesystem::path> session_dir)
    : kb_(std::move(kb)),
      bank_(std::move(bank)),
      diagnostics_(kb_),
      session_dir_(std::move(session_dir)) {
  if (!session_dir_) return;
  std::filesystem::create_directories(*session_dir_);
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(*session_dir_)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      logs.push_back(entry.path());
    }
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& log : logs) replay(log);
}

std::shared_ptr<Session> Service::find_session(const std::string& id) const {
  std::lock_guard<std::mutex> lock(sessions_mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::shared_ptr<Session> Service::session(const std::string& id, bool create) {
  if (!valid_session_id(id)) throw BadRequest("invalid session id");
  std::lock_guard<std::mutex> lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it != sessions_.end()) return it->second;
  if (!create) return nullptr;
  auto s = std::make_shared<Session>(id);
  sessions_.emplace(id, s);
  return s;
}

void Service::append(const Session& s, const nlohmann::json& record) {
  if (!session_dir_) return;
  std::lock_guard<std::mutex> lock(log_mu_);
  std::ofstream out(*session_dir_ / (s.id + ".jsonl"), std::ios::app);
  if (!out) throw Error("cannot write session log for " + s.id);
  out << record.dump() << '\n';
}

void Service::replay(const std::filesystem::path& log) {
  std::ifstream in(log);
  if (!in) throw Error("cannot read session log " + log.string());
  auto s = session(log.stem().string(), true);
  std::lock_guard<std::mutex> lock(s->writer);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json r = nlohmann::json::parse(line, nullptr, false);
    if (r.is_discarded() || !r.is_object() || !r.contains("op")) {
      throw Error(log.string() + ":" + std::to_string(line_no) + ": bad record");
    }
    if (r["op"] == "diagnose") {
      diagnose_in(*s, field(r, "exercise_id"), field(r, "text"), false);
      if (r.contains("timestamp") && !s->history.empty()) {
        s->history.back().timestamp = r["timestamp"].get<std::string>();
      }
    } else if (r["op"] == "why") {
      why_in(*s, field(r, "diagnosis_id"), field(r, "missing_literal"), false);
    } else {
      throw Error(log.string() + ":" + std::to_string(line_no) + ": unknown op");
    }
  }
}

Response Service::handle(const std::string& method, const std::string& path,
                         const std::string& body,
                         const std::map<std::string, std::string>& query) {
  try {
    if (method == "GET" && path == "/api/exercises") return exercises();
    if (method == "GET" && path == "/api/transliteration") return transliteration();
    if (method == "GET" && path == "/api/compare") {
      auto s = query.find("session");
      auto d = query.find("diagnosis_id");
      if (s == query.end() || d == query.end()) {
        return error(400, "session and diagnosis_id are required");
      }
      return compare(s->second, d->second);
    }
    if (method != "POST") return error(404, "no such endpoint");
    if (path != "/api/parse" && path != "/api/model" && path != "/api/diagnose" &&
        path != "/api/why") {
      return error(404, "no such endpoint");
    }
    nlohmann::json request = nlohmann::json::parse(body, nullptr, false);
    if (request.is_discarded() || !request.is_object()) return error(400, "body is not a JSON object");
    if (path == "/api/parse") return parse(request);
    if (path == "/api/model") return model(request);
    if (path == "/api/diagnose") return diagnose(request);
    return why(request);
  } catch (const BadRequest& e) {
    return error(400, e.what());
  } catch (const StaleDiagnosisError& e) {
    return error(404, e.what());
  } catch (const NotFoundError& e) {
    return error(404, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

Response Service::exercises() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& ex : bank_) {
    list.push_back({{"id", ex.id},
                    {"source_language", to_string(ex.source_language)},
                    {"source_text", ex.source_text},
                    {"lexical_scope", words_json(ex.lexical_scope, Language::Ar)}});
  }
  return Response{200, {{"exercises", list}}};
}

Response Service::transliteration() const {
  nlohmann::json letters = nlohmann::json::array();
  for (const auto& [script, bw] : Transliteration::builtin().letters()) {
    letters.push_back({{"script", script}, {"buckwalter", bw}});
  }
  return Response{200, {{"letters", letters}}};
}

Response Service::parse(const nlohmann::json& request) const {
  Language lang = language_field(request);
  std::string text = field(request, "text");
  try {
    auto tokens = tokenize(text, lang);
    auto signs = prepdiag::parse(tokens, lang);
    if (signs.empty()) return learner_error("no_parse");
    return Response{200,
                    {{"lf", to_string(build_lf(signs.front()).to_term())},
                     {"parse_count", signs.size()},
                     {"words", words_json(tokens, lang)}}};
  } catch (const UnknownWordError& e) {
    return learner_error("unknown_word", e.token());
  } catch (const UnknownCharacterError& e) {
    return learner_error("unknown_word", e.character());
  }
}

Response Service::model(const nlohmann::json& request) const {
  Language lang = language_field(request);
  std::string text = field(request, "text");
  try {
    EntityCounter entities;
    Analysis a = analyse(text, lang, kb_, entities);
    if (!a.parsed()) return learner_error("no_parse");
    return Response{200, {{"facts", a.model.sorted_lines()}, {"words", words_json(a.tokens, lang)}}};
  } catch (const UnknownWordError& e) {
    return learner_error("unknown_word", e.token());
  } catch (const UnknownCharacterError& e) {
    return learner_error("unknown_word", e.character());
  }
}

Response Service::diagnose(const nlohmann::json& request) {
  std::string session_id = field(request, "session");
  std::string exercise_id = field(request, "exercise_id");
  std::string text = field(request, "text");
  if (!find_exercise(bank_, exercise_id)) return error(404, "unknown exercise " + exercise_id);
  auto s = session(session_id, true);
  std::lock_guard<std::mutex> lock(s->writer);
  return diagnose_in(*s, exercise_id, text, true);
}

Response Service::diagnose_in(Session& s, const std::string& exercise_id, const std::string& text,
                              bool log) {
  const Exercise* ex = find_exercise(bank_, exercise_id);
  if (!ex) throw NotFoundError("unknown exercise " + exercise_id);
  auto d = s.cache.insert(diagnostics_.diagnose(*ex, text, s.entities));
  AttemptRecord record{exercise_id, text, to_string(d->verdict), now_utc()};
  s.history.push_back(record);
  if (log) {
    append(s, {{"op", "diagnose"},
               {"exercise_id", exercise_id},
               {"text", text},
               {"verdict", record.verdict},
               {"timestamp", record.timestamp},
               {"id", d->id}});
  }
  return Response{d->verdict == Verdict::Accepted ? 200 : 422, to_json(s.cache.snapshot(d->id))};
}

Response Service::why(const nlohmann::json& request) {
  std::string session_id = field(request, "session");
  std::string diagnosis_id = field(request, "diagnosis_id");
  std::string literal = field(request, "missing_literal");
  auto s = session(session_id, false);
  if (!s) return error(404, "unknown session " + session_id);
  std::lock_guard<std::mutex> lock(s->writer);
  return why_in(*s, diagnosis_id, literal, true);
}

Response Service::why_in(Session& s, const std::string& diagnosis_id, const std::string& literal,
                         bool log) {
  auto parent = s.cache.get(diagnosis_id);
  Literal target;
  try {
    target = parse_literal(literal);
  } catch (const Error& e) {
    throw BadRequest(std::string("missing_literal: ") + e.what());
  }
  auto in_set = std::find_if(parent->missing.begin(), parent->missing.end(), [&](const Literal& l) {
    return canonical_free_names(l.to_term()) == canonical_free_names(target.to_term());
  });
  if (in_set == parent->missing.end()) {
    throw BadRequest(literal + " is not in the missing set of " + diagnosis_id);
  }
  const std::string key = to_string(*in_set);
  std::shared_ptr<Diagnosis> child;
  if (auto it = parent->children.find(key); it != parent->children.end()) {
    child = it->second;
  } else {
    child = s.cache.insert(diagnostics_.why(*parent, *in_set));
    s.cache.attach(diagnosis_id, key, child);
  }
  if (log) {
    append(s, {{"op", "why"},
               {"diagnosis_id", diagnosis_id},
               {"missing_literal", key},
               {"id", child->id}});
  }
  return Response{200, to_json(s.cache.snapshot(child->id))};
}

Response Service::compare(const std::string& session_id, const std::string& diagnosis_id) {
  auto s = session(session_id, false);
  if (!s) return error(404, "unknown session " + session_id);
  auto d = s->cache.get(diagnosis_id);
  if (!d->context) return error(404, "diagnosis has no models");
  const Model& source = d->context->source;
  const Model& attempt = d->context->attempt;
  nlohmann::json mismatches = nlohmann::json::array();
  for (const auto& m : compare_models(source, attempt, kb_)) {
    nlohmann::json j{{"kind", m.kind},
                     {"side", to_string(m.side)},
                     {"literal", to_string(m.use.literal)},
                     {"located", m.use.located}};
    if (m.counterpart) {
      j["counterpart"] = {{"literal", to_string(m.counterpart->literal)},
                          {"located", m.counterpart->located}};
    }
    mismatches.push_back(j);
  }
  return Response{200,
                  {{"diagnosis_id", diagnosis_id},
                   {"source", {{"language", to_string(source.language)},
                               {"facts", source.sorted_lines()},
                               {"prepositions", uses_json(preposition_uses(source, kb_))}}},
                   {"attempt", {{"language", to_string(attempt.language)},
                                {"facts", attempt.sorted_lines()},
                                {"prepositions", uses_json(preposition_uses(attempt, kb_))}}},
                   {"mismatches", mismatches}}};
}

}  // namespace prepdiag
