#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "prepdiag/diagnostics.hpp"
#include "prepdiag/exercise.hpp"
#include "prepdiag/kb.hpp"
#include "vendor/json.hpp"

namespace prepdiag {

/// Checks that every exercise's source parses, every reference translation
/// is accepted and every documented wrong attempt is rejected. Throws Error
/// naming the first exercise that fails.
void validate_bank(const std::vector<Exercise>& bank, const Diagnostics& diagnostics);

struct AttemptRecord {
  std::string exercise_id;
  std::string text;
  std::string verdict;
  std::string timestamp;
};

/// Per-learner state: entity counter, diagnosis cache and history.
struct Session {
  explicit Session(std::string session_id) : id(std::move(session_id)) {}

  std::string id;
  EntityCounter entities;
  DiagnosisCache cache;
  std::vector<AttemptRecord> history;
  /// diagnose and why run one at a time per session.
  std::mutex writer;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// The HTTP API without the transport. Every session's requests are
/// appended to `<session_dir>/<session>.jsonl` when a directory is given,
/// and replayed from there on construction.
class Service {
 public:
  Service(KnowledgeBase kb, std::vector<Exercise> bank,
          std::optional<std::filesystem::path> session_dir = std::nullopt);

  /// Dispatches on method and path (e.g. "POST", "/api/diagnose"). `query`
  /// holds URL parameters for GET requests.
  Response handle(const std::string& method, const std::string& path, const std::string& body,
                  const std::map<std::string, std::string>& query = {});

  Response exercises() const;
  Response transliteration() const;
  Response parse(const nlohmann::json& request) const;
  Response model(const nlohmann::json& request) const;
  Response diagnose(const nlohmann::json& request);
  Response why(const nlohmann::json& request);
  Response compare(const std::string& session, const std::string& diagnosis_id);

  const std::vector<Exercise>& bank() const noexcept { return bank_; }
  const KnowledgeBase& kb() const noexcept { return kb_; }
  /// nullptr when the session does not exist.
  std::shared_ptr<Session> find_session(const std::string& id) const;

  /// Re-runs the records of one session log into a fresh session.
  void replay(const std::filesystem::path& log);

 private:
  std::shared_ptr<Session> session(const std::string& id, bool create);
  void append(const Session& s, const nlohmann::json& record);
  Response diagnose_in(Session& s, const std::string& exercise_id, const std::string& text,
                       bool log);
  Response why_in(Session& s, const std::string& diagnosis_id, const std::string& literal,
                  bool log);

  KnowledgeBase kb_;
  std::vector<Exercise> bank_;
  Diagnostics diagnostics_;
  std::optional<std::filesystem::path> session_dir_;
  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex log_mu_;
};

/// Blocks serving `service` over HTTP.
void serve(Service& service, const std::string& host, int port);

/// The `prepdiag` command line. Returns the exit status: 0 on success
/// (including a rejected answer), 1 on learner-level verdicts, 2 on faults
/// and usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace prepdiag
