#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "oracle.hpp"
#include "prepdiag/app.hpp"
#include "prepdiag/builtin_data.hpp"
#include "prepdiag/errors.hpp"
#include "prepdiag/http.hpp"
#include "vendor/httplib.h"

using namespace prepdiag;
namespace fs = std::filesystem;
namespace oc = prepdiag::oracle;

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

const std::string kWrong = "mktby Ely AlTAbq AlvAny.";

std::vector<Exercise> bank() { return parse_bank(builtin::bank_text()); }

Response post(Service& s, const std::string& path, const nlohmann::json& body) {
  return s.handle("POST", path, body.dump());
}

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("prepdiag_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "prepdiag");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(ServiceTest, Exercises) {
  Service s(builtin_kb(), bank());
  Response r = s.handle("GET", "/api/exercises", "");
  EXPECT_EQ(r.status, 200);
  ASSERT_GE(r.body["exercises"].size(), 10u);
  const auto& first = r.body["exercises"][0];
  EXPECT_EQ(first["id"], "ex-office-floor");
  EXPECT_EQ(first["source_language"], "en");
  EXPECT_FALSE(first.contains("reference_translations"));
  EXPECT_FALSE(first.contains("wrong_attempts"));
  EXPECT_EQ(first["lexical_scope"][0]["script"], "مكتب");
}

TEST(ServiceTest, Transliteration) {
  Service s(builtin_kb(), bank());
  Response r = s.handle("GET", "/api/transliteration", "");
  EXPECT_EQ(r.status, 200);
  EXPECT_FALSE(r.body["letters"].empty());
}

TEST(ServiceTest, ParseAndModel) {
  Service s(builtin_kb(), bank());
  Response p = post(s, "/api/parse", {{"language", "ar"}, {"text", kWrong}});
  ASSERT_EQ(p.status, 200);
  EXPECT_TRUE(alpha_equal(parse_term(p.body["lf"].get<std::string>()),
                          parse_term(trim(oc::read_file(oc::golden("lf_office_floor_ar.txt"))))));
  EXPECT_EQ(p.body["parse_count"], 1);
  EXPECT_EQ(p.body["words"][0]["buckwalter"], "mktb");

  Response bad = post(s, "/api/parse", {{"language", "en"}, {"text", "My office is on the fifth floor."}});
  EXPECT_EQ(bad.status, 422);
  EXPECT_EQ(bad.body["verdict"], "unknown_word");
  EXPECT_EQ(bad.body["token"], "fifth");

  Response none = post(s, "/api/parse", {{"language", "ar"}, {"text", "AlTAbq mktby."}});
  EXPECT_EQ(none.status, 422);
  EXPECT_EQ(none.body["verdict"], "no_parse");

  Response m = post(s, "/api/model", {{"language", "en"}, {"text", "My office is on the second floor."}});
  ASSERT_EQ(m.status, 200);
  std::vector<Literal> facts;
  for (const auto& f : m.body["facts"]) facts.push_back(parse_literal(f.get<std::string>()));
  EXPECT_TRUE(oc::isomorphic(oc::read_facts(oc::golden("model_office_floor_en.txt")), facts));
}

TEST(ServiceTest, DiagnoseWhyCompare) {
  Service s(builtin_kb(), bank());
  Response d = post(s, "/api/diagnose", {{"session", "alice"}, {"exercise_id", "ex-office-floor"}, {"text", kWrong}});
  ASSERT_EQ(d.status, 422);
  EXPECT_EQ(d.body["verdict"], "rejected");
  EXPECT_EQ(d.body["message"], trim(oc::read_file(oc::golden("message_wrong_preposition.txt"))));
  std::string id = d.body["id"];
  ASSERT_EQ(d.body["missing"].size(), 1u);
  std::string literal = d.body["missing"][0];

  Response w = post(s, "/api/why", {{"session", "alice"}, {"diagnosis_id", id}, {"missing_literal", literal}});
  ASSERT_EQ(w.status, 200);
  EXPECT_EQ(w.body["message"], trim(oc::read_file(oc::golden("why_surface.txt"))));
  EXPECT_EQ(w.body["depth"], 1);
  Response again = post(s, "/api/why", {{"session", "alice"}, {"diagnosis_id", id}, {"missing_literal", literal}});
  EXPECT_EQ(again.body["id"], w.body["id"]);

  Response stranger = post(s, "/api/why", {{"session", "alice"}, {"diagnosis_id", id}, {"missing_literal", "interior(#1, B)"}});
  EXPECT_EQ(stranger.status, 400);
  Response stale = post(s, "/api/why", {{"session", "alice"}, {"diagnosis_id", "d999"}, {"missing_literal", literal}});
  EXPECT_EQ(stale.status, 404);

  Response c = s.handle("GET", "/api/compare", "", {{"session", "alice"}, {"diagnosis_id", id}});
  ASSERT_EQ(c.status, 200);
  ASSERT_EQ(c.body["mismatches"].size(), 1u);
  EXPECT_EQ(c.body["mismatches"][0]["kind"], "located");
  EXPECT_EQ(c.body["attempt"]["language"], "ar");
  EXPECT_EQ(c.body["source"]["prepositions"][0]["located"], true);

  Response ok = post(s, "/api/diagnose", {{"session", "alice"}, {"exercise_id", "ex-office-floor"}, {"text", "mktby fy AlTAbq AlvAny."}});
  EXPECT_EQ(ok.status, 200);
  EXPECT_EQ(ok.body["verdict"], "accepted");
  EXPECT_EQ(s.find_session("alice")->history.size(), 2u);
}

TEST(ServiceTest, Errors) {
  Service s(builtin_kb(), bank());
  EXPECT_EQ(post(s, "/api/diagnose", {{"session", "a"}, {"exercise_id", "nope"}, {"text", "x"}}).status, 404);
  EXPECT_EQ(post(s, "/api/diagnose", {{"session", "../etc"}, {"exercise_id", "ex-office-floor"}, {"text", kWrong}}).status, 400);
  EXPECT_EQ(post(s, "/api/diagnose", {{"exercise_id", "ex-office-floor"}}).status, 400);
  EXPECT_EQ(s.handle("POST", "/api/diagnose", "not json").status, 400);
  EXPECT_EQ(s.handle("GET", "/api/nothing", "").status, 404);
  EXPECT_EQ(post(s, "/api/why", {{"session", "ghost"}, {"diagnosis_id", "d1"}, {"missing_literal", "p(a)"}}).status, 404);
  EXPECT_EQ(s.handle("GET", "/api/compare", "", {{"session", "ghost"}}).status, 400);
  Response uw = post(s, "/api/diagnose", {{"session", "a"}, {"exercise_id", "ex-office-floor"}, {"text", "mktby Ely AlTAbq Alxms."}});
  EXPECT_EQ(uw.status, 422);
  EXPECT_EQ(uw.body["verdict"], "unknown_word");
}

TEST(ServiceTest, SessionLogReplay) {
  fs::path dir = temp_dir("replay");
  std::string child_id;
  std::string child_message;
  {
    Service s(builtin_kb(), bank(), dir);
    Response d = post(s, "/api/diagnose", {{"session", "bob"}, {"exercise_id", "ex-office-floor"}, {"text", kWrong}});
    Response w = post(s, "/api/why", {{"session", "bob"}, {"diagnosis_id", d.body["id"]}, {"missing_literal", d.body["missing"][0]}});
    child_id = w.body["id"];
    child_message = w.body["message"];
  }
  ASSERT_TRUE(fs::exists(dir / "bob.jsonl"));
  std::ifstream in(dir / "bob.jsonl");
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("op"));
    ++lines;
  }
  EXPECT_EQ(lines, 2u);

  Service restored(builtin_kb(), bank(), dir);
  auto session = restored.find_session("bob");
  ASSERT_NE(session, nullptr);
  EXPECT_EQ(session->history.size(), 1u);
  EXPECT_EQ(session->history[0].verdict, "rejected");
  Response c = restored.handle("GET", "/api/compare", "", {{"session", "bob"}, {"diagnosis_id", "d1"}});
  EXPECT_EQ(c.status, 200);
  EXPECT_EQ(session->cache.get(child_id)->message, child_message);
  fs::remove_all(dir);
}

TEST(ServiceTest, BankValidates) {
  EXPECT_NO_THROW(validate_bank(bank(), Diagnostics(builtin_kb())));
  auto broken = bank();
  broken[0].wrong_attempts.push_back("mktby fy AlTAbq AlvAny.");
  EXPECT_THROW(validate_bank(broken, Diagnostics(builtin_kb())), Error);
}

TEST(HttpTest, RoundTrip) {
  Service service(builtin_kb(), bank());
  httplib::Server server;
  install_routes(server, service);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto ex = client.Get("/api/exercises");
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->status, 200);
  EXPECT_NE(ex->get_header_value("Content-Type").find("application/json"), std::string::npos);

  nlohmann::json body{{"session", "web"}, {"exercise_id", "ex-office-floor"}, {"text", kWrong}};
  auto d = client.Post("/api/diagnose", body.dump(), "application/json");
  ASSERT_TRUE(d);
  EXPECT_EQ(d->status, 422);
  auto j = nlohmann::json::parse(d->body);
  EXPECT_EQ(j["message"], trim(oc::read_file(oc::golden("message_wrong_preposition.txt"))));

  auto c = client.Get("/api/compare?session=web&diagnosis_id=" + j["id"].get<std::string>());
  ASSERT_TRUE(c);
  EXPECT_EQ(c->status, 200);

  auto missing = client.Get("/api/nothing");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  server.stop();
  thread.join();
}

TEST(CliTest, Parse) {
  auto r = cli({"parse", "--lang", "ar", kWrong});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(alpha_equal(parse_term(trim(r.out)),
                          parse_term(trim(oc::read_file(oc::golden("lf_office_floor_ar.txt"))))));
  auto bad = cli({"parse", "--lang", "en", "My office is on the fifth floor."});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("fifth"), std::string::npos);
}

TEST(CliTest, Model) {
  auto r = cli({"model", "--lang", "en", "My office is on the second floor."});
  EXPECT_EQ(r.code, 0);
  std::vector<Literal> facts;
  std::istringstream in(r.out);
  std::string line;
  while (std::getline(in, line)) facts.push_back(parse_literal(line));
  EXPECT_TRUE(oc::isomorphic(oc::read_facts(oc::golden("model_office_floor_en.txt")), facts));
}

TEST(CliTest, Diagnose) {
  auto r = cli({"diagnose", "--exercise", "ex-office-floor", "--answer", kWrong, "--why-depth", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(trim(oc::read_file(oc::golden("message_wrong_preposition.txt")))), std::string::npos);
  EXPECT_NE(r.out.find(trim(oc::read_file(oc::golden("why_surface.txt")))), std::string::npos);

  auto j = cli({"diagnose", "--exercise", "ex-office-floor", "--answer", kWrong, "--json"});
  EXPECT_EQ(j.code, 0);
  EXPECT_EQ(nlohmann::json::parse(j.out)["verdict"], "rejected");

  EXPECT_EQ(cli({"diagnose", "--exercise", "ex-office-floor", "--answer", "AlTAbq mktby."}).code, 1);
  EXPECT_EQ(cli({"diagnose", "--exercise", "nope", "--answer", kWrong}).code, 2);
}

TEST(CliTest, CheckKbAndUsage) {
  fs::path dir = temp_dir("cli");
  std::ofstream(dir / "ok.kb") << "partition physical.\nword box (en): type physical.\n";
  std::ofstream(dir / "bad.kb") << "rule r (en):\n  all B: [p(B)]\n  => q(C).\n";
  auto ok = cli({"check-kb", (dir / "ok.kb").string()});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "OK: 1 rules\n");
  auto bad = cli({"check-kb", (dir / "bad.kb").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"parse", "--lang", "fr", "x"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
  fs::remove_all(dir);
}

TEST(CliTest, Binary) {
  std::string cmd = std::string(PREPDIAG_CLI_PATH) + " check-kb " + PREPDIAG_DATA_DIR + "/builtin.kb";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[256] = {};
  std::string out;
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  int status = ::pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_EQ(out.rfind("OK: ", 0), 0u) << out;
}
