#include "prepdiag/http.hpp"

#include <iostream>

#include "prepdiag/errors.hpp"

namespace prepdiag {

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json; charset=utf-8");
}

}  // namespace

void install_routes(httplib::Server& server, Service& service) {
  auto get = [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    reply(res, service.handle("GET", req.path, "", query));
  };
  auto post = [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.handle("POST", req.path, req.body));
  };
  server.Get("/api/exercises", get);
  server.Get("/api/transliteration", get);
  server.Get("/api/compare", get);
  server.Post("/api/parse", post);
  server.Post("/api/model", post);
  server.Post("/api/diagnose", post);
  server.Post("/api/why", post);
}

void serve(Service& service, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, service);
  if (!server.bind_to_port(host, port)) {
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
  std::cout << "listening on " << host << ":" << port << std::endl;
  server.listen_after_bind();
}

}  // namespace prepdiag
