#include "http_gateway.hpp"

#include <httplib.h>

#include "xmrs/errors.hpp"
#include "xmrs/serialization.hpp"

namespace xmrs {

namespace {

using Json = nlohmann::json;

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Json::exception& e) {
    reply(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
  } catch (const InvalidArgument& e) {
    reply(res, 400, {{"error", e.what()}});
  } catch (const NotFound& e) {
    reply(res, 404, {{"error", e.what()}});
  } catch (const Conflict& e) {
    reply(res, 409, {{"error", e.what()}});
  } catch (const UnsolvableScenario& e) {
    reply(res, 422, {{"error", e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", e.what()}});
  }
}

Json foil_record_json(const FoilRecord& r, const ProblemDomain& d) {
  return {{"outcome", json::to_json(r.outcome, d)},
          {"factors", r.factors ? json::to_json(*r.factors, d) : Json(nullptr)},
          {"explanation", json::to_json(r.explanation)}};
}

}  // namespace

HttpGateway::HttpGateway(SessionStore& store) : store_(store), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpGateway::~HttpGateway() { stop(); }

int HttpGateway::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpGateway::serve() { return server_->listen_after_bind(); }

void HttpGateway::stop() {
  if (server_) server_->stop();
}

void HttpGateway::install_routes() {
  constexpr const char* kId = "([A-Za-z0-9_-]+)";
  auto& srv = *server_;

  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Methods", "GET, POST, PATCH, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/scenarios", [](const httplib::Request&, httplib::Response& res) {
    Json out = Json::array();
    for (const auto& s : shipped_scenarios()) {
      out.push_back({{"label", s.label},
                     {"error_tuple", {s.tuple.robot_errors, s.tuple.task_errors, s.tuple.speed_errors}},
                     {"seed", s.seed}});
    }
    for (const char* extra : {"debris-swap-speed", "debris-swap-combined"}) {
      const Scenario s = load_shipped_scenario(extra);
      out.push_back({{"label", s.label},
                     {"error_tuple", {s.error_tuple.robot_errors, s.error_tuple.task_errors, s.error_tuple.speed_errors}},
                     {"seed", s.seed}});
    }
    reply(res, 200, out);
  });

  srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = Json::parse(req.body);
      const Session s = store_.create(body.at("scenario").get<std::string>());
      reply(res, 201, session_to_json(s));
    });
  });

  srv.Get(std::string("/sessions/") + kId, [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, session_to_json(store_.get(req.matches[1]))); });
  });

  srv.Post(std::string("/sessions/") + kId + "/foils", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      const FoilQuery q = json::foil_query_from_json(Json::parse(req.body));
      const FoilRecord rec = store_.post_foil(id, q);
      reply(res, 200, foil_record_json(rec, store_.get(id).live_domain));
    });
  });

  srv.Patch(std::string("/sessions/") + kId + "/domain", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { reply(res, 200, session_to_json(store_.patch_domain(req.matches[1], Json::parse(req.body)))); });
  });

  srv.Post(std::string("/sessions/") + kId + "/judgment", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json body = Json::parse(req.body);
      reply(res, 200, session_to_json(store_.judge(req.matches[1], body.at("looks_correct").get<bool>())));
    });
  });

  srv.Post(std::string("/sessions/") + kId + "/finalize", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      const Json body = Json::parse(req.body);
      const SessionMetrics m = store_.finalize(id, session_status_from(body.at("verdict").get<std::string>()));
      reply(res, 200, json::to_json(m, store_.get(id).live_domain));
    });
  });

  srv.Get(std::string("/sessions/") + kId + "/metrics", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Session s = store_.get(req.matches[1]);
      reply(res, 200, json::to_json(session_metrics(s), s.live_domain));
    });
  });
}

}  // namespace xmrs
