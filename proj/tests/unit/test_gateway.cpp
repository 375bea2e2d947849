#include <doctest.h>
#include <httplib.h>

#include <thread>

#include "http_gateway.hpp"
#include "temp_dir.hpp"
#include "xmrs/serialization.hpp"
#include "xmrs/session.hpp"

using namespace xmrs;
using Json = nlohmann::json;

namespace {

struct Fixture {
  xmrs::testing::TempDir tmp;
  SessionStore store{tmp.path()};
  HttpGateway gateway{store};
  int port = gateway.bind("127.0.0.1", 0);
  std::thread server{[this] { gateway.serve(); }};
  httplib::Client client{"127.0.0.1", port};

  Fixture() {
    REQUIRE(port > 0);
    for (int i = 0; i < 200 && !client.Get("/scenarios"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Fixture() {
    gateway.stop();
    server.join();
  }

  httplib::Result post(const std::string& path, const Json& body) {
    return client.Post(path, body.dump(), "application/json");
  }
  httplib::Result patch(const std::string& path, const Json& body) {
    return client.Patch(path, body.dump(), "application/json");
  }
};

const Json kD1ToDumptruck = Json::parse(
    R"([{"robot":"ambulance","task":"D1","op":"unassign"},{"robot":"dumptruck","task":"D1","op":"assign"}])");

}  // namespace

TEST_CASE("scenarios are listed") {
  Fixture f;
  auto res = f.client.Get("/scenarios");
  REQUIRE(res);
  CHECK(res->status == 200);
  const Json j = Json::parse(res->body);
  REQUIRE(j.size() == 8);
  CHECK(j[1].at("label") == "scenario-2");
  CHECK(j[1].at("error_tuple") == Json::array({3, 1, 1}));
  CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
}

TEST_CASE("a full session over HTTP") {
  Fixture f;
  auto created = f.post("/sessions", {{"scenario", "debris-swap-speed"}});
  REQUIRE(created);
  REQUIRE(created->status == 201);
  const std::string id = Json::parse(created->body).at("id");
  const std::string base = "/sessions/" + id;

  auto got = f.client.Get(base.c_str());
  REQUIRE(got);
  CHECK(got->status == 200);
  CHECK(Json::parse(got->body).at("status") == "open");

  auto judged = f.post(base + "/judgment", {{"looks_correct", true}});
  REQUIRE(judged);
  CHECK(judged->status == 200);

  auto foil = f.post(base + "/foils", kD1ToDumptruck);
  REQUIRE(foil);
  REQUIRE(foil->status == 200);
  const Json fj = Json::parse(foil->body);
  CHECK(fj.at("outcome").at("feasible") == true);
  CHECK(fj.at("explanation").at("plain_text").get<std::string>().find("154% more time") != std::string::npos);

  auto bad_foil = f.post(base + "/foils",
                         Json::parse(R"([{"robot":"ambulance","task":"H1","op":"unassign"},
                                        {"robot":"dumptruck","task":"H1","op":"assign"}])"));
  REQUIRE(bad_foil);
  CHECK(bad_foil->status == 200);
  CHECK(Json::parse(bad_foil->body).at("outcome").at("cause").at("kind") == "trait-violation");

  auto patched = f.patch(base + "/domain", {{"site", "phi[ambulance]"}, {"value", 8}});
  REQUIRE(patched);
  CHECK(patched->status == 200);
  CHECK(Json::parse(patched->body).at("repair_log").size() == 1);

  auto metrics = f.client.Get((base + "/metrics").c_str());
  REQUIRE(metrics);
  CHECK(metrics->status == 200);
  CHECK(Json::parse(metrics->body).at("remaining").empty());

  auto fin = f.post(base + "/finalize", {{"verdict", "declared-correct"}});
  REQUIRE(fin);
  CHECK(fin->status == 200);
  CHECK(Json::parse(fin->body).at("rse_pct") == 0.0);

  auto again = f.post(base + "/finalize", {{"verdict", "gave-up"}});
  REQUIRE(again);
  CHECK(again->status == 409);
  CHECK(Json::parse(again->body).contains("error"));
  auto late_patch = f.patch(base + "/domain", {{"site", "phi[ambulance]"}, {"value", 9}});
  REQUIRE(late_patch);
  CHECK(late_patch->status == 409);
}

TEST_CASE("gateway error mapping") {
  Fixture f;
  auto unknown = f.post("/sessions", {{"scenario", "nope"}});
  REQUIRE(unknown);
  CHECK(unknown->status == 404);
  auto missing = f.client.Get("/sessions/s424242");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto garbage = f.client.Post("/sessions", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);

  const std::string id = Json::parse(f.post("/sessions", {{"scenario", "scenario-1"}})->body).at("id");
  auto empty_foil = f.post("/sessions/" + id + "/foils", Json::array());
  REQUIRE(empty_foil);
  CHECK(empty_foil->status == 400);
  auto bad_site = f.patch("/sessions/" + id + "/domain", {{"site", "phi[helicopter]"}, {"value", 3}});
  REQUIRE(bad_site);
  CHECK(bad_site->status == 400);
  auto bad_value = f.patch("/sessions/" + id + "/domain", {{"site", "phi[dumptruck]"}, {"value", -3}});
  REQUIRE(bad_value);
  CHECK(bad_value->status == 400);
  auto bad_verdict = f.post("/sessions/" + id + "/finalize", {{"verdict", "open"}});
  REQUIRE(bad_verdict);
  CHECK(bad_verdict->status == 400);
}

TEST_CASE("an edit that breaks solvability is stored and reported") {
  Fixture f;
  const std::string id = Json::parse(f.post("/sessions", {{"scenario", "debris-swap-speed"}})->body).at("id");
  auto patched = f.patch("/sessions/" + id + "/domain", {{"site", "Ystar[H1][carrying_capacity]"}, {"value", 1e6}});
  REQUIRE(patched);
  CHECK(patched->status == 200);
  const Json j = Json::parse(patched->body);
  CHECK(j.at("current_solution").is_null());
  CHECK(j.at("solve_error").is_string());
  auto foil = f.post("/sessions/" + id + "/foils", kD1ToDumptruck);
  REQUIRE(foil);
  CHECK(foil->status == 409);
}
