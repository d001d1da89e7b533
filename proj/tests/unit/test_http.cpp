#include <catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "confirm/error.hpp"
#include "confirm/http_server.hpp"
#include "oracles.hpp"

using Catch::Approx;
using json = nlohmann::json;
using namespace confirm;
using namespace confirm::service;
namespace fs = std::filesystem;

namespace {

/// A live server on an ephemeral port, torn down with the fixture.
struct LiveServer {
  fs::path store;
  Service service;
  HttpServer server;
  int port = -1;
  std::thread thread;

  static ServiceOptions options(const fs::path& dir) {
    ServiceOptions o;
    o.store_dir = dir;
    o.workers = 1;
    return o;
  }

  explicit LiveServer(fs::path dir) : store(std::move(dir)), service(options(store)), server(service) {
    port = server.bind("127.0.0.1", 0);
    if (port > 0) {
      thread = std::thread([this] { server.run(); });
      server.wait_until_ready();
    }
  }
  ~LiveServer() {
    server.stop();
    if (thread.joinable()) thread.join();
    std::error_code ec;
    fs::remove_all(store, ec);
  }
};

fs::path temp_store() {
  return fs::temp_directory_path() / ("confirm_http_" + std::to_string(::getpid()));
}

}  // namespace

TEST_CASE("HTTP binding serves the /v1 API", "[http]") {
  LiveServer live(temp_store());
  REQUIRE(live.port > 0);
  httplib::Client client("127.0.0.1", live.port);

  SECTION("decompose") {
    const auto res = client.Post("/v1/etz/decompose",
                                 R"({"var_baseline": 64.580, "var_milestone": 135.389, "var_change": 92.365})",
                                 "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type").find("application/json") == 0);
    const json j = json::parse(res->body);
    CHECK(j["var_e"].get<double>() == Approx(10.778).margin(1e-9));
  }
  SECTION("error statuses and bodies") {
    const auto bad = client.Post("/v1/etz/decompose", "{", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(json::parse(bad->body)["error"]["code"] == "ParseError");

    const auto missing = client.Get("/v1/scenarios/none");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body)["error"]["code"] == "NotFound");

    const auto wrong = client.Get("/v1/etz/decompose");
    REQUIRE(wrong);
    CHECK(wrong->status == 405);
  }
  SECTION("scenario lifecycle") {
    const std::string doc = oracle::read_file(oracle::data_path("expedition3_scenario.json"));
    const auto put = client.Put("/v1/scenarios/expedition3-iadl", doc, "application/json");
    REQUIRE(put);
    CHECK(put->status == 201);
    const auto again = client.Put("/v1/scenarios/expedition3-iadl", doc, "application/json");
    REQUIRE(again);
    CHECK(again->status == 409);

    const auto list = client.Get("/v1/scenarios");
    REQUIRE(list);
    CHECK(json::parse(list->body)["scenarios"].size() == 1);

    const auto assess = client.Post("/v1/cbq/assess", R"({"scenario_id": "expedition3-iadl"})", "application/json");
    REQUIRE(assess);
    CHECK(assess->status == 200);
    const json j = json::parse(assess->body);
    CHECK(j["cbq"].get<double>() == Approx(-0.10646).margin(1e-4));
    CHECK(j["transition_recommended"] == false);

    const auto direct = live.service.handle({"POST", "/v1/cbq/assess", R"({"scenario_id": "expedition3-iadl"})"});
    CHECK(direct.body == assess->body);
  }
}

TEST_CASE("server configuration from the environment", "[http][config]") {
  ::unsetenv("CONFIRM_HOST");
  ::unsetenv("CONFIRM_PORT");
  ::unsetenv("CONFIRM_STORE_DIR");
  ::unsetenv("CONFIRM_WORKERS");
  ServerConfig d = server_config_from_env();
  CHECK(d.host == "127.0.0.1");
  CHECK(d.port == 8080);
  REQUIRE(d.service.store_dir.has_value());
  CHECK(*d.service.store_dir == fs::path("scenarios"));

  ::setenv("CONFIRM_PORT", "9123", 1);
  ::setenv("CONFIRM_WORKERS", "3", 1);
  ::setenv("CONFIRM_STORE_DIR", "/tmp/somewhere", 1);
  ServerConfig c = server_config_from_env();
  CHECK(c.port == 9123);
  CHECK(c.service.workers == 3);
  CHECK(*c.service.store_dir == fs::path("/tmp/somewhere"));

  ::setenv("CONFIRM_PORT", "eighty", 1);
  try {
    server_config_from_env();
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.field_path() == "CONFIRM_PORT");
  }
  ::unsetenv("CONFIRM_PORT");
  ::unsetenv("CONFIRM_WORKERS");
  ::unsetenv("CONFIRM_STORE_DIR");
}
