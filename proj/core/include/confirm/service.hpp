#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "confirm/error.hpp"
#include "confirm/scenario_store.hpp"

namespace confirm::service {

struct Request {
  std::string method;  // "GET", "POST", "PUT"
  std::string path;    // e.g. "/v1/etz/decompose"
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

struct ServiceOptions {
  /// Scenario endpoints answer NotFound when no store is configured.
  std::optional<std::filesystem::path> store_dir;
  /// Worker threads for Monte-Carlo work; 0 uses the hardware concurrency.
  /// Responses do not depend on this value.
  unsigned workers = 0;
  /// Simulation requests needing more normal draws than this are refused.
  std::uint64_t max_draws = 10'000'000;
};

/// HTTP status for an error code:
/// Parse 400; Domain, Decomposition, Infeasible, NotApplicable 422;
/// NotFound 404; Conflict 409; TooLarge 413; Bracket, Internal 500.
int http_status(ErrorCode code);

/// {"error": {"code": ..., "message": ..., "field_path": ... | null}}
std::string error_body(ErrorCode code, const std::string& message, const std::string& field_path = {});

/// Transport-independent /v1 router. Computation endpoints are pure
/// functions of the request body; the scenario store is the only state.
/// Safe to call from several threads at once.
class Service {
 public:
  explicit Service(ServiceOptions options = {});

  Response handle(const Request& request) const;

  const ServiceOptions& options() const { return options_; }

 private:
  Response route(const Request& request) const;

  ServiceOptions options_;
  std::unique_ptr<io::ScenarioStore> store_;
};

}  // namespace confirm::service
