#pragma once

#include <memory>
#include <string>

#include "confirm/service.hpp"

namespace confirm::service {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  ServiceOptions service;
};

/// Reads CONFIRM_HOST, CONFIRM_PORT, CONFIRM_STORE_DIR and CONFIRM_WORKERS,
/// falling back to the ServerConfig defaults (store directory "scenarios").
/// Malformed values throw ParseError naming the variable.
ServerConfig server_config_from_env();

/// HTTP/1.1 binding of a Service. Every request under /v1 is forwarded to
/// Service::handle unchanged.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);

  /// Serves until stop() is called. Requires a successful bind().
  bool run();

  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace confirm::service
