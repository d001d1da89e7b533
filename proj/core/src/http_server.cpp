#include "confirm/http_server.hpp"

#include <cstdlib>
#include <string_view>

#include <httplib.h>

namespace confirm::service {

namespace {

int env_int(const char* name, int fallback, int lo, int hi) {
  const char* raw = std::getenv(name);
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < lo || v > hi) throw ParseError(name, std::string("invalid value '") + raw + "'");
  return static_cast<int>(v);
}

}  // namespace

ServerConfig server_config_from_env() {
  ServerConfig cfg;
  if (const char* host = std::getenv("CONFIRM_HOST"); host && *host) cfg.host = host;
  cfg.port = env_int("CONFIRM_PORT", cfg.port, 0, 65535);
  const char* store = std::getenv("CONFIRM_STORE_DIR");
  cfg.service.store_dir = (store && *store) ? std::filesystem::path(store) : std::filesystem::path("scenarios");
  cfg.service.workers = static_cast<unsigned>(env_int("CONFIRM_WORKERS", 0, 0, 4096));
  return cfg;
}

struct HttpServer::Impl {
  const Service* service;
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  impl_->service = &service;
  const auto forward = [this](const httplib::Request& in, httplib::Response& out) {
    const Response r = impl_->service->handle({in.method, in.path, in.body});
    out.status = r.status;
    out.set_content(r.body, r.content_type);
  };
  impl_->server.Get(R"(/v1/.*)", forward);
  impl_->server.Post(R"(/v1/.*)", forward);
  impl_->server.Put(R"(/v1/.*)", forward);
  impl_->server.set_payload_max_length(16u << 20);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace confirm::service
