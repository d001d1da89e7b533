#include <csignal>
#include <iostream>
#include <string>

#include "confirm/http_server.hpp"

namespace {

confirm::service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

constexpr const char* kUsage =
    "Usage: confirm_server\n"
    "Serves the /v1 API. Configuration comes from the environment:\n"
    "  CONFIRM_HOST       bind address (127.0.0.1)\n"
    "  CONFIRM_PORT       port (8080)\n"
    "  CONFIRM_STORE_DIR  scenario store directory (scenarios)\n"
    "  CONFIRM_WORKERS    worker threads per request (hardware concurrency)\n";

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    const std::string arg = argv[1];
    const bool help = arg == "-h" || arg == "--help";
    (help ? std::cout : std::cerr) << kUsage;
    return help ? 0 : 2;
  }
  try {
    const confirm::service::ServerConfig cfg = confirm::service::server_config_from_env();
    const confirm::service::Service service(cfg.service);
    confirm::service::HttpServer server(service);
    const int port = server.bind(cfg.host, cfg.port);
    if (port < 0) {
      std::cerr << "cannot bind " << cfg.host << ":" << cfg.port << "\n";
      return 1;
    }
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << cfg.host << ":" << port << " (store "
              << cfg.service.store_dir->string() << ")" << std::endl;
    const bool ok = server.run();
    g_server = nullptr;
    return ok ? 0 : 1;
  } catch (const confirm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
