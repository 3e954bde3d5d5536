#pragma once

#include <memory>
#include <string>

#include "alertlens/service/api.hpp"

namespace alertlens {

// HTTP front for Api. Requests under /api/ are forwarded; everything else
// is served from the configured static directory, if any.
class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error(kIo).
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// bind + listen using api.config().
void serve(Api& api);

}  // namespace alertlens
