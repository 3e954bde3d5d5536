#include "alertlens/service/server.hpp"

#include <iostream>

#include "alertlens/core/error.hpp"
#include "httplib.h"

namespace alertlens {

struct HttpServer::Impl {
  explicit Impl(Api& a) : api(a) {}
  Api& api;
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>(api)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.params[k] = v;
    r.body = req.body;
    r.session_id = req.get_header_value(std::string(kSessionHeader));
    const ApiResponse out = impl_->api.handle(r);
    res.status = out.status;
    if (!out.session_id.empty()) res.set_header(std::string(kSessionHeader), out.session_id);
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(R"(/api/.*)", forward);
  impl_->server.Post(R"(/api/.*)", forward);
  if (const auto& dir = api.config().static_dir) impl_->server.set_mount_point("/", dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error(ErrorCode::kIo, "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

void serve(Api& api) {
  HttpServer server(api);
  const auto& c = api.config();
  const int port = server.bind(c.host, c.port);
  std::cerr << "alertlens listening on http://" << c.host << ":" << port << " (" << api.store().size()
            << " alerts)\n";
  server.listen();
}

}  // namespace alertlens
