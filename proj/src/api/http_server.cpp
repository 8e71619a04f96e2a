#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "openlex/api/api.hpp"
#include "openlex/error.hpp"

namespace openlex::api {

void serve(const Service& service, const std::string& host, int port) {
  httplib::Server svr;
  svr.set_pre_routing_handler([&](const httplib::Request& req, httplib::Response& res) {
    Response r = service.handle(req.method, req.target);
    res.status = r.status;
    res.set_header(kVersionHeader, std::to_string(r.snapshot_version));
    res.set_content(r.body, r.content_type + "; charset=utf-8");
    return httplib::Server::HandlerResponse::Handled;
  });
  if (!svr.bind_to_port(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  svr.listen_after_bind();
}

}  // namespace openlex::api
