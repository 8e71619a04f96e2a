#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "openlex/mcp/mcp.hpp"

namespace openlex::mcp {

void serve_http(const Server& server, const std::string& host, int port) {
  httplib::Server svr;
  svr.Post("/mcp", [&](const httplib::Request& req, httplib::Response& res) {
    auto reply = server.handle_text(req.body);
    if (reply.empty()) {
      res.status = 202;
      return;
    }
    res.set_content(reply, "application/json");
  });
  if (!svr.bind_to_port(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  svr.listen_after_bind();
}

}  // namespace openlex::mcp
