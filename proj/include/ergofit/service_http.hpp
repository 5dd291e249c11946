#pragma once

#include <string>

#include <httplib.h>

#include "ergofit/service.hpp"

namespace ergofit::service {

/// Routes every request on `server` through `svc.handle`. `svc` must outlive the server.
inline void bind(httplib::Server& server, const AnalysisService& svc) {
  auto dispatch = [&svc](const httplib::Request& in, httplib::Response& out) {
    Request req{in.method, in.path, in.body, in.get_header_value("Accept"),
                in.has_param("format") ? in.get_param_value("format") : std::string()};
    const Response res = svc.handle(req);
    out.status = res.status;
    out.set_content(res.body, res.content_type);
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type, Accept"}});
  server.Get(".*", dispatch);
  server.Post(".*", dispatch);
  server.Options(".*", dispatch);
  server.Put(".*", dispatch);
  server.Delete(".*", dispatch);
}

}  // namespace ergofit::service
