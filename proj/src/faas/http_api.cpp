#include "edgefaas/faas/http_api.hpp"

#include "httplib.h"
#include "json.hpp"

namespace edgefaas::faas {

using nlohmann::json;

HttpGateway::HttpGateway(Gateway& gateway, double default_timeout_ms)
    : gateway_(gateway),
      default_timeout_ms_(default_timeout_ms),
      server_(std::make_unique<httplib::Server>()) {
    server_->Post(R"(/function/([A-Za-z0-9_-]+))",
                  [this](const httplib::Request& req, httplib::Response& res) {
                      const std::string name = req.matches[1];
                      double timeout = default_timeout_ms_;
                      if (req.has_param("timeout_ms")) timeout = std::stod(req.get_param_value("timeout_ms"));
                      Bytes body(req.body.begin(), req.body.end());
                      try {
                          auto result = gateway_.invoke(name, body, timeout,
                                                        double(now_unix_millis()));
                          if (result.record.outcome == Outcome::Timeout) {
                              res.status = 504;
                              res.set_content(json{{"error", "timeout"}}.dump(),
                                              "application/json");
                              return;
                          }
                          json out = {
                              {"result", json::parse(std::string(result.body.begin(), result.body.end()))},
                              {"duration_ms", result.record.response_ms()},
                              {"replica", result.record.replica_id},
                              {"node", result.record.node},
                          };
                          res.set_content(out.dump(), "application/json");
                      } catch (const UnknownFunction&) {
                          res.status = 404;
                          res.set_content(json{{"error", "unknown function"}}.dump(),
                                          "application/json");
                      }
                  });
    server_->Get("/system/functions", [this](const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        for (const auto& f : gateway_.list_functions()) {
            out.push_back({{"name", f.name},
                           {"workload", f.kind == WorkloadKind::Sentiment ? "sentiment"
                                                                          : "heavy-classify"},
                           {"work_units", f.work_units},
                           {"min_replicas", f.min_replicas},
                           {"max_replicas", f.max_replicas},
                           {"replicas", gateway_.live_replicas(f.name)}});
        }
        res.set_content(out.dump(), "application/json");
    });
}

HttpGateway::~HttpGateway() {
    stop();
}

int HttpGateway::start() {
    port_ = server_->bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void HttpGateway::stop() {
    if (server_ && server_->is_running()) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace edgefaas::faas
