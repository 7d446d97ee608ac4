#pragma once

#include <memory>
#include <thread>

#include "edgefaas/faas/gateway.hpp"

namespace httplib {
class Server;
}

namespace edgefaas::faas {

/// Wall-clock HTTP front end over the gateway:
///   POST /function/{name}  -> 200 {result, duration_ms, replica, node} | 504
///   GET  /system/functions -> deployment list
class HttpGateway {
public:
    explicit HttpGateway(Gateway& gateway, double default_timeout_ms = 60'000.0);
    ~HttpGateway();

    /// Binds 127.0.0.1 on a free port and serves in the background.
    int start();
    void stop();
    int port() const { return port_; }

private:
    Gateway& gateway_;
    double default_timeout_ms_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
};

}  // namespace edgefaas::faas
