#pragma once

#include <optional>
#include <string>

#include "edgefaas/common.hpp"

namespace edgefaas::overlay {

/// Underlay address (real IP + UDP port), host byte order.
struct Endpoint {
    std::uint32_t ip = 0;
    std::uint16_t port = 0;

    static Endpoint parse(const std::string& ip_port);  // "a.b.c.d:port"
    std::string str() const;

    auto operator<=>(const Endpoint&) const = default;
};

class UdpSocket {
public:
    /// Binds to the given address; port 0 picks an ephemeral port.
    explicit UdpSocket(Endpoint bind_addr);
    ~UdpSocket();

    UdpSocket(const UdpSocket&) = delete;
    UdpSocket& operator=(const UdpSocket&) = delete;

    Endpoint local_endpoint() const { return local_; }

    void send_to(Endpoint dest, std::span<const std::uint8_t> data);

    /// Blocks up to timeout_ms; nullopt on timeout.
    std::optional<std::pair<Endpoint, Bytes>> recv_from(int timeout_ms);

private:
    int fd_ = -1;
    Endpoint local_;
};

Endpoint loopback_endpoint(std::uint16_t port = 0);

}  // namespace edgefaas::overlay
