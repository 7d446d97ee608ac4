#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include "edgefaas/overlay/packet.hpp"
#include "edgefaas/overlay/udp.hpp"

namespace edgefaas::overlay {

struct LighthouseRecord {
    OverlayIp overlay_ip;
    std::vector<Endpoint> endpoints;
    std::uint64_t last_seen_ms = 0;
};

struct LighthouseConfig {
    std::uint64_t registration_interval_ms = 15'000;
    /// Records expire after 3 missed registrations.
    std::uint64_t record_ttl_ms = 45'000;
};

/// Beacon daemon: stores overlay-ip -> underlay endpoints, answers queries.
/// Never relays data; it counts every packet type it sees so tests can assert
/// the direct-path property.
class Lighthouse {
public:
    explicit Lighthouse(Endpoint listen, LighthouseConfig config = {});
    ~Lighthouse();

    Endpoint endpoint() const { return socket_.local_endpoint(); }

    void start();
    void stop();

    std::vector<LighthouseRecord> records() const;
    std::uint64_t packets_seen(PacketType t) const;
    std::uint64_t total_packets() const;

    /// Registry payload codecs, shared with the node side.
    static Bytes encode_endpoints(const std::vector<Endpoint>& eps);
    static std::vector<Endpoint> decode_endpoints(std::span<const std::uint8_t> payload,
                                                  std::size_t offset = 0);

private:
    void serve_loop();
    void handle_packet(const OverlayPacket& p, Endpoint from);
    void expire_locked(std::uint64_t now_ms);

    UdpSocket socket_;
    LighthouseConfig config_;
    std::thread thread_;
    std::atomic<bool> running_{false};
    mutable std::mutex mutex_;
    std::map<OverlayIp, LighthouseRecord> registry_;
    std::array<std::atomic<std::uint64_t>, 8> type_counts_{};
};

}  // namespace edgefaas::overlay
