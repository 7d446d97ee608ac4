#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <thread>

#include "edgefaas/overlay/cert.hpp"
#include "edgefaas/overlay/latency.hpp"
#include "edgefaas/overlay/lighthouse.hpp"
#include "edgefaas/overlay/tunnel.hpp"

namespace edgefaas::overlay {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CertInvalid : MeshError {
    CertInvalid() : MeshError("peer certificate failed verification") {}
};
struct PunchTimeout : MeshError {
    PunchTimeout() : MeshError("no handshake response within the retry schedule") {}
};
struct PeerUnknown : MeshError {
    PeerUnknown() : MeshError("lighthouse has no record for the target") {}
};

struct MeshConfig {
    int punch_probes = 5;
    std::uint64_t punch_spacing_ms = 200;
    std::uint64_t punch_timeout_ms = 2'000;
    std::uint64_t lighthouse_reply_timeout_ms = 1'000;
    std::uint64_t registration_interval_ms = 15'000;
    TunnelConfig tunnel;
    /// When true, recv() sleeps for the emulated one-way delay before delivery.
    bool sleep_on_emulated_delay = false;
};

struct ReceivedMessage {
    OverlayIp from;
    Bytes payload;
    /// Sampled one-way delay applied to this delivery (0 without emulation).
    double emulated_delay_ms = 0.0;
};

/// One overlay endpoint: a UDP socket plus its tunnels, handshake state machine
/// and keep-alive timers, pumped by a background thread.
class MeshNode {
public:
    MeshNode(NodeIdentity identity, Key32 ca_public, Endpoint lighthouse, MeshConfig config = {});
    ~MeshNode();

    OverlayIp overlay_ip() const { return identity_.certificate.overlay_ip; }
    Endpoint underlay_endpoint() const { return socket_.local_endpoint(); }

    void start();
    void stop();

    void register_with_lighthouse();

    /// Query the lighthouse, hole-punch every returned endpoint, and finish the
    /// handshake. Idempotent for an already-established peer.
    std::shared_ptr<Tunnel> establish_tunnel(OverlayIp target);

    /// Seal and transmit over the peer tunnel.
    void send(OverlayIp peer, std::span<const std::uint8_t> payload);

    /// Pop the next delivered message; nullopt on timeout.
    std::optional<ReceivedMessage> recv(int timeout_ms);

    std::shared_ptr<Tunnel> tunnel_to(OverlayIp peer) const;

    /// Emulate the link to `peer` with the given round-trip profile.
    void set_link_emulation(OverlayIp peer, LatencyProfile profile, std::uint64_t seed);

    std::uint64_t auth_failures() const { return auth_failures_.load(); }
    std::uint64_t replays_dropped() const { return replays_dropped_.load(); }

private:
    void pump_loop();
    void handle_packet(const OverlayPacket& p, Endpoint from);
    void handle_handshake_init(const OverlayPacket& p, Endpoint from);
    void handle_handshake_resp(const OverlayPacket& p, Endpoint from);
    void handle_data(const OverlayPacket& p, Endpoint from);
    Bytes handshake_payload(const Key32& ephemeral_public) const;

    struct PendingHandshake {
        EphemeralKeypair ephemeral;
        bool failed_cert = false;
    };

    NodeIdentity identity_;
    Key32 ca_public_;
    Endpoint lighthouse_;
    MeshConfig config_;
    UdpSocket socket_;
    std::thread pump_;
    std::atomic<bool> running_{false};

    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::map<OverlayIp, std::shared_ptr<Tunnel>> tunnels_;
    std::map<OverlayIp, Endpoint> peer_endpoints_;
    std::map<OverlayIp, PendingHandshake> pending_;
    std::map<OverlayIp, std::vector<Endpoint>> lighthouse_replies_;
    std::map<OverlayIp, std::unique_ptr<DelaySampler>> link_emulation_;

    std::mutex inbox_mutex_;
    std::condition_variable inbox_cv_;
    std::deque<ReceivedMessage> inbox_;

    std::atomic<std::uint64_t> auth_failures_{0};
    std::atomic<std::uint64_t> replays_dropped_{0};
    std::uint64_t last_registration_ms_ = 0;
};

}  // namespace edgefaas::overlay
