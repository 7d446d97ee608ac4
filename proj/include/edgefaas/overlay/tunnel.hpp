#pragma once

#include <atomic>
#include <mutex>
#include <optional>

#include "edgefaas/overlay/crypto.hpp"
#include "edgefaas/overlay/packet.hpp"

namespace edgefaas::overlay {

struct TunnelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AuthFail : TunnelError {
    AuthFail() : TunnelError("AEAD tag mismatch") {}
};
struct Replay : TunnelError {
    Replay() : TunnelError("counter rejected by replay window") {}
};
struct TunnelDead : TunnelError {
    TunnelDead() : TunnelError("tunnel is dead") {}
};

/// 64-entry sliding bitmap keyed on the highest counter seen.
class ReplayWindow {
public:
    /// True if the counter is fresh; records it. False for replays and
    /// counters older than highest - 63.
    bool check_and_update(std::uint64_t counter);

    std::uint64_t highest() const { return highest_; }

private:
    std::uint64_t highest_ = 0;
    std::uint64_t bitmap_ = 0;  // bit i set => (highest - i) seen
    bool any_seen_ = false;
};

enum class TunnelState { Negotiating, Established, Dead };

struct TunnelConfig {
    std::uint64_t keepalive_interval_ms = 10'000;
    int missed_keepalives_before_dead = 3;
};

/// Directional keys for one peer pair; the node with the lower overlay IP sends
/// with the first derived key.
struct TunnelKeys {
    Key32 send_key{};
    Key32 recv_key{};
};
TunnelKeys derive_tunnel_keys(const Key32& shared_secret, OverlayIp local, OverlayIp peer);

class Tunnel {
public:
    Tunnel(OverlayIp local_ip, OverlayIp peer_ip, TunnelKeys keys, std::uint64_t now_ms,
           TunnelConfig config = {});

    OverlayIp peer_ip() const { return peer_ip_; }
    OverlayIp local_ip() const { return local_ip_; }
    TunnelState state() const { return state_.load(); }
    const TunnelKeys& keys() const { return keys_; }

    /// Seal payload into a DATA packet. Nonce = sender_ip || counter.
    OverlayPacket seal(std::span<const std::uint8_t> payload);
    OverlayPacket seal(std::span<const std::uint8_t> payload, std::uint64_t now_ms);

    /// Authenticate + replay-check a DATA packet, return the plaintext.
    Bytes open(const OverlayPacket& packet);

    /// Record inbound traffic (data or keepalive) at `now`.
    void note_peer_activity(std::uint64_t now_ms);

    /// Emits a KEEPALIVE when we have been silent for a full interval; marks the
    /// tunnel dead after three silent intervals from the peer.
    std::optional<OverlayPacket> keepalive_tick(std::uint64_t now_ms);

    std::uint64_t send_counter() const { return send_counter_.load(); }
    std::uint64_t last_activity() const { return last_send_activity_.load(); }

    void mark_dead() { state_.store(TunnelState::Dead); }

private:
    OverlayIp local_ip_;
    OverlayIp peer_ip_;
    TunnelKeys keys_;
    TunnelConfig config_;
    std::atomic<TunnelState> state_{TunnelState::Established};
    std::atomic<std::uint64_t> send_counter_{0};
    std::atomic<std::uint64_t> last_send_activity_;
    std::atomic<std::uint64_t> last_recv_activity_;
    std::mutex recv_mutex_;
    ReplayWindow replay_;
};

Nonce12 make_nonce(OverlayIp sender, std::uint64_t counter);

}  // namespace edgefaas::overlay
