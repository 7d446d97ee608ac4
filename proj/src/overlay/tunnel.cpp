#include "edgefaas/overlay/tunnel.hpp"

#include <algorithm>

namespace edgefaas::overlay {

bool ReplayWindow::check_and_update(std::uint64_t counter) {
    if (!any_seen_) {
        any_seen_ = true;
        highest_ = counter;
        bitmap_ = 1;
        return true;
    }
    if (counter > highest_) {
        std::uint64_t shift = counter - highest_;
        bitmap_ = shift >= 64 ? 0 : bitmap_ << shift;
        bitmap_ |= 1;
        highest_ = counter;
        return true;
    }
    std::uint64_t age = highest_ - counter;
    if (age >= 64) return false;
    std::uint64_t bit = 1ULL << age;
    if (bitmap_ & bit) return false;
    bitmap_ |= bit;
    return true;
}

Nonce12 make_nonce(OverlayIp sender, std::uint64_t counter) {
    Nonce12 n;
    n[0] = (sender.addr >> 24) & 0xFF;
    n[1] = (sender.addr >> 16) & 0xFF;
    n[2] = (sender.addr >> 8) & 0xFF;
    n[3] = sender.addr & 0xFF;
    for (int i = 0; i < 8; ++i) n[4 + i] = (counter >> (8 * (7 - i))) & 0xFF;
    return n;
}

TunnelKeys derive_tunnel_keys(const Key32& shared_secret, OverlayIp local, OverlayIp peer) {
    OverlayIp lo = std::min(local, peer);
    OverlayIp hi = std::max(local, peer);
    std::uint8_t info[8] = {
        std::uint8_t((lo.addr >> 24) & 0xFF), std::uint8_t((lo.addr >> 16) & 0xFF),
        std::uint8_t((lo.addr >> 8) & 0xFF),  std::uint8_t(lo.addr & 0xFF),
        std::uint8_t((hi.addr >> 24) & 0xFF), std::uint8_t((hi.addr >> 16) & 0xFF),
        std::uint8_t((hi.addr >> 8) & 0xFF),  std::uint8_t(hi.addr & 0xFF),
    };
    static constexpr char kSalt[] = "edgefaas-overlay-v1";
    Bytes okm = hkdf_sha256(shared_secret,
                            std::span(reinterpret_cast<const std::uint8_t*>(kSalt), sizeof kSalt - 1),
                            info, 64);
    TunnelKeys keys;
    // First derived key belongs to the lower-IP sender.
    if (local == lo) {
        std::copy(okm.begin(), okm.begin() + 32, keys.send_key.begin());
        std::copy(okm.begin() + 32, okm.end(), keys.recv_key.begin());
    } else {
        std::copy(okm.begin(), okm.begin() + 32, keys.recv_key.begin());
        std::copy(okm.begin() + 32, okm.end(), keys.send_key.begin());
    }
    return keys;
}

Tunnel::Tunnel(OverlayIp local_ip, OverlayIp peer_ip, TunnelKeys keys, std::uint64_t now_ms,
               TunnelConfig config)
    : local_ip_(local_ip),
      peer_ip_(peer_ip),
      keys_(keys),
      config_(config),
      last_send_activity_(now_ms),
      last_recv_activity_(now_ms) {}

OverlayPacket Tunnel::seal(std::span<const std::uint8_t> payload) {
    return seal(payload, last_send_activity_.load());
}

OverlayPacket Tunnel::seal(std::span<const std::uint8_t> payload, std::uint64_t now_ms) {
    if (state_.load() == TunnelState::Dead) throw TunnelDead();
    last_send_activity_.store(std::max(last_send_activity_.load(), now_ms));
    std::uint64_t counter = send_counter_.fetch_add(1) + 1;
    OverlayPacket p;
    p.ptype = PacketType::Data;
    p.sender_ip = local_ip_;
    p.counter = counter;
    p.payload = aead_seal(keys_.send_key, make_nonce(local_ip_, counter), payload);
    return p;
}

Bytes Tunnel::open(const OverlayPacket& packet) {
    if (state_.load() == TunnelState::Dead) throw TunnelDead();
    Bytes plaintext;
    if (!aead_open(keys_.recv_key, make_nonce(packet.sender_ip, packet.counter), packet.payload,
                   plaintext))
        throw AuthFail();
    {
        std::lock_guard lock(recv_mutex_);
        if (!replay_.check_and_update(packet.counter)) throw Replay();
    }
    return plaintext;
}

void Tunnel::note_peer_activity(std::uint64_t now_ms) {
    last_recv_activity_.store(now_ms);
}

std::optional<OverlayPacket> Tunnel::keepalive_tick(std::uint64_t now_ms) {
    if (state_.load() != TunnelState::Established) return std::nullopt;
    std::uint64_t silent_for =
        now_ms > last_recv_activity_.load() ? now_ms - last_recv_activity_.load() : 0;
    if (silent_for >=
        config_.keepalive_interval_ms * std::uint64_t(config_.missed_keepalives_before_dead)) {
        state_.store(TunnelState::Dead);
        return std::nullopt;
    }
    std::uint64_t idle = now_ms > last_send_activity_.load() ? now_ms - last_send_activity_.load() : 0;
    if (idle < config_.keepalive_interval_ms) return std::nullopt;
    last_send_activity_.store(now_ms);
    OverlayPacket p;
    p.ptype = PacketType::Keepalive;
    p.sender_ip = local_ip_;
    p.counter = send_counter_.fetch_add(1) + 1;
    return p;
}

}  // namespace edgefaas::overlay
