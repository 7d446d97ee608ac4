#include "edgefaas/overlay/lighthouse.hpp"

#include <algorithm>

namespace edgefaas::overlay {

Lighthouse::Lighthouse(Endpoint listen, LighthouseConfig config)
    : socket_(listen), config_(config) {}

Lighthouse::~Lighthouse() {
    stop();
}

void Lighthouse::start() {
    if (running_.exchange(true)) return;
    thread_ = std::thread([this] { serve_loop(); });
}

void Lighthouse::stop() {
    if (!running_.exchange(false)) return;
    if (thread_.joinable()) thread_.join();
}

void Lighthouse::serve_loop() {
    while (running_.load()) {
        auto datagram = socket_.recv_from(20);
        if (!datagram) continue;
        try {
            OverlayPacket p = decode_packet(datagram->second);
            handle_packet(p, datagram->first);
        } catch (const PacketError&) {
            // malformed datagrams are dropped
        }
    }
}

Bytes Lighthouse::encode_endpoints(const std::vector<Endpoint>& eps) {
    Bytes out;
    out.push_back(std::uint8_t(eps.size()));
    for (const auto& ep : eps) {
        out.push_back((ep.ip >> 24) & 0xFF);
        out.push_back((ep.ip >> 16) & 0xFF);
        out.push_back((ep.ip >> 8) & 0xFF);
        out.push_back(ep.ip & 0xFF);
        out.push_back((ep.port >> 8) & 0xFF);
        out.push_back(ep.port & 0xFF);
    }
    return out;
}

std::vector<Endpoint> Lighthouse::decode_endpoints(std::span<const std::uint8_t> payload,
                                                   std::size_t offset) {
    if (payload.size() < offset + 1) throw Truncated();
    std::size_t count = payload[offset];
    if (payload.size() < offset + 1 + count * 6) throw Truncated();
    std::vector<Endpoint> eps;
    std::size_t pos = offset + 1;
    for (std::size_t i = 0; i < count; ++i, pos += 6) {
        Endpoint ep;
        ep.ip = (std::uint32_t(payload[pos]) << 24) | (std::uint32_t(payload[pos + 1]) << 16) |
                (std::uint32_t(payload[pos + 2]) << 8) | payload[pos + 3];
        ep.port = std::uint16_t((payload[pos + 4] << 8) | payload[pos + 5]);
        eps.push_back(ep);
    }
    return eps;
}

void Lighthouse::handle_packet(const OverlayPacket& p, Endpoint from) {
    type_counts_[std::uint8_t(p.ptype) & 7].fetch_add(1);
    std::uint64_t now = now_unix_millis();
    switch (p.ptype) {
        case PacketType::LhRegister: {
            std::vector<Endpoint> eps = decode_endpoints(p.payload);
            // The observed source endpoint is authoritative even behind NAT.
            if (std::find(eps.begin(), eps.end(), from) == eps.end()) eps.push_back(from);
            std::lock_guard lock(mutex_);
            registry_[p.sender_ip] = LighthouseRecord{p.sender_ip, std::move(eps), now};
            break;
        }
        case PacketType::LhQuery: {
            if (p.payload.size() < 4) return;
            OverlayIp target{(std::uint32_t(p.payload[0]) << 24) |
                             (std::uint32_t(p.payload[1]) << 16) |
                             (std::uint32_t(p.payload[2]) << 8) | p.payload[3]};
            Bytes body(p.payload.begin(), p.payload.begin() + 4);
            {
                std::lock_guard lock(mutex_);
                expire_locked(now);
                auto it = registry_.find(target);
                if (it != registry_.end()) {
                    Bytes eps = encode_endpoints(it->second.endpoints);
                    body.insert(body.end(), eps.begin(), eps.end());
                } else {
                    body.push_back(0);
                }
            }
            OverlayPacket reply;
            reply.ptype = PacketType::LhReply;
            reply.sender_ip = OverlayIp{};
            reply.counter = p.counter;
            reply.payload = std::move(body);
            socket_.send_to(from, encode_packet(reply));
            break;
        }
        default:
            // DATA / handshake traffic is never relayed; only counted.
            break;
    }
}

void Lighthouse::expire_locked(std::uint64_t now_ms) {
    for (auto it = registry_.begin(); it != registry_.end();) {
        if (now_ms - it->second.last_seen_ms > config_.record_ttl_ms)
            it = registry_.erase(it);
        else
            ++it;
    }
}

std::vector<LighthouseRecord> Lighthouse::records() const {
    std::lock_guard lock(mutex_);
    std::vector<LighthouseRecord> out;
    for (const auto& [ip, rec] : registry_) out.push_back(rec);
    return out;
}

std::uint64_t Lighthouse::packets_seen(PacketType t) const {
    return type_counts_[std::uint8_t(t) & 7].load();
}

std::uint64_t Lighthouse::total_packets() const {
    std::uint64_t sum = 0;
    for (const auto& c : type_counts_) sum += c.load();
    return sum;
}

}  // namespace edgefaas::overlay
