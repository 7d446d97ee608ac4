#include "edgefaas/overlay/mesh.hpp"

#include <chrono>

namespace edgefaas::overlay {

namespace {

Bytes ip_bytes(OverlayIp ip) {
    return Bytes{std::uint8_t((ip.addr >> 24) & 0xFF), std::uint8_t((ip.addr >> 16) & 0xFF),
                 std::uint8_t((ip.addr >> 8) & 0xFF), std::uint8_t(ip.addr & 0xFF)};
}

OverlayIp ip_from(std::span<const std::uint8_t> b) {
    return OverlayIp{(std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
                     (std::uint32_t(b[2]) << 8) | b[3]};
}

}  // namespace

MeshNode::MeshNode(NodeIdentity identity, Key32 ca_public, Endpoint lighthouse, MeshConfig config)
    : identity_(std::move(identity)),
      ca_public_(ca_public),
      lighthouse_(lighthouse),
      config_(config),
      socket_(loopback_endpoint(0)) {
    if (!identity_.consistent())
        throw std::invalid_argument("identity secret does not match certificate public key");
}

MeshNode::~MeshNode() {
    stop();
}

void MeshNode::start() {
    if (running_.exchange(true)) return;
    pump_ = std::thread([this] { pump_loop(); });
}

void MeshNode::stop() {
    if (!running_.exchange(false)) return;
    if (pump_.joinable()) pump_.join();
}

void MeshNode::register_with_lighthouse() {
    OverlayPacket p;
    p.ptype = PacketType::LhRegister;
    p.sender_ip = overlay_ip();
    p.counter = 0;
    p.payload = Lighthouse::encode_endpoints({socket_.local_endpoint()});
    socket_.send_to(lighthouse_, encode_packet(p));
    last_registration_ms_ = now_unix_millis();
}

void MeshNode::pump_loop() {
    while (running_.load()) {
        auto datagram = socket_.recv_from(10);
        std::uint64_t now = now_unix_millis();
        if (datagram) {
            try {
                OverlayPacket p = decode_packet(datagram->second);
                handle_packet(p, datagram->first);
            } catch (const PacketError&) {
            }
        }
        if (last_registration_ms_ != 0 && now - last_registration_ms_ >= config_.registration_interval_ms)
            register_with_lighthouse();
        std::vector<std::pair<Endpoint, OverlayPacket>> keepalives;
        {
            std::lock_guard lock(mutex_);
            for (auto& [ip, tunnel] : tunnels_) {
                if (auto ka = tunnel->keepalive_tick(now)) {
                    auto ep = peer_endpoints_.find(ip);
                    if (ep != peer_endpoints_.end()) keepalives.emplace_back(ep->second, *ka);
                }
            }
        }
        for (auto& [ep, packet] : keepalives) socket_.send_to(ep, encode_packet(packet));
    }
}

Bytes MeshNode::handshake_payload(const Key32& ephemeral_public) const {
    Bytes out(ephemeral_public.begin(), ephemeral_public.end());
    Bytes cert = identity_.certificate.serialize();
    out.insert(out.end(), cert.begin(), cert.end());
    return out;
}

void MeshNode::handle_packet(const OverlayPacket& p, Endpoint from) {
    switch (p.ptype) {
        case PacketType::HandshakeInit:
            handle_handshake_init(p, from);
            break;
        case PacketType::HandshakeResp:
            handle_handshake_resp(p, from);
            break;
        case PacketType::Data:
            handle_data(p, from);
            break;
        case PacketType::Keepalive: {
            std::lock_guard lock(mutex_);
            auto it = tunnels_.find(p.sender_ip);
            if (it != tunnels_.end()) it->second->note_peer_activity(now_unix_millis());
            break;
        }
        case PacketType::LhReply: {
            if (p.payload.size() < 5) return;
            OverlayIp target = ip_from(std::span(p.payload).subspan(0, 4));
            auto eps = Lighthouse::decode_endpoints(p.payload, 4);
            {
                std::lock_guard lock(mutex_);
                lighthouse_replies_[target] = std::move(eps);
            }
            cv_.notify_all();
            break;
        }
        default:
            break;
    }
}

void MeshNode::handle_handshake_init(const OverlayPacket& p, Endpoint from) {
    if (p.payload.size() < 32 + 1) return;
    Key32 peer_ephemeral;
    std::copy(p.payload.begin(), p.payload.begin() + 32, peer_ephemeral.begin());
    Certificate peer_cert;
    try {
        peer_cert = Certificate::deserialize(std::span(p.payload).subspan(32));
    } catch (const std::exception&) {
        return;
    }
    // A responder silently drops a bad certificate; the initiator times out.
    if (!verify_certificate(peer_cert, ca_public_, now_unix_seconds())) return;
    if (peer_cert.overlay_ip != p.sender_ip) return;

    EphemeralKeypair mine = generate_ephemeral();
    Key32 shared = x25519_shared(mine.secret, peer_ephemeral);
    TunnelKeys keys = derive_tunnel_keys(shared, overlay_ip(), peer_cert.overlay_ip);
    auto tunnel = std::make_shared<Tunnel>(overlay_ip(), peer_cert.overlay_ip, keys,
                                           now_unix_millis(), config_.tunnel);
    {
        std::lock_guard lock(mutex_);
        tunnels_[peer_cert.overlay_ip] = tunnel;
        peer_endpoints_[peer_cert.overlay_ip] = from;
    }
    OverlayPacket resp;
    resp.ptype = PacketType::HandshakeResp;
    resp.sender_ip = overlay_ip();
    resp.counter = 0;
    resp.payload = handshake_payload(mine.public_key);
    socket_.send_to(from, encode_packet(resp));
    cv_.notify_all();
}

void MeshNode::handle_handshake_resp(const OverlayPacket& p, Endpoint from) {
    if (p.payload.size() < 32 + 1) return;
    Key32 peer_ephemeral;
    std::copy(p.payload.begin(), p.payload.begin() + 32, peer_ephemeral.begin());
    Certificate peer_cert;
    try {
        peer_cert = Certificate::deserialize(std::span(p.payload).subspan(32));
    } catch (const std::exception&) {
        return;
    }
    std::lock_guard lock(mutex_);
    auto pending = pending_.find(p.sender_ip);
    if (pending == pending_.end()) return;
    if (!verify_certificate(peer_cert, ca_public_, now_unix_seconds()) ||
        peer_cert.overlay_ip != p.sender_ip) {
        pending->second.failed_cert = true;
        cv_.notify_all();
        return;
    }
    Key32 shared = x25519_shared(pending->second.ephemeral.secret, peer_ephemeral);
    TunnelKeys keys = derive_tunnel_keys(shared, overlay_ip(), p.sender_ip);
    tunnels_[p.sender_ip] = std::make_shared<Tunnel>(overlay_ip(), p.sender_ip, keys,
                                                     now_unix_millis(), config_.tunnel);
    peer_endpoints_[p.sender_ip] = from;
    pending_.erase(pending);
    cv_.notify_all();
}

void MeshNode::handle_data(const OverlayPacket& p, Endpoint) {
    std::shared_ptr<Tunnel> tunnel;
    DelaySampler* sampler = nullptr;
    {
        std::lock_guard lock(mutex_);
        auto it = tunnels_.find(p.sender_ip);
        if (it == tunnels_.end()) return;
        tunnel = it->second;
        auto em = link_emulation_.find(p.sender_ip);
        if (em != link_emulation_.end()) sampler = em->second.get();
    }
    Bytes plaintext;
    try {
        plaintext = tunnel->open(p);
    } catch (const AuthFail&) {
        auth_failures_.fetch_add(1);
        return;
    } catch (const Replay&) {
        replays_dropped_.fetch_add(1);
        return;
    } catch (const TunnelDead&) {
        return;
    }
    tunnel->note_peer_activity(now_unix_millis());
    ReceivedMessage msg{p.sender_ip, std::move(plaintext), 0.0};
    if (sampler) {
        msg.emulated_delay_ms = sampler->one_way();
        // Emulated delay is applied outside any tunnel lock.
        if (config_.sleep_on_emulated_delay)
            std::this_thread::sleep_for(
                std::chrono::microseconds(std::int64_t(msg.emulated_delay_ms * 1000)));
    }
    {
        std::lock_guard lock(inbox_mutex_);
        inbox_.push_back(std::move(msg));
    }
    inbox_cv_.notify_one();
}

std::shared_ptr<Tunnel> MeshNode::establish_tunnel(OverlayIp target) {
    using namespace std::chrono;
    {
        std::lock_guard lock(mutex_);
        auto it = tunnels_.find(target);
        if (it != tunnels_.end() && it->second->state() == TunnelState::Established)
            return it->second;
        lighthouse_replies_.erase(target);
    }
    // Exactly one LH_QUERY per establishment attempt.
    OverlayPacket query;
    query.ptype = PacketType::LhQuery;
    query.sender_ip = overlay_ip();
    query.counter = 0;
    query.payload = ip_bytes(target);
    socket_.send_to(lighthouse_, encode_packet(query));

    std::vector<Endpoint> endpoints;
    {
        std::unique_lock lock(mutex_);
        if (!cv_.wait_for(lock, milliseconds(config_.lighthouse_reply_timeout_ms),
                          [&] { return lighthouse_replies_.contains(target); }))
            throw PeerUnknown();
        endpoints = lighthouse_replies_[target];
        lighthouse_replies_.erase(target);
        if (endpoints.empty()) throw PeerUnknown();
        pending_[target] = PendingHandshake{generate_ephemeral(), false};
    }

    OverlayPacket init;
    init.ptype = PacketType::HandshakeInit;
    init.sender_ip = overlay_ip();
    init.counter = 0;
    {
        std::lock_guard lock(mutex_);
        init.payload = handshake_payload(pending_[target].ephemeral.public_key);
    }
    Bytes init_bytes = encode_packet(init);

    auto deadline = steady_clock::now() + milliseconds(config_.punch_timeout_ms);
    for (int probe = 0; probe < config_.punch_probes; ++probe) {
        // Simultaneous probes to every candidate endpoint (hole punch).
        for (const auto& ep : endpoints) socket_.send_to(ep, init_bytes);
        std::unique_lock lock(mutex_);
        bool done = cv_.wait_for(lock, milliseconds(config_.punch_spacing_ms), [&] {
            auto it = tunnels_.find(target);
            bool established = it != tunnels_.end() && it->second->state() == TunnelState::Established;
            auto pending = pending_.find(target);
            bool cert_failed = pending != pending_.end() && pending->second.failed_cert;
            return established || cert_failed;
        });
        if (done) {
            auto pending = pending_.find(target);
            if (pending != pending_.end() && pending->second.failed_cert) {
                pending_.erase(pending);
                throw CertInvalid();
            }
            return tunnels_[target];
        }
        if (steady_clock::now() >= deadline) break;
    }
    std::lock_guard lock(mutex_);
    pending_.erase(target);
    throw PunchTimeout();
}

void MeshNode::send(OverlayIp peer, std::span<const std::uint8_t> payload) {
    std::shared_ptr<Tunnel> tunnel;
    Endpoint ep;
    {
        std::lock_guard lock(mutex_);
        auto it = tunnels_.find(peer);
        if (it == tunnels_.end()) throw TunnelDead();
        tunnel = it->second;
        ep = peer_endpoints_.at(peer);
    }
    OverlayPacket p = tunnel->seal(payload, now_unix_millis());
    socket_.send_to(ep, encode_packet(p));
}

std::optional<ReceivedMessage> MeshNode::recv(int timeout_ms) {
    std::unique_lock lock(inbox_mutex_);
    if (!inbox_cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
                            [&] { return !inbox_.empty(); }))
        return std::nullopt;
    ReceivedMessage msg = std::move(inbox_.front());
    inbox_.pop_front();
    return msg;
}

std::shared_ptr<Tunnel> MeshNode::tunnel_to(OverlayIp peer) const {
    std::lock_guard lock(mutex_);
    auto it = tunnels_.find(peer);
    return it == tunnels_.end() ? nullptr : it->second;
}

void MeshNode::set_link_emulation(OverlayIp peer, LatencyProfile profile, std::uint64_t seed) {
    std::lock_guard lock(mutex_);
    link_emulation_[peer] = std::make_unique<DelaySampler>(profile, seed);
}

}  // namespace edgefaas::overlay
