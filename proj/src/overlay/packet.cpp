#include "edgefaas/overlay/packet.hpp"

namespace edgefaas::overlay {

Bytes encode_packet(const OverlayPacket& p) {
    if (p.payload.size() > kMaxPayload) throw PayloadTooLarge();
    Bytes out;
    out.reserve(kHeaderSize + p.payload.size());
    out.push_back(kPacketMagic);
    out.push_back(kProtocolVersion);
    out.push_back(std::uint8_t(p.ptype));
    out.push_back((p.sender_ip.addr >> 24) & 0xFF);
    out.push_back((p.sender_ip.addr >> 16) & 0xFF);
    out.push_back((p.sender_ip.addr >> 8) & 0xFF);
    out.push_back(p.sender_ip.addr & 0xFF);
    for (int i = 7; i >= 0; --i) out.push_back((p.counter >> (8 * i)) & 0xFF);
    out.insert(out.end(), p.payload.begin(), p.payload.end());
    return out;
}

OverlayPacket decode_packet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kHeaderSize) throw Truncated();
    if (bytes[0] != kPacketMagic) throw BadMagic();
    if (bytes[1] != kProtocolVersion) throw BadVersion();
    if (bytes[2] < 1 || bytes[2] > 7) throw UnknownType();
    OverlayPacket p;
    p.ptype = PacketType(bytes[2]);
    p.sender_ip.addr = (std::uint32_t(bytes[3]) << 24) | (std::uint32_t(bytes[4]) << 16) |
                       (std::uint32_t(bytes[5]) << 8) | bytes[6];
    p.counter = 0;
    for (int i = 0; i < 8; ++i) p.counter = (p.counter << 8) | bytes[7 + i];
    p.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
    return p;
}

}  // namespace edgefaas::overlay
