#pragma once

#include "edgefaas/common.hpp"

namespace edgefaas::overlay {

inline constexpr std::uint8_t kPacketMagic = 0xE6;
inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::size_t kHeaderSize = 15;
inline constexpr std::size_t kMaxPayload = 65000;

enum class PacketType : std::uint8_t {
    HandshakeInit = 1,
    HandshakeResp = 2,
    Data = 3,
    Keepalive = 4,
    LhQuery = 5,
    LhReply = 6,
    LhRegister = 7,
};

struct PacketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadMagic : PacketError {
    BadMagic() : PacketError("bad magic byte") {}
};
struct BadVersion : PacketError {
    BadVersion() : PacketError("unsupported protocol version") {}
};
struct UnknownType : PacketError {
    UnknownType() : PacketError("unknown packet type") {}
};
struct Truncated : PacketError {
    Truncated() : PacketError("packet shorter than header") {}
};
struct PayloadTooLarge : PacketError {
    PayloadTooLarge() : PacketError("payload exceeds 65000 bytes") {}
};

struct OverlayPacket {
    PacketType ptype = PacketType::Keepalive;
    OverlayIp sender_ip;
    std::uint64_t counter = 0;
    Bytes payload;

    bool operator==(const OverlayPacket&) const = default;
};

Bytes encode_packet(const OverlayPacket& p);
OverlayPacket decode_packet(std::span<const std::uint8_t> bytes);

}  // namespace edgefaas::overlay
