#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgefaas {

using Bytes = std::vector<std::uint8_t>;

/// Overlay IPv4 address, stored host-order for comparisons, serialized big-endian.
struct OverlayIp {
    std::uint32_t addr = 0;

    constexpr OverlayIp() = default;
    constexpr explicit OverlayIp(std::uint32_t host_order) : addr(host_order) {}
    constexpr OverlayIp(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d)
        : addr((std::uint32_t(a) << 24) | (std::uint32_t(b) << 16) | (std::uint32_t(c) << 8) | d) {}

    static OverlayIp parse(const std::string& dotted);
    std::string str() const;

    auto operator<=>(const OverlayIp&) const = default;
};

std::uint64_t now_unix_seconds();
std::uint64_t now_unix_millis();

}  // namespace edgefaas
