#include "edgefaas/common.hpp"

#include <chrono>
#include <cstdio>

namespace edgefaas {

OverlayIp OverlayIp::parse(const std::string& dotted) {
    unsigned a, b, c, d;
    char tail;
    if (std::sscanf(dotted.c_str(), "%u.%u.%u.%u%c", &a, &b, &c, &d, &tail) != 4 ||
        a > 255 || b > 255 || c > 255 || d > 255)
        throw std::invalid_argument("bad IPv4 literal: " + dotted);
    return OverlayIp(std::uint8_t(a), std::uint8_t(b), std::uint8_t(c), std::uint8_t(d));
}

std::string OverlayIp::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", (addr >> 24) & 0xFF, (addr >> 16) & 0xFF,
                  (addr >> 8) & 0xFF, addr & 0xFF);
    return buf;
}

std::uint64_t now_unix_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::uint64_t now_unix_millis() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace edgefaas
