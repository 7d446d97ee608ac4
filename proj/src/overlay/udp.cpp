#include "edgefaas/overlay/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace edgefaas::overlay {

Endpoint Endpoint::parse(const std::string& ip_port) {
    auto colon = ip_port.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected ip:port, got " + ip_port);
    in_addr addr{};
    if (inet_pton(AF_INET, ip_port.substr(0, colon).c_str(), &addr) != 1)
        throw std::invalid_argument("bad IPv4 address in " + ip_port);
    int port = std::stoi(ip_port.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("bad port in " + ip_port);
    return Endpoint{ntohl(addr.s_addr), std::uint16_t(port)};
}

std::string Endpoint::str() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%u.%u.%u.%u:%u", (ip >> 24) & 0xFF, (ip >> 16) & 0xFF,
                  (ip >> 8) & 0xFF, ip & 0xFF, port);
    return buf;
}

namespace {

sockaddr_in to_sockaddr(Endpoint ep) {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_addr.s_addr = htonl(ep.ip);
    sa.sin_port = htons(ep.port);
    return sa;
}

}  // namespace

UdpSocket::UdpSocket(Endpoint bind_addr) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket(): " + std::string(strerror(errno)));
    sockaddr_in sa = to_sockaddr(bind_addr);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
        int e = errno;
        ::close(fd_);
        throw std::runtime_error("bind(" + bind_addr.str() + "): " + strerror(e));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    local_ = Endpoint{ntohl(bound.sin_addr.s_addr), ntohs(bound.sin_port)};
}

UdpSocket::~UdpSocket() {
    if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::send_to(Endpoint dest, std::span<const std::uint8_t> data) {
    sockaddr_in sa = to_sockaddr(dest);
    ssize_t n = ::sendto(fd_, data.data(), data.size(), 0, reinterpret_cast<sockaddr*>(&sa), sizeof sa);
    if (n < 0) throw std::runtime_error("sendto(" + dest.str() + "): " + strerror(errno));
}

std::optional<std::pair<Endpoint, Bytes>> UdpSocket::recv_from(int timeout_ms) {
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc <= 0) return std::nullopt;
    Bytes buf(65536);
    sockaddr_in src{};
    socklen_t len = sizeof src;
    ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&src), &len);
    if (n < 0) return std::nullopt;
    buf.resize(std::size_t(n));
    return std::make_pair(Endpoint{ntohl(src.sin_addr.s_addr), ntohs(src.sin_port)}, std::move(buf));
}

Endpoint loopback_endpoint(std::uint16_t port) {
    return Endpoint{0x7F000001, port};
}

}  // namespace edgefaas::overlay
