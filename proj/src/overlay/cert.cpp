#include "edgefaas/overlay/cert.hpp"

#include <fstream>

namespace edgefaas::overlay {

namespace {

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(v & 0xFF);
    out.push_back((v >> 8) & 0xFF);
}

void put_u64(Bytes& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back((v >> (8 * i)) & 0xFF);
}

void put_str(Bytes& out, const std::string& s) {
    if (s.size() > 0xFFFF) throw std::invalid_argument("string too long for certificate");
    put_u16(out, std::uint16_t(s.size()));
    out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
    std::span<const std::uint8_t> buf;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw std::runtime_error("certificate truncated");
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = buf[pos] | (std::uint16_t(buf[pos + 1]) << 8);
        pos += 2;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    std::string str() {
        std::uint16_t n = u16();
        need(n);
        std::string s(buf.begin() + pos, buf.begin() + pos + n);
        pos += n;
        return s;
    }
};

}  // namespace

Bytes Certificate::canonical_body() const {
    Bytes out;
    put_str(out, subject_name);
    out.push_back((overlay_ip.addr >> 24) & 0xFF);
    out.push_back((overlay_ip.addr >> 16) & 0xFF);
    out.push_back((overlay_ip.addr >> 8) & 0xFF);
    out.push_back(overlay_ip.addr & 0xFF);
    put_u16(out, std::uint16_t(groups.size()));
    for (const auto& g : groups) put_str(out, g);
    put_u64(out, not_before);
    put_u64(out, not_after);
    out.insert(out.end(), public_key.begin(), public_key.end());
    return out;
}

Bytes Certificate::serialize() const {
    Bytes out = canonical_body();
    out.insert(out.end(), ca_signature.begin(), ca_signature.end());
    return out;
}

Certificate Certificate::deserialize(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    Certificate c;
    c.subject_name = r.str();
    r.need(4);
    c.overlay_ip.addr = (std::uint32_t(bytes[r.pos]) << 24) | (std::uint32_t(bytes[r.pos + 1]) << 16) |
                        (std::uint32_t(bytes[r.pos + 2]) << 8) | bytes[r.pos + 3];
    r.pos += 4;
    std::uint16_t n_groups = r.u16();
    for (std::uint16_t i = 0; i < n_groups; ++i) c.groups.push_back(r.str());
    c.not_before = r.u64();
    c.not_after = r.u64();
    r.need(32);
    std::copy(bytes.begin() + r.pos, bytes.begin() + r.pos + 32, c.public_key.begin());
    r.pos += 32;
    r.need(64);
    std::copy(bytes.begin() + r.pos, bytes.begin() + r.pos + 64, c.ca_signature.begin());
    r.pos += 64;
    if (r.pos != bytes.size()) throw std::runtime_error("trailing bytes after certificate");
    return c;
}

bool verify_certificate(const Certificate& cert, const Key32& ca_public, std::uint64_t now) {
    if (cert.not_before >= cert.not_after) return false;
    if (now < cert.not_before || now > cert.not_after) return false;
    return verify(ca_public, cert.canonical_body(), cert.ca_signature);
}

CertificateAuthority::CertificateAuthority(Key32 secret)
    : secret_(secret), public_key_(signing_public_from_secret(secret)) {}

CertificateAuthority CertificateAuthority::generate() {
    return CertificateAuthority(random_key());
}

Certificate CertificateAuthority::issue(const std::string& subject, OverlayIp overlay_ip,
                                        std::vector<std::string> groups,
                                        std::uint64_t validity_seconds, const Key32& subject_public,
                                        std::uint64_t now) {
    if (issued_.contains(overlay_ip)) throw DuplicateOverlayIp(overlay_ip.str());
    Certificate c;
    c.subject_name = subject;
    c.overlay_ip = overlay_ip;
    c.groups = std::move(groups);
    c.not_before = now;
    c.not_after = now + validity_seconds;
    c.public_key = subject_public;
    c.ca_signature = sign(secret_, c.canonical_body());
    issued_.insert(overlay_ip);
    return c;
}

NodeIdentity issue_identity(CertificateAuthority& ca, const std::string& subject,
                            OverlayIp overlay_ip, std::vector<std::string> groups,
                            std::uint64_t validity_seconds, std::uint64_t now) {
    NodeIdentity id;
    id.signing_secret = random_key();
    Key32 pub = signing_public_from_secret(id.signing_secret);
    id.certificate = ca.issue(subject, overlay_ip, std::move(groups), validity_seconds, pub, now);
    return id;
}

void save_bytes(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

Bytes load_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace edgefaas::overlay
