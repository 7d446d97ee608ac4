#pragma once

#include <set>
#include <string>
#include <vector>

#include "edgefaas/overlay/crypto.hpp"

namespace edgefaas::overlay {

struct DuplicateOverlayIp : std::runtime_error {
    explicit DuplicateOverlayIp(const std::string& ip)
        : std::runtime_error("overlay ip already issued: " + ip) {}
};

struct Certificate {
    std::string subject_name;
    OverlayIp overlay_ip;
    std::vector<std::string> groups;
    std::uint64_t not_before = 0;
    std::uint64_t not_after = 0;
    Key32 public_key{};
    Signature ca_signature{};

    /// All fields except the signature, in canonical order. Signed by the CA.
    Bytes canonical_body() const;
    /// body + 64-byte signature, the on-disk and on-wire form.
    Bytes serialize() const;
    static Certificate deserialize(std::span<const std::uint8_t> bytes);

    bool operator==(const Certificate&) const = default;
};

bool verify_certificate(const Certificate& cert, const Key32& ca_public, std::uint64_t now);

class CertificateAuthority {
public:
    explicit CertificateAuthority(Key32 secret);
    static CertificateAuthority generate();

    const Key32& public_key() const { return public_key_; }

    Certificate issue(const std::string& subject, OverlayIp overlay_ip,
                      std::vector<std::string> groups, std::uint64_t validity_seconds,
                      const Key32& subject_public, std::uint64_t now);

private:
    Key32 secret_;
    Key32 public_key_;
    std::set<OverlayIp> issued_;
};

struct NodeIdentity {
    Certificate certificate;
    Key32 signing_secret{};

    bool consistent() const {
        return signing_public_from_secret(signing_secret) == certificate.public_key;
    }
};

/// Issue a full identity (keypair + certificate) in one step.
NodeIdentity issue_identity(CertificateAuthority& ca, const std::string& subject,
                            OverlayIp overlay_ip, std::vector<std::string> groups,
                            std::uint64_t validity_seconds, std::uint64_t now);

void save_bytes(const std::string& path, std::span<const std::uint8_t> bytes);
Bytes load_bytes(const std::string& path);

}  // namespace edgefaas::overlay
