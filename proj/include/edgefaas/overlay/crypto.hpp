#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "edgefaas/common.hpp"

namespace edgefaas::overlay {

using Key32 = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;
using Nonce12 = std::array<std::uint8_t, 12>;

void crypto_init();

// Ed25519 over a 32-byte seed secret.
Key32 signing_public_from_secret(const Key32& secret);
Signature sign(const Key32& secret, std::span<const std::uint8_t> msg);
bool verify(const Key32& pub, std::span<const std::uint8_t> msg, const Signature& sig);

// X25519 ephemeral exchange.
struct EphemeralKeypair {
    Key32 secret;
    Key32 public_key;
};
EphemeralKeypair generate_ephemeral();
Key32 x25519_shared(const Key32& secret, const Key32& peer_public);

// HKDF-SHA256 (extract + expand), output length <= 8160.
Bytes hkdf_sha256(std::span<const std::uint8_t> ikm, std::span<const std::uint8_t> salt,
                  std::span<const std::uint8_t> info, std::size_t out_len);

// AES-256-GCM. open() returns false on tag mismatch.
Bytes aead_seal(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> plaintext);
bool aead_open(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> frame,
               Bytes& plaintext_out);

Key32 random_key();

}  // namespace edgefaas::overlay
