#include "edgefaas/overlay/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>

namespace edgefaas::overlay {

void crypto_init() {
    static std::once_flag once;
    std::call_once(once, [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
        if (!crypto_aead_aes256gcm_is_available())
            throw std::runtime_error("AES-256-GCM not supported on this CPU");
    });
}

Key32 signing_public_from_secret(const Key32& secret) {
    crypto_init();
    unsigned char pk[crypto_sign_PUBLICKEYBYTES];
    unsigned char sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, secret.data());
    Key32 out;
    std::memcpy(out.data(), pk, 32);
    return out;
}

Signature sign(const Key32& secret, std::span<const std::uint8_t> msg) {
    crypto_init();
    unsigned char pk[crypto_sign_PUBLICKEYBYTES];
    unsigned char sk[crypto_sign_SECRETKEYBYTES];
    crypto_sign_seed_keypair(pk, sk, secret.data());
    Signature sig;
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sk);
    return sig;
}

bool verify(const Key32& pub, std::span<const std::uint8_t> msg, const Signature& sig) {
    crypto_init();
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), pub.data()) == 0;
}

EphemeralKeypair generate_ephemeral() {
    crypto_init();
    EphemeralKeypair kp;
    randombytes_buf(kp.secret.data(), kp.secret.size());
    crypto_scalarmult_base(kp.public_key.data(), kp.secret.data());
    return kp;
}

Key32 x25519_shared(const Key32& secret, const Key32& peer_public) {
    crypto_init();
    Key32 shared;
    if (crypto_scalarmult(shared.data(), secret.data(), peer_public.data()) != 0)
        throw std::runtime_error("x25519: degenerate peer public key");
    return shared;
}

namespace {

using Hmac = std::array<std::uint8_t, crypto_auth_hmacsha256_BYTES>;

Hmac hmac_sha256(std::span<const std::uint8_t> key, std::span<const std::uint8_t> data) {
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    Hmac out;
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

}  // namespace

Bytes hkdf_sha256(std::span<const std::uint8_t> ikm, std::span<const std::uint8_t> salt,
                  std::span<const std::uint8_t> info, std::size_t out_len) {
    crypto_init();
    if (out_len > 255 * 32) throw std::invalid_argument("hkdf: output too long");
    // RFC 5869: absent salt behaves as 32 zero bytes.
    Hmac prk;
    if (salt.empty()) {
        const std::uint8_t zeros[32] = {};
        prk = hmac_sha256(std::span<const std::uint8_t>(zeros, 32), ikm);
    } else {
        prk = hmac_sha256(salt, ikm);
    }
    Bytes okm;
    okm.reserve(out_len);
    Bytes block;
    std::uint8_t counter = 1;
    while (okm.size() < out_len) {
        Bytes input(block);
        input.insert(input.end(), info.begin(), info.end());
        input.push_back(counter++);
        Hmac t = hmac_sha256(prk, input);
        block.assign(t.begin(), t.end());
        std::size_t take = std::min<std::size_t>(block.size(), out_len - okm.size());
        okm.insert(okm.end(), block.begin(), block.begin() + take);
    }
    return okm;
}

Bytes aead_seal(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> plaintext) {
    crypto_init();
    Bytes out(plaintext.size() + crypto_aead_aes256gcm_ABYTES);
    unsigned long long out_len = 0;
    crypto_aead_aes256gcm_encrypt(out.data(), &out_len, plaintext.data(), plaintext.size(),
                                  nullptr, 0, nullptr, nonce.data(), key.data());
    out.resize(out_len);
    return out;
}

bool aead_open(const Key32& key, const Nonce12& nonce, std::span<const std::uint8_t> frame,
               Bytes& plaintext_out) {
    crypto_init();
    if (frame.size() < crypto_aead_aes256gcm_ABYTES) return false;
    plaintext_out.resize(frame.size() - crypto_aead_aes256gcm_ABYTES);
    unsigned long long out_len = 0;
    if (crypto_aead_aes256gcm_decrypt(plaintext_out.data(), &out_len, nullptr, frame.data(),
                                      frame.size(), nullptr, 0, nonce.data(), key.data()) != 0)
        return false;
    plaintext_out.resize(out_len);
    return true;
}

Key32 random_key() {
    crypto_init();
    Key32 k;
    randombytes_buf(k.data(), k.size());
    return k;
}

}  // namespace edgefaas::overlay
