#pragma once

#include <array>
#include <optional>

#include "pmm/bytes.hpp"
#include "pmm/crypto/hash.hpp"
#include "pmm/rng.hpp"

namespace pmm::crypto {

using SigPublicKey = std::array<uint8_t, 32>;
using SigSecretKey = std::array<uint8_t, 64>;
using Signature = std::array<uint8_t, 64>;

struct SigKeyPair {
    SigPublicKey pk;
    SigSecretKey sk;
};

/* Ed25519. Key material comes from the caller's seeded stream and the
 * scheme itself is deterministic, so signatures replay bit for bit. */
SigKeyPair sig_keygen(Rng& rng);
Signature sign(const SigSecretKey& sk, std::span<const uint8_t> msg);
bool verify_sig(const SigPublicKey& pk, std::span<const uint8_t> msg, const Signature& sig);

using BoxPublicKey = std::array<uint8_t, 32>;
using BoxSecretKey = std::array<uint8_t, 32>;

struct BoxKeyPair {
    BoxPublicKey pk;
    BoxSecretKey sk;
};

/* Authenticated public-key encryption (X25519 + XSalsa20-Poly1305).
 * Each ciphertext carries a fresh ephemeral public key and nonce, both
 * drawn from the caller's stream: encrypting the same plaintext twice
 * yields distinct ciphertexts while runs stay reproducible. */
BoxKeyPair box_keygen(Rng& rng);
Bytes pke_encrypt(const BoxPublicKey& to, std::span<const uint8_t> plaintext, Rng& rng);
std::optional<Bytes> pke_decrypt(const BoxKeyPair& self, std::span<const uint8_t> ciphertext);

}  // namespace pmm::crypto
