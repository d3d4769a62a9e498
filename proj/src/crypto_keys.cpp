#include "pmm/crypto/keys.hpp"

#include <sodium.h>

namespace pmm::crypto {

SigKeyPair sig_keygen(Rng& rng) {
    auto seed = rng.block32();
    SigKeyPair kp;
    crypto_sign_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
    return kp;
}

Signature sign(const SigSecretKey& sk, std::span<const uint8_t> msg) {
    Signature sig;
    crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), sk.data());
    return sig;
}

bool verify_sig(const SigPublicKey& pk, std::span<const uint8_t> msg, const Signature& sig) {
    return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), pk.data()) == 0;
}

BoxKeyPair box_keygen(Rng& rng) {
    auto seed = rng.block32();
    BoxKeyPair kp;
    crypto_box_seed_keypair(kp.pk.data(), kp.sk.data(), seed.data());
    return kp;
}

/* Wire layout: ephemeral pk (32) || nonce (24) || box ciphertext. */
Bytes pke_encrypt(const BoxPublicKey& to, std::span<const uint8_t> plaintext, Rng& rng) {
    BoxKeyPair eph = box_keygen(rng);
    std::array<uint8_t, crypto_box_NONCEBYTES> nonce;
    rng.fill(nonce);

    Bytes out;
    out.resize(32 + nonce.size() + plaintext.size() + crypto_box_MACBYTES);
    std::copy(eph.pk.begin(), eph.pk.end(), out.begin());
    std::copy(nonce.begin(), nonce.end(), out.begin() + 32);
    if (crypto_box_easy(out.data() + 32 + nonce.size(), plaintext.data(), plaintext.size(),
                        nonce.data(), to.data(), eph.sk.data()) != 0)
        throw std::runtime_error("pke_encrypt: crypto_box_easy failed");
    return out;
}

std::optional<Bytes> pke_decrypt(const BoxKeyPair& self, std::span<const uint8_t> ciphertext) {
    constexpr size_t kHeader = 32 + crypto_box_NONCEBYTES;
    if (ciphertext.size() < kHeader + crypto_box_MACBYTES) return std::nullopt;

    BoxPublicKey eph;
    std::copy(ciphertext.begin(), ciphertext.begin() + 32, eph.begin());
    const uint8_t* nonce = ciphertext.data() + 32;
    const uint8_t* body = ciphertext.data() + kHeader;
    size_t body_len = ciphertext.size() - kHeader;

    Bytes plain(body_len - crypto_box_MACBYTES);
    if (crypto_box_open_easy(plain.data(), body, body_len, nonce, eph.data(), self.sk.data()) != 0)
        return std::nullopt;
    return plain;
}

}  // namespace pmm::crypto
