#include "pmm/crypto/hash.hpp"

#include <sodium.h>

namespace pmm::crypto {

Digest sha256(std::span<const uint8_t> data) {
    Digest out;
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Digest commit(const Nonce& nonce, std::span<const uint8_t> item) {
    Bytes buf;
    buf.reserve(1 + nonce.size() + item.size());
    buf.push_back(0x00);
    buf.insert(buf.end(), nonce.begin(), nonce.end());
    buf.insert(buf.end(), item.begin(), item.end());
    return sha256(buf);
}

std::string hex(const Digest& d) { return to_hex(d); }

Digest digest_from_hex(const std::string& s) {
    Bytes raw = from_hex(s);
    if (raw.size() != 32) throw DecodeError("digest_from_hex: want 32 bytes");
    Digest d;
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

}  // namespace pmm::crypto
