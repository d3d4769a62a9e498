#include "pmm/rng.hpp"

#include <sodium.h>

#include "pmm/crypto/hash.hpp"

namespace pmm {

Rng::Rng(uint64_t seed) {
    ByteWriter w;
    w.lp_string("pmm.rng.v1");
    w.u64(seed);
    key_ = crypto::sha256(w.bytes());
}

void Rng::refill() {
    std::array<uint8_t, 8> nonce{};
    for (int i = 0; i < 8; i++) nonce[i] = static_cast<uint8_t>(counter_ >> (8 * i));
    std::array<uint8_t, 64> zero{};
    crypto_stream_chacha20_xor(buf_.data(), zero.data(), zero.size(), nonce.data(), key_.data());
    counter_++;
    pos_ = 0;
}

void Rng::fill(std::span<uint8_t> out) {
    for (uint8_t& b : out) {
        if (pos_ == 64) refill();
        b = buf_[pos_++];
    }
}

Bytes Rng::bytes(size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::array<uint8_t, 32> Rng::block32() {
    std::array<uint8_t, 32> out;
    fill(out);
    return out;
}

uint64_t Rng::u64() {
    std::array<uint8_t, 8> b;
    fill(b);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

uint64_t Rng::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound 0");
    // Rejection sampling keeps the draw exactly uniform.
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = u64();
    } while (v >= limit);
    return v % bound;
}

int64_t Rng::int_range(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("Rng::int_range: empty range");
    uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    if (span == 0) return static_cast<int64_t>(u64());  // full 64-bit range
    return static_cast<int64_t>(static_cast<uint64_t>(lo) + below(span));
}

double Rng::real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

bool Rng::chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return real() < p;
}

std::vector<uint32_t> Rng::sample_without_replacement(uint32_t n, uint32_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<uint32_t> pool(n);
    for (uint32_t i = 0; i < n; i++) pool[i] = i;
    std::vector<uint32_t> out;
    out.reserve(k);
    for (uint32_t i = 0; i < k; i++) {
        uint32_t j = i + static_cast<uint32_t>(below(n - i));
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
    }
    return out;
}

Rng Rng::derive(const std::string& label) const {
    ByteWriter w;
    w.raw(key_);
    w.lp_string(label);
    Rng child;
    child.key_ = crypto::sha256(w.bytes());
    return child;
}

}  // namespace pmm
