#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pmm/bytes.hpp"

namespace pmm {

/* Deterministic random stream (ChaCha20 keystream keyed off a seed).
 * Everything nondeterministic in the simulation draws from one of these,
 * so a (scenario, seed) pair replays bit-identically on any platform.
 * std::mt19937 + std::uniform_* would not give that guarantee across
 * standard libraries, hence the hand-rolled distributions. */
class Rng {
  public:
    explicit Rng(uint64_t seed);

    void fill(std::span<uint8_t> out);
    Bytes bytes(size_t n);
    std::array<uint8_t, 32> block32();

    uint64_t u64();
    uint64_t below(uint64_t bound);              // uniform in [0, bound), bound >= 1
    int64_t int_range(int64_t lo, int64_t hi);   // uniform inclusive
    double real();                               // uniform in [0, 1), 53-bit
    bool chance(double p);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; i--) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /* First k of a Fisher-Yates pass over {0..n-1}: a uniform sample
     * without replacement, in sampled order. */
    std::vector<uint32_t> sample_without_replacement(uint32_t n, uint32_t k);

    Rng derive(const std::string& label) const;

  private:
    Rng() = default;
    void refill();

    std::array<uint8_t, 32> key_{};
    std::array<uint8_t, 64> buf_{};
    uint64_t counter_ = 0;
    size_t pos_ = 64;
};

}  // namespace pmm
