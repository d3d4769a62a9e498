#pragma once

#include "pmm/crypto/hash.hpp"
#include "pmm/rng.hpp"

namespace pmm::crypto {

/* Two-party commit-reveal coin flip. Both sides commit to a fresh seed,
 * exchange commitments, then reveal; the joint output hashes both seeds,
 * so neither side can steer it after seeing the other's commitment. A
 * reveal that fails to open its commitment aborts the flip and names the
 * offender. */

using CoinSeed = std::array<uint8_t, 32>;

Digest coin_commit(const CoinSeed& seed);
bool coin_open(const Digest& commitment, const CoinSeed& seed);
Digest coin_output(const CoinSeed& seed_a, const CoinSeed& seed_b);

struct CoinFlip {
    bool ok = false;
    Digest bits{};   // valid when ok
    int cheater = -1;  // 0 or 1 when a reveal mismatched its commitment
    Digest commitment_a{}, commitment_b{};
    CoinSeed reveal_a{}, reveal_b{};
};

/* Honest execution; each party's seed comes from its own stream. */
CoinFlip coin_flip(Rng& party_a, Rng& party_b);

/* Adjudicate a possibly dishonest run from its transcript pieces. */
CoinFlip coin_adjudicate(const Digest& commitment_a, const Digest& commitment_b,
                         const CoinSeed& reveal_a, const CoinSeed& reveal_b);

/* Map flip output to an index in [0, n). */
uint64_t coin_index(const Digest& bits, uint64_t n);

}  // namespace pmm::crypto
