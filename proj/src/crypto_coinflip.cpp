#include "pmm/crypto/coinflip.hpp"

#include <sodium.h>

namespace pmm::crypto {

Digest coin_commit(const CoinSeed& seed) {
    ByteWriter w;
    w.lp_string("pmm.coin.v1");
    w.raw(seed);
    return sha256(w.bytes());
}

bool coin_open(const Digest& commitment, const CoinSeed& seed) {
    Digest expect = coin_commit(seed);
    return sodium_memcmp(expect.data(), commitment.data(), expect.size()) == 0;
}

Digest coin_output(const CoinSeed& seed_a, const CoinSeed& seed_b) {
    Bytes buf;
    buf.insert(buf.end(), seed_a.begin(), seed_a.end());
    buf.insert(buf.end(), seed_b.begin(), seed_b.end());
    return sha256(buf);
}

CoinFlip coin_adjudicate(const Digest& commitment_a, const Digest& commitment_b,
                         const CoinSeed& reveal_a, const CoinSeed& reveal_b) {
    CoinFlip flip;
    flip.commitment_a = commitment_a;
    flip.commitment_b = commitment_b;
    flip.reveal_a = reveal_a;
    flip.reveal_b = reveal_b;
    if (!coin_open(commitment_a, reveal_a)) {
        flip.cheater = 0;
        return flip;
    }
    if (!coin_open(commitment_b, reveal_b)) {
        flip.cheater = 1;
        return flip;
    }
    flip.ok = true;
    flip.bits = coin_output(reveal_a, reveal_b);
    return flip;
}

CoinFlip coin_flip(Rng& party_a, Rng& party_b) {
    CoinSeed sa = party_a.block32();
    CoinSeed sb = party_b.block32();
    return coin_adjudicate(coin_commit(sa), coin_commit(sb), sa, sb);
}

uint64_t coin_index(const Digest& bits, uint64_t n) {
    if (n == 0) throw std::invalid_argument("coin_index: n == 0");
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(bits[i]) << (8 * i);
    return v % n;
}

}  // namespace pmm::crypto
