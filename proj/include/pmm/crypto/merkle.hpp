#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pmm/crypto/hash.hpp"

namespace pmm::crypto {

enum class Side : uint8_t { Left = 0, Right = 1 };

struct ProofStep {
    Digest sibling;
    Side side;  // which side the sibling sits on when hashing upward
};

struct MerkleProof {
    size_t leaf_index = 0;
    std::vector<ProofStep> steps;

    std::string to_text() const;
    static MerkleProof from_text(const std::string& text);  // throws DecodeError
};

/* Binary hash tree over committed leaves. Level 0 holds
 * commit(nonce_i, item_i); each level above pairs neighbours with
 * H(0x01 || left || right), duplicating the last node when a level has
 * odd width. A single item degenerates to root == its commitment. */
class MerkleTree {
  public:
    MerkleTree(const std::vector<Bytes>& items, const std::vector<Nonce>& nonces);

    const Digest& root() const { return levels_.back().front(); }
    size_t leaf_count() const { return levels_.front().size(); }
    const Digest& leaf(size_t index) const { return levels_.front().at(index); }

    MerkleProof prove(size_t index) const;  // throws std::out_of_range

    /* Index of the leaf whose commitment equals `leaf_hash`, or npos. */
    static constexpr size_t npos = static_cast<size_t>(-1);
    size_t find_leaf(const Digest& leaf_hash) const;

  private:
    std::vector<std::vector<Digest>> levels_;
};

Digest mcommit(const std::vector<Bytes>& items, const std::vector<Nonce>& nonces);

/* Fold the proof from a known leaf commitment. Malformed or mismatched
 * proofs return false, never throw. */
bool merkle_verify_leaf(const Digest& root, const Digest& leaf_hash, const MerkleProof& proof);
bool merkle_verify(const Digest& root, std::span<const uint8_t> item, const Nonce& nonce,
                   const MerkleProof& proof);

}  // namespace pmm::crypto
