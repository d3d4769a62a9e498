#include "pmm/crypto/merkle.hpp"

#include <sstream>
#include <stdexcept>

namespace pmm::crypto {

static Digest hash_pair(const Digest& left, const Digest& right) {
    Bytes buf;
    buf.reserve(65);
    buf.push_back(0x01);
    buf.insert(buf.end(), left.begin(), left.end());
    buf.insert(buf.end(), right.begin(), right.end());
    return sha256(buf);
}

MerkleTree::MerkleTree(const std::vector<Bytes>& items, const std::vector<Nonce>& nonces) {
    if (items.empty()) throw std::invalid_argument("MerkleTree: no items");
    if (items.size() != nonces.size())
        throw std::invalid_argument("MerkleTree: item/nonce count mismatch");

    std::vector<Digest> level;
    level.reserve(items.size());
    for (size_t i = 0; i < items.size(); i++) level.push_back(commit(nonces[i], items[i]));
    levels_.push_back(std::move(level));

    while (levels_.back().size() > 1) {
        const auto& below = levels_.back();
        std::vector<Digest> above;
        above.reserve((below.size() + 1) / 2);
        for (size_t i = 0; i < below.size(); i += 2) {
            const Digest& left = below[i];
            const Digest& right = (i + 1 < below.size()) ? below[i + 1] : below[i];
            above.push_back(hash_pair(left, right));
        }
        levels_.push_back(std::move(above));
    }
}

MerkleProof MerkleTree::prove(size_t index) const {
    if (index >= leaf_count()) throw std::out_of_range("MerkleTree::prove: bad index");
    MerkleProof proof;
    proof.leaf_index = index;
    size_t i = index;
    for (size_t lvl = 0; lvl + 1 < levels_.size(); lvl++) {
        const auto& row = levels_[lvl];
        size_t sib = (i % 2 == 0) ? i + 1 : i - 1;
        if (sib >= row.size()) sib = i;  // odd row: last node pairs with itself
        proof.steps.push_back({row[sib], (i % 2 == 0) ? Side::Right : Side::Left});
        i /= 2;
    }
    return proof;
}

size_t MerkleTree::find_leaf(const Digest& leaf_hash) const {
    const auto& row = levels_.front();
    for (size_t i = 0; i < row.size(); i++)
        if (row[i] == leaf_hash) return i;
    return npos;
}

Digest mcommit(const std::vector<Bytes>& items, const std::vector<Nonce>& nonces) {
    return MerkleTree(items, nonces).root();
}

bool merkle_verify_leaf(const Digest& root, const Digest& leaf_hash, const MerkleProof& proof) {
    if (proof.steps.size() > 64) return false;
    Digest acc = leaf_hash;
    for (const ProofStep& step : proof.steps) {
        switch (step.side) {
            case Side::Left: acc = hash_pair(step.sibling, acc); break;
            case Side::Right: acc = hash_pair(acc, step.sibling); break;
            default: return false;
        }
    }
    return acc == root;
}

bool merkle_verify(const Digest& root, std::span<const uint8_t> item, const Nonce& nonce,
                   const MerkleProof& proof) {
    return merkle_verify_leaf(root, commit(nonce, item), proof);
}

std::string MerkleProof::to_text() const {
    std::ostringstream out;
    out << "index " << leaf_index << "\n";
    for (const ProofStep& step : steps)
        out << to_hex(step.sibling) << " " << (step.side == Side::Left ? "L" : "R") << "\n";
    return out.str();
}

MerkleProof MerkleProof::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    MerkleProof proof;
    if (!(in >> tok) || tok != "index" || !(in >> proof.leaf_index))
        throw DecodeError("MerkleProof: missing index line");
    std::string hex_str, side;
    while (in >> hex_str >> side) {
        Bytes raw = from_hex(hex_str);
        if (raw.size() != 32) throw DecodeError("MerkleProof: sibling not 32 bytes");
        ProofStep step;
        std::copy(raw.begin(), raw.end(), step.sibling.begin());
        if (side == "L")
            step.side = Side::Left;
        else if (side == "R")
            step.side = Side::Right;
        else
            throw DecodeError("MerkleProof: side must be L or R");
        proof.steps.push_back(step);
    }
    return proof;
}

}  // namespace pmm::crypto
