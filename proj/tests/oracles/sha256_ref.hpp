#pragma once

/* Reference hashing for the crypto tests, built on OpenSSL so the
 * expected values come from a code base unrelated to the library's
 * libsodium path. The tree recomputation below follows the structural
 * definition directly (pair up a row, duplicate a trailing odd node)
 * and deliberately shares no code with the library's tree builder. */

#include <openssl/sha.h>

#include <array>
#include <cstdint>
#include <vector>

namespace oracle {

using Digest = std::array<uint8_t, 32>;

inline Digest ref_sha256(const std::vector<uint8_t>& data) {
    Digest out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

inline Digest ref_leaf(const std::array<uint8_t, 32>& nonce, const std::vector<uint8_t>& item) {
    std::vector<uint8_t> buf;
    buf.push_back(0x00);
    buf.insert(buf.end(), nonce.begin(), nonce.end());
    buf.insert(buf.end(), item.begin(), item.end());
    return ref_sha256(buf);
}

inline Digest ref_node(const Digest& left, const Digest& right) {
    std::vector<uint8_t> buf;
    buf.push_back(0x01);
    buf.insert(buf.end(), left.begin(), left.end());
    buf.insert(buf.end(), right.begin(), right.end());
    return ref_sha256(buf);
}

inline Digest ref_root(std::vector<Digest> row) {
    while (row.size() > 1) {
        std::vector<Digest> next;
        for (size_t i = 0; i < row.size(); i += 2) {
            Digest right = (i + 1 < row.size()) ? row[i + 1] : row[i];
            next.push_back(ref_node(row[i], right));
        }
        row = next;
    }
    return row.front();
}

}  // namespace oracle
