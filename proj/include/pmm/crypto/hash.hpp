#pragma once

#include <array>
#include <span>
#include <string>

#include "pmm/bytes.hpp"

namespace pmm::crypto {

using Digest = std::array<uint8_t, 32>;
using Nonce = std::array<uint8_t, 32>;

Digest sha256(std::span<const uint8_t> data);

/* Hiding commitment to an item under a fresh nonce. The input is domain
 * prefixed (0x00) so a commitment can never collide with an interior
 * Merkle node, whose preimages start 0x01. */
Digest commit(const Nonce& nonce, std::span<const uint8_t> item);

std::string hex(const Digest& d);
Digest digest_from_hex(const std::string& s);  // throws DecodeError

inline std::span<const uint8_t> as_span(const Digest& d) { return {d.data(), d.size()}; }

}  // namespace pmm::crypto
