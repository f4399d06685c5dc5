#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "pod/bytes.hpp"

namespace pod::algebra {

// SHA-256 (OpenSSL EVP).
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

// Counter-mode expansion of SHA-256 to arbitrary output length:
// out = H(data || be32(0)) || H(data || be32(1)) || ... truncated.
Bytes hash_expand(std::span<const std::uint8_t> data, std::size_t out_len);

// First l bits of the expansion, as a vector of 0/1 bytes (message digests
// m_1..m_l for the signature scheme; l = 256 by default elsewhere).
std::vector<std::uint8_t> hash_to_bits(std::span<const std::uint8_t> data, std::size_t l);

}  // namespace pod::algebra
