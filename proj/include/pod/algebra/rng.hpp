#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "pod/bytes.hpp"

namespace pod::algebra {

// Deterministic random generator: SHA-256 in counter mode under a derived
// key. Every random choice in the library flows through one of these, which
// is what makes whole simulation runs reproducible from a single seed.
// fork() derives an independent stream so that actors consume randomness in
// an order-insensitive way.
class Drbg {
public:
    explicit Drbg(std::uint64_t seed);

    Drbg fork(std::string_view label) const;

    void fill(std::span<std::uint8_t> out);
    Bytes bytes(std::size_t n);
    std::uint64_t next_u64();
    // Uniform value in [0, bound) via rejection; bound > 0.
    std::uint64_t uniform(std::uint64_t bound);

private:
    explicit Drbg(const std::array<std::uint8_t, 32>& key) : key_(key) {}

    std::array<std::uint8_t, 32> key_{};
    std::uint64_t counter_ = 0;
    std::array<std::uint8_t, 32> block_{};
    std::size_t avail_ = 0;  // unread bytes at the tail of block_
};

}  // namespace pod::algebra
