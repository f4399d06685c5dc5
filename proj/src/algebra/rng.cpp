#include "pod/algebra/rng.hpp"

#include <cstring>

#include "pod/algebra/hash.hpp"

namespace pod::algebra {

Drbg::Drbg(std::uint64_t seed) {
    ByteWriter w;
    w.block("pod.rng.v1");
    w.u64(seed);
    key_ = sha256(w.bytes());
}

Drbg Drbg::fork(std::string_view label) const {
    ByteWriter w;
    w.block("pod.rng.fork");
    w.block(key_);
    w.block(label);
    return Drbg(sha256(w.bytes()));
}

void Drbg::fill(std::span<std::uint8_t> out) {
    std::size_t pos = 0;
    while (pos < out.size()) {
        if (avail_ == 0) {
            ByteWriter w;
            w.raw(key_);
            w.u64(counter_++);
            block_ = sha256(w.bytes());
            avail_ = 32;
        }
        std::size_t take = std::min(avail_, out.size() - pos);
        std::memcpy(out.data() + pos, block_.data() + (32 - avail_), take);
        avail_ -= take;
        pos += take;
    }
}

Bytes Drbg::bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t Drbg::next_u64() {
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto c : b) v = (v << 8) | c;
    return v;
}

std::uint64_t Drbg::uniform(std::uint64_t bound) {
    // Rejection sampling from the top of the range to avoid modulo bias.
    std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % bound;
    }
}

}  // namespace pod::algebra
