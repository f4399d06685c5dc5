#include "pod/algebra/hash.hpp"

#include <openssl/evp.h>

#include <cassert>
#include <cstring>

namespace pod::algebra {

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
    std::array<std::uint8_t, 32> out{};
    unsigned int len = 0;
    int rc = EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr);
    assert(rc == 1 && len == 32);
    (void)rc;
    return out;
}

Bytes hash_expand(std::span<const std::uint8_t> data, std::size_t out_len) {
    Bytes out;
    out.reserve(out_len);
    Bytes block(data.begin(), data.end());
    block.resize(data.size() + 4);
    std::uint32_t ctr = 0;
    while (out.size() < out_len) {
        for (int i = 0; i < 4; ++i)
            block[data.size() + static_cast<std::size_t>(i)] =
                static_cast<std::uint8_t>(ctr >> (8 * (3 - i)));
        auto h = sha256(block);
        std::size_t take = std::min<std::size_t>(32, out_len - out.size());
        out.insert(out.end(), h.begin(), h.begin() + static_cast<std::ptrdiff_t>(take));
        ++ctr;
    }
    return out;
}

std::vector<std::uint8_t> hash_to_bits(std::span<const std::uint8_t> data, std::size_t l) {
    Bytes stream = hash_expand(data, (l + 7) / 8);
    std::vector<std::uint8_t> bits(l);
    for (std::size_t i = 0; i < l; ++i) bits[i] = (stream[i / 8] >> (7 - (i % 8))) & 1;
    return bits;
}

}  // namespace pod::algebra
