#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pod {

using Bytes = std::vector<std::uint8_t>;

// Canonical encoding helpers. Every hash input and every serialized object in
// this library goes through these so that encodings are unambiguous: multi-part
// inputs are length-prefixed (u32 big-endian), integers are big-endian.
class ByteWriter {
public:
    void reserve(std::size_t n) { buf_.reserve(n); }

    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void u64(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void raw(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

    void raw(const Bytes& b) { raw(std::span<const std::uint8_t>(b.data(), b.size())); }

    template <std::size_t N>
    void raw(const std::array<std::uint8_t, N>& b) {
        buf_.insert(buf_.end(), b.begin(), b.end());
    }

    // Length-prefixed block: u32 length followed by the bytes.
    void block(std::span<const std::uint8_t> b) {
        u32(static_cast<std::uint32_t>(b.size()));
        raw(b);
    }

    void block(const Bytes& b) { block(std::span<const std::uint8_t>(b.data(), b.size())); }

    template <std::size_t N>
    void block(const std::array<std::uint8_t, N>& b) {
        block(std::span<const std::uint8_t>(b.data(), N));
    }

    void block(std::string_view s) {
        block(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(s.data()),
                                            s.size()));
    }

    const Bytes& bytes() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> b) : data_(b) {}
    explicit ByteReader(const Bytes& b) : data_(b.data(), b.size()) {}

    bool ok() const { return ok_; }
    std::size_t remaining() const { return data_.size() - pos_; }

    std::uint8_t u8() {
        if (!need(1)) return 0;
        return data_[pos_++];
    }

    std::uint32_t u32() {
        if (!need(4)) return 0;
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    std::uint64_t u64() {
        if (!need(8)) return 0;
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    Bytes raw(std::size_t n) {
        if (!need(n)) return {};
        Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
        pos_ += n;
        return out;
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> raw_array() {
        std::array<std::uint8_t, N> out{};
        if (!need(N)) return out;
        std::memcpy(out.data(), data_.data() + pos_, N);
        pos_ += N;
        return out;
    }

    Bytes block() {
        std::uint32_t n = u32();
        return raw(n);
    }

    // Marks the reader failed if any read ran past the end or trailing bytes
    // remain when finish() is called.
    bool finish() {
        if (pos_ != data_.size()) ok_ = false;
        return ok_;
    }

    void fail() { ok_ = false; }

private:
    bool need(std::size_t n) {
        if (!ok_ || data_.size() - pos_ < n) {
            ok_ = false;
            return false;
        }
        return true;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
    bool ok_ = true;
};

inline std::string to_hex(std::span<const std::uint8_t> b) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(b.size() * 2);
    for (std::uint8_t c : b) {
        s.push_back(digits[c >> 4]);
        s.push_back(digits[c & 0xf]);
    }
    return s;
}

inline std::string to_hex(const Bytes& b) {
    return to_hex(std::span<const std::uint8_t>(b.data(), b.size()));
}

inline std::optional<Bytes> from_hex(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    Bytes out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = nib(s[i]), lo = nib(s[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

}  // namespace pod
