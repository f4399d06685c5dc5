#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

// Prime-field arithmetic for the BN254 (alt_bn128) curve pair, 4x64-bit limbs
// in Montgomery form with R = 2^256. Both moduli are 254 bits, so Montgomery
// products need a single conditional subtraction (m < R/4). The same template
// serves the base field F_p and the scalar field F_r.

namespace pod::algebra::bn254 {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Little-endian limb order: v[0] is least significant.
using Limbs = std::array<u64, 4>;

struct Mod {
    Limbs m;     // modulus
    u64 inv;     // -m^{-1} mod 2^64
    Limbs r2;    // 2^512 mod m (to enter Montgomery form)
    Limbs rone;  // 2^256 mod m (Montgomery representation of 1)
};

// Lazily built parameter blocks (fp.cpp); thread-safe via static-local init.
const Mod& mod_p();
const Mod& mod_r();

// GMP-backed helpers, plain (non-Montgomery) domain. Defined in fp.cpp.
void limbs_mod_inverse(Limbs& out, const Limbs& a, const Limbs& m);
// Interprets `bytes` as a big-endian integer and reduces it mod m.
void limbs_reduce_wide(Limbs& out, std::span<const std::uint8_t> bytes, const Limbs& m);

inline int limbs_cmp(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

inline bool limbs_is_zero(const Limbs& a) { return (a[0] | a[1] | a[2] | a[3]) == 0; }

// r = a + b, returns carry-out.
inline u64 limbs_add(Limbs& r, const Limbs& a, const Limbs& b) {
    u128 c = 0;
    for (int i = 0; i < 4; ++i) {
        c += static_cast<u128>(a[i]) + b[i];
        r[i] = static_cast<u64>(c);
        c >>= 64;
    }
    return static_cast<u64>(c);
}

// r = a - b, returns borrow-out (1 if a < b).
inline u64 limbs_sub(Limbs& r, const Limbs& a, const Limbs& b) {
    u64 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        u64 bi = b[i];
        u64 d = a[i] - bi;
        u64 borrow2 = (a[i] < bi);
        u64 d2 = d - borrow;
        borrow = borrow2 | (d < borrow);
        r[i] = d2;
    }
    return borrow;
}

// Montgomery product via CIOS. Inputs/outputs are reduced (< m).
inline void mont_mul(Limbs& out, const Limbs& a, const Limbs& b, const Mod& md) {
    const Limbs& m = md.m;
    u64 t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        // t += a[i] * b
        u128 c = 0;
        for (int j = 0; j < 4; ++j) {
            u128 cur = static_cast<u128>(a[i]) * b[j] + t[j] + static_cast<u64>(c);
            t[j] = static_cast<u64>(cur);
            c = cur >> 64;
        }
        u128 s = static_cast<u128>(t[4]) + static_cast<u64>(c);
        t[4] = static_cast<u64>(s);
        t[5] = static_cast<u64>(s >> 64);

        // Fold out one limb: add mu*m so t becomes divisible by 2^64, shift.
        u64 mu = t[0] * md.inv;
        u128 cur = static_cast<u128>(mu) * m[0] + t[0];
        c = cur >> 64;
        for (int j = 1; j < 4; ++j) {
            cur = static_cast<u128>(mu) * m[j] + t[j] + static_cast<u64>(c);
            t[j - 1] = static_cast<u64>(cur);
            c = cur >> 64;
        }
        s = static_cast<u128>(t[4]) + static_cast<u64>(c);
        t[3] = static_cast<u64>(s);
        t[4] = t[5] + static_cast<u64>(s >> 64);
    }
    // m < 2^254 keeps the accumulator below 2m < 2^255, so t[4] is clear here
    // and one conditional subtraction finishes the reduction.
    Limbs res{t[0], t[1], t[2], t[3]};
    if (limbs_cmp(res, m) >= 0) limbs_sub(res, res, m);
    out = res;
}

template <const Mod& (*M)()>
class Fe {
public:
    Limbs v{};  // Montgomery form, always < m

    static const Mod& mod() { return M(); }

    static Fe zero() { return Fe{}; }

    static Fe one() {
        Fe r;
        r.v = mod().rone;
        return r;
    }

    static Fe from_u64(u64 x) {
        Fe r;
        Limbs plain{x, 0, 0, 0};
        mont_mul(r.v, plain, mod().r2, mod());
        return r;
    }

    // Plain value must already be < m.
    static Fe from_plain(const Limbs& plain) {
        Fe r;
        mont_mul(r.v, plain, mod().r2, mod());
        return r;
    }

    // Big-endian 32 bytes; rejects values >= m (canonical encodings only).
    static std::optional<Fe> from_bytes(std::span<const std::uint8_t> b) {
        if (b.size() != 32) return std::nullopt;
        Limbs plain{};
        for (int i = 0; i < 4; ++i) {
            u64 w = 0;
            for (int j = 0; j < 8; ++j) w = (w << 8) | b[static_cast<std::size_t>(8 * i + j)];
            plain[3 - static_cast<std::size_t>(i)] = w;
        }
        if (limbs_cmp(plain, mod().m) >= 0) return std::nullopt;
        return from_plain(plain);
    }

    // Big-endian bytes of arbitrary length, reduced mod m (for hashing/RNG).
    static Fe from_wide_bytes(std::span<const std::uint8_t> b) {
        Limbs plain{};
        limbs_reduce_wide(plain, b, mod().m);
        return from_plain(plain);
    }

    Limbs plain() const {
        Limbs one_limbs{1, 0, 0, 0};
        Limbs out;
        mont_mul(out, v, one_limbs, mod());
        return out;
    }

    std::array<std::uint8_t, 32> to_bytes() const {
        Limbs p = plain();
        std::array<std::uint8_t, 32> out{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 8; ++j)
                out[static_cast<std::size_t>(8 * i + j)] =
                    static_cast<std::uint8_t>(p[3 - static_cast<std::size_t>(i)] >> (8 * (7 - j)));
        return out;
    }

    bool is_zero() const { return limbs_is_zero(v); }
    bool operator==(const Fe& o) const { return v == o.v; }
    bool operator!=(const Fe& o) const { return v != o.v; }

    // Order by plain integer value (canonical, used for sorting attribute sets).
    int cmp(const Fe& o) const {
        Limbs a = plain(), b = o.plain();
        return limbs_cmp(a, b);
    }

    bool is_odd() const { return plain()[0] & 1; }

    Fe operator+(const Fe& o) const {
        Fe r;
        limbs_add(r.v, v, o.v);  // both < m < 2^254: no carry out
        if (limbs_cmp(r.v, mod().m) >= 0) limbs_sub(r.v, r.v, mod().m);
        return r;
    }

    Fe operator-(const Fe& o) const {
        Fe r;
        if (limbs_sub(r.v, v, o.v)) limbs_add(r.v, r.v, mod().m);
        return r;
    }

    Fe operator-() const {
        if (is_zero()) return *this;
        Fe r;
        limbs_sub(r.v, mod().m, v);
        return r;
    }

    Fe operator*(const Fe& o) const {
        Fe r;
        mont_mul(r.v, v, o.v, mod());
        return r;
    }

    Fe& operator+=(const Fe& o) { return *this = *this + o; }
    Fe& operator-=(const Fe& o) { return *this = *this - o; }
    Fe& operator*=(const Fe& o) { return *this = *this * o; }

    Fe square() const { return *this * *this; }

    Fe dbl() const { return *this + *this; }

    // Multiplicative inverse; zero maps to zero (callers check).
    Fe inverse() const {
        if (is_zero()) return *this;
        Limbs p = plain();
        Limbs ip;
        limbs_mod_inverse(ip, p, mod().m);
        return from_plain(ip);
    }

    // Exponentiation by a plain (non-Montgomery) 256-bit exponent, MSB first.
    Fe pow(const Limbs& e) const {
        Fe acc = one();
        bool started = false;
        for (int limb = 3; limb >= 0; --limb) {
            for (int bit = 63; bit >= 0; --bit) {
                if (started) acc = acc.square();
                if ((e[static_cast<std::size_t>(limb)] >> bit) & 1) {
                    if (started)
                        acc *= *this;
                    else {
                        acc = *this;
                        started = true;
                    }
                }
            }
        }
        return started ? acc : one();
    }
};

using Fp = Fe<mod_p>;
using Fr = Fe<mod_r>;

}  // namespace pod::algebra::bn254
