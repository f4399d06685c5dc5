#pragma once

#include <optional>

#include "pod/algebra/bn254/fp.hpp"

// Extension tower for BN254:
//   Fp2  = Fp[u]  / (u^2 + 1)          (p = 3 mod 4, so -1 is a non-residue)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = 9 + u
//   Fp12 = Fp6[w] / (w^2 - v)
// The sextic twist is D-type: E'/Fp2 : y^2 = x^3 + 3/xi, with the untwist
// (x, y) -> (x*w^2, y*w^3) mapping E'(Fp2) into E(Fp12).

namespace pod::algebra::bn254 {

struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {Fp::zero(), Fp::zero()}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fp2& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    Fp2 operator+(const Fp2& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fp2 operator-(const Fp2& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }

    Fp2 operator*(const Fp2& o) const {
        // Karatsuba with u^2 = -1.
        Fp t0 = c0 * o.c0;
        Fp t1 = c1 * o.c1;
        Fp sum = (c0 + c1) * (o.c0 + o.c1);
        return {t0 - t1, sum - t0 - t1};
    }

    Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
    Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
    Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

    Fp2 square() const {
        // (c0 + c1 u)^2 = (c0+c1)(c0-c1) + 2 c0 c1 u
        Fp t0 = (c0 + c1) * (c0 - c1);
        Fp t1 = c0 * c1;
        return {t0, t1.dbl()};
    }

    Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

    Fp2 mul_fp(const Fp& k) const { return {c0 * k, c1 * k}; }

    Fp2 conjugate() const { return {c0, -c1}; }

    // Multiplication by the cubic non-residue xi = 9 + u.
    Fp2 mul_by_xi() const {
        Fp nine0 = c0.dbl().dbl().dbl() + c0;
        Fp nine1 = c1.dbl().dbl().dbl() + c1;
        return {nine0 - c1, nine1 + c0};
    }

    Fp2 inverse() const {
        // 1/(c0 + c1 u) = (c0 - c1 u) / (c0^2 + c1^2)
        Fp norm = c0.square() + c1.square();
        Fp ninv = norm.inverse();
        return {c0 * ninv, -(c1 * ninv)};
    }

    // Exponentiation by a plain 256-bit exponent.
    Fp2 pow(const Limbs& e) const {
        Fp2 acc = one();
        bool started = false;
        for (int limb = 3; limb >= 0; --limb)
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
        return started ? acc : one();
    }

    // Square root via the norm trick (works for p = 3 mod 4): candidate
    // roots come from a^( (p-2+...)/ ) — implemented in curve.cpp where the
    // required exponents are cached.
    std::optional<Fp2> sqrt() const;
};

struct Fp6 {
    Fp2 c0, c1, c2;  // c0 + c1 v + c2 v^2

    static Fp6 zero() { return {Fp2::zero(), Fp2::zero(), Fp2::zero()}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fp6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }
    bool operator!=(const Fp6& o) const { return !(*this == o); }

    Fp6 operator+(const Fp6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fp6 operator-(const Fp6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }

    Fp6 operator*(const Fp6& o) const {
        // Toom-style schoolbook with v^3 = xi (6 Fp2 multiplications).
        Fp2 t0 = c0 * o.c0;
        Fp2 t1 = c1 * o.c1;
        Fp2 t2 = c2 * o.c2;
        Fp2 r0 = t0 + ((c1 + c2) * (o.c1 + o.c2) - t1 - t2).mul_by_xi();
        Fp2 r1 = (c0 + c1) * (o.c0 + o.c1) - t0 - t1 + t2.mul_by_xi();
        Fp2 r2 = (c0 + c2) * (o.c0 + o.c2) - t0 - t2 + t1;
        return {r0, r1, r2};
    }

    Fp6& operator+=(const Fp6& o) { return *this = *this + o; }
    Fp6& operator-=(const Fp6& o) { return *this = *this - o; }
    Fp6& operator*=(const Fp6& o) { return *this = *this * o; }

    Fp6 square() const { return *this * *this; }

    // Multiply by v: (c0, c1, c2) -> (xi*c2, c0, c1).
    Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

    Fp6 mul_fp2(const Fp2& k) const { return {c0 * k, c1 * k, c2 * k}; }

    Fp6 inverse() const {
        Fp2 a = c0.square() - (c1 * c2).mul_by_xi();
        Fp2 b = c2.square().mul_by_xi() - c0 * c1;
        Fp2 c = c1.square() - c0 * c2;
        Fp2 f = (c0 * a + (c2 * b + c1 * c).mul_by_xi()).inverse();
        return {a * f, b * f, c * f};
    }
};

struct Fp12 {
    Fp6 c0, c1;  // c0 + c1 w

    static Fp12 zero() { return {Fp6::zero(), Fp6::zero()}; }
    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool is_one() const { return c0 == Fp6::one() && c1.is_zero(); }
    bool operator==(const Fp12& o) const { return c0 == o.c0 && c1 == o.c1; }
    bool operator!=(const Fp12& o) const { return !(*this == o); }

    Fp12 operator*(const Fp12& o) const {
        // Karatsuba with w^2 = v.
        Fp6 t0 = c0 * o.c0;
        Fp6 t1 = c1 * o.c1;
        Fp6 mid = (c0 + c1) * (o.c0 + o.c1);
        return {t0 + t1.mul_by_v(), mid - t0 - t1};
    }

    Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

    Fp12 square() const {
        // Complex squaring: (a + bw)^2 = (a+b)(a+vb) - ab - v(ab) + 2ab w.
        Fp6 t = c0 * c1;
        Fp6 s = (c0 + c1) * (c0 + c1.mul_by_v());
        return {s - t - t.mul_by_v(), t + t};
    }

    Fp12 inverse() const {
        // 1/(a + bw) = (a - bw) / (a^2 - v b^2)
        Fp6 norm = c0.square() - c1.square().mul_by_v();
        Fp6 ninv = norm.inverse();
        return {c0 * ninv, -(c1 * ninv)};
    }

    // For elements of the cyclotomic subgroup (after the easy part of the
    // final exponentiation) conjugation is the inverse.
    Fp12 conjugate() const { return {c0, -c1}; }

    Fp12 frobenius() const;     // x -> x^p       (pairing.cpp)
    Fp12 frobenius_p2() const;  // x -> x^(p^2)

    // Plain square-and-multiply by a positive multi-limb exponent, MSB first.
    template <std::size_t N>
    Fp12 pow(const std::array<u64, N>& e) const {
        Fp12 acc = one();
        bool started = false;
        for (int limb = static_cast<int>(N) - 1; limb >= 0; --limb)
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
        return started ? acc : one();
    }
};

}  // namespace pod::algebra::bn254
