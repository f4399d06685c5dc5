#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pod/algebra/bn254/fp_tower.hpp"

// Short-Weierstrass groups for BN254:
//   G1 = E(Fp):   y^2 = x^3 + 3, generator (1, 2), prime order r (cofactor 1)
//   G2 < E'(Fp2): y^2 = x^3 + 3/xi, order-r subgroup, cofactor h2 = 2p - r
// Points use Jacobian coordinates (X, Y, Z) with x = X/Z^2, y = Y/Z^3 for
// arithmetic and affine coordinates for storage/serialization.

namespace pod::algebra::bn254 {

const Fp& g1_b();   // 3
const Fp2& g2_b();  // 3/xi

std::optional<Fp> sqrt_fp(const Fp& a);
std::optional<Fp2> sqrt_fp2(const Fp2& a);

template <class F>
const F& curve_b();

template <>
inline const Fp& curve_b<Fp>() {
    return g1_b();
}
template <>
inline const Fp2& curve_b<Fp2>() {
    return g2_b();
}

template <class F>
struct AffinePoint {
    F x{}, y{};
    bool inf = true;

    static AffinePoint infinity() { return {}; }
    static AffinePoint make(const F& x, const F& y) { return {x, y, false}; }

    bool is_on_curve() const {
        if (inf) return true;
        return y.square() == x.square() * x + curve_b<F>();
    }

    AffinePoint neg() const {
        if (inf) return *this;
        return {x, -y, false};
    }

    bool operator==(const AffinePoint& o) const {
        if (inf || o.inf) return inf == o.inf;
        return x == o.x && y == o.y;
    }
};

template <class F>
struct JacPoint {
    F X{}, Y{}, Z{};  // Z == 0 encodes the identity

    static JacPoint infinity() { return {F::one(), F::one(), F::zero()}; }

    static JacPoint from_affine(const AffinePoint<F>& a) {
        if (a.inf) return infinity();
        return {a.x, a.y, F::one()};
    }

    bool is_zero() const { return Z.is_zero(); }

    JacPoint neg() const { return {X, -Y, Z}; }

    // dbl-2009-l; curve has a = 0 and no 2-torsion (odd group order).
    JacPoint dbl() const {
        if (is_zero()) return *this;
        F A = X.square();
        F B = Y.square();
        F C = B.square();
        F D = ((X + B).square() - A - C).dbl();
        F E = A + A + A;
        F Fq = E.square();
        F X3 = Fq - D.dbl();
        F Y3 = E * (D - X3) - C.dbl().dbl().dbl();
        F Z3 = (Y * Z).dbl();
        return {X3, Y3, Z3};
    }

    // add-2007-bl
    JacPoint add(const JacPoint& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        F Z1Z1 = Z.square();
        F Z2Z2 = o.Z.square();
        F U1 = X * Z2Z2;
        F U2 = o.X * Z1Z1;
        F S1 = Y * o.Z * Z2Z2;
        F S2 = o.Y * Z * Z1Z1;
        F H = U2 - U1;
        F rr = (S2 - S1).dbl();
        if (H.is_zero()) {
            if (rr.is_zero()) return dbl();
            return infinity();
        }
        F I = H.dbl().square();
        F J = H * I;
        F V = U1 * I;
        F X3 = rr.square() - J - V.dbl();
        F Y3 = rr * (V - X3) - (S1 * J).dbl();
        F Z3 = ((Z + o.Z).square() - Z1Z1 - Z2Z2) * H;
        return {X3, Y3, Z3};
    }

    // madd-2007-bl (other point affine, Z2 = 1)
    JacPoint add_mixed(const AffinePoint<F>& o) const {
        if (o.inf) return *this;
        if (is_zero()) return from_affine(o);
        F Z1Z1 = Z.square();
        F U2 = o.x * Z1Z1;
        F S2 = o.y * Z * Z1Z1;
        F H = U2 - X;
        F rr = (S2 - Y).dbl();
        if (H.is_zero()) {
            if (rr.is_zero()) return dbl();
            return infinity();
        }
        F HH = H.square();
        F I = HH.dbl().dbl();
        F J = H * I;
        F V = X * I;
        F X3 = rr.square() - J - V.dbl();
        F Y3 = rr * (V - X3) - (Y * J).dbl();
        F Z3 = (Z + H).square() - Z1Z1 - HH;
        return {X3, Y3, Z3};
    }

    AffinePoint<F> to_affine() const {
        if (is_zero()) return AffinePoint<F>::infinity();
        F zi = Z.inverse();
        F zi2 = zi.square();
        return AffinePoint<F>::make(X * zi2, Y * zi2 * zi);
    }

    bool eq(const JacPoint& o) const {
        if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
        // Compare cross-multiplied coordinates to avoid inversions.
        F Z1Z1 = Z.square();
        F Z2Z2 = o.Z.square();
        if (X * Z2Z2 != o.X * Z1Z1) return false;
        return Y * o.Z * Z2Z2 == o.Y * Z * Z1Z1;
    }
};

// Shared-inversion conversion of many Jacobian points to affine.
template <class F>
std::vector<AffinePoint<F>> batch_to_affine(const std::vector<JacPoint<F>>& pts) {
    std::vector<AffinePoint<F>> out(pts.size());
    std::vector<F> prefix(pts.size());
    F acc = F::one();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        prefix[i] = acc;
        if (!pts[i].is_zero()) acc *= pts[i].Z;
    }
    F inv = acc.inverse();
    for (std::size_t i = pts.size(); i-- > 0;) {
        if (pts[i].is_zero()) {
            out[i] = AffinePoint<F>::infinity();
            continue;
        }
        F zi = inv * prefix[i];
        inv *= pts[i].Z;
        F zi2 = zi.square();
        out[i] = AffinePoint<F>::make(pts[i].X * zi2, pts[i].Y * zi2 * zi);
    }
    return out;
}

namespace detail {
// Base-16 digit of a 256-bit plain exponent, nibble index 0..63 from the LSB.
inline unsigned nibble(const Limbs& e, int idx) {
    return static_cast<unsigned>(e[static_cast<std::size_t>(idx >> 4)] >> ((idx & 15) * 4)) & 0xf;
}
// Base-32 digit for the 5-bit fixed-base windows (digit may straddle limbs).
inline unsigned digit5(const Limbs& e, int pos) {
    int bit = pos * 5;
    int limb = bit >> 6;
    int off = bit & 63;
    if (limb > 3) return 0;
    u64 v = e[static_cast<std::size_t>(limb)] >> off;
    if (off > 59 && limb < 3) v |= e[static_cast<std::size_t>(limb) + 1] << (64 - off);
    return static_cast<unsigned>(v) & 31;
}
}  // namespace detail

// Variable-base scalar multiplication, 4-bit window, plain exponent.
template <class F>
JacPoint<F> point_mul(const AffinePoint<F>& base, const Limbs& e) {
    if (base.inf || limbs_is_zero(e)) return JacPoint<F>::infinity();
    // tab[d-1] = d * base for d in 1..15
    JacPoint<F> tab[15];
    tab[0] = JacPoint<F>::from_affine(base);
    for (int d = 1; d < 15; ++d) tab[d] = tab[d - 1].add_mixed(base);
    JacPoint<F> acc = JacPoint<F>::infinity();
    bool started = false;
    for (int i = 63; i >= 0; --i) {
        unsigned d = detail::nibble(e, i);
        if (started) {
            acc = acc.dbl().dbl().dbl().dbl();
            if (d) acc = acc.add(tab[d - 1]);
        } else if (d) {
            acc = tab[d - 1];
            started = true;
        }
    }
    return acc;
}

// Precomputed table for repeated exponentiation of one base: 5-bit windows,
// all 52 window positions stored as affine points, so a scalar mul costs at
// most 52 mixed additions and no doublings.
template <class F>
class FixedBaseTable {
public:
    static constexpr int kW = 5;
    static constexpr int kPositions = 52;  // ceil(260 / 5) covers 256 bits
    static constexpr int kEntries = 31;    // digits 1..31

    FixedBaseTable() = default;

    explicit FixedBaseTable(const AffinePoint<F>& base) { build(base); }

    bool built() const { return !tab_.empty(); }

    void build(const AffinePoint<F>& base) {
        if (base.inf) {
            tab_.clear();
            inf_base_ = true;
            return;
        }
        inf_base_ = false;
        std::vector<JacPoint<F>> jac;
        jac.reserve(static_cast<std::size_t>(kPositions) * kEntries);
        JacPoint<F> window_base = JacPoint<F>::from_affine(base);
        for (int pos = 0; pos < kPositions; ++pos) {
            JacPoint<F> acc = window_base;
            jac.push_back(acc);
            for (int d = 2; d <= kEntries; ++d) {
                acc = acc.add(window_base);
                jac.push_back(acc);
            }
            for (int i = 0; i < kW; ++i) window_base = window_base.dbl();
        }
        tab_ = batch_to_affine(jac);
    }

    JacPoint<F> mul(const Limbs& e) const {
        JacPoint<F> acc = JacPoint<F>::infinity();
        if (inf_base_) return acc;
        for (int pos = 0; pos < kPositions; ++pos) {
            unsigned d = detail::digit5(e, pos);
            if (d) acc = acc.add_mixed(tab_[static_cast<std::size_t>(pos) * kEntries + d - 1]);
        }
        return acc;
    }

private:
    std::vector<AffinePoint<F>> tab_;
    bool inf_base_ = false;
};

// Straus interleaved multi-exponentiation: one shared doubling chain, 4-bit
// windows per base. Bases and exponents must have equal length.
template <class F>
JacPoint<F> multi_point_mul(std::span<const AffinePoint<F>> bases, std::span<const Limbs> exps) {
    const std::size_t k = bases.size();
    if (k == 0) return JacPoint<F>::infinity();
    if (k == 1) return point_mul(bases[0], exps[0]);

    // Per-base tables of 1..15 multiples, batch-normalized for mixed adds.
    std::vector<JacPoint<F>> jac;
    jac.reserve(k * 15);
    for (std::size_t b = 0; b < k; ++b) {
        JacPoint<F> cur = JacPoint<F>::from_affine(bases[b]);
        jac.push_back(cur);
        for (int d = 2; d <= 15; ++d) {
            cur = cur.add_mixed(bases[b]);
            jac.push_back(cur);
        }
    }
    std::vector<AffinePoint<F>> tab = batch_to_affine(jac);

    JacPoint<F> acc = JacPoint<F>::infinity();
    bool started = false;
    for (int i = 63; i >= 0; --i) {
        if (started) acc = acc.dbl().dbl().dbl().dbl();
        for (std::size_t b = 0; b < k; ++b) {
            unsigned d = detail::nibble(exps[b], i);
            if (d) {
                acc = acc.add_mixed(tab[b * 15 + d - 1]);
                started = true;
            }
        }
    }
    return acc;
}

// Canonical generators. g2 is derived deterministically by hashing-free
// search + cofactor clearing (curve.cpp), then subgroup-checked.
const AffinePoint<Fp>& g1_generator();
const AffinePoint<Fp2>& g2_generator();

// Scalar multiplication by the group order (subgroup membership tests).
bool in_g1(const AffinePoint<Fp>& p);
bool in_g2(const AffinePoint<Fp2>& p);

// Compressed encodings: G1 = 32 bytes, G2 = 64 bytes. Top two bits of the
// first byte carry flags: bit7 = infinity, bit6 = odd-y. docs/wire-formats.md
// has the full layout.
std::array<std::uint8_t, 32> g1_compress(const AffinePoint<Fp>& p);
std::optional<AffinePoint<Fp>> g1_decompress(std::span<const std::uint8_t> b);
std::array<std::uint8_t, 64> g2_compress(const AffinePoint<Fp2>& p);
std::optional<AffinePoint<Fp2>> g2_decompress(std::span<const std::uint8_t> b);

}  // namespace pod::algebra::bn254
