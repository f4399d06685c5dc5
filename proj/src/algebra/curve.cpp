#include "pod/algebra/bn254/curve.hpp"

#include <cassert>

namespace pod::algebra::bn254 {

namespace {

// (p + 1) / 4 — square-root exponent for p = 3 mod 4.
Limbs sqrt_exp_p() {
    Limbs e = mod_p().m;
    Limbs one{1, 0, 0, 0};
    limbs_add(e, e, one);  // p + 1 < 2^255: no carry out
    // shift right by 2
    for (int i = 0; i < 4; ++i) {
        e[static_cast<std::size_t>(i)] >>= 2;
        if (i < 3) e[static_cast<std::size_t>(i)] |= e[static_cast<std::size_t>(i) + 1] << 62;
    }
    return e;
}

// G2 cofactor h2 = 2p - r (the twist group order is r * h2).
Limbs g2_cofactor() {
    Limbs h = mod_p().m;
    limbs_add(h, h, mod_p().m);  // 2p < 2^255
    limbs_sub(h, h, mod_r().m);
    return h;
}

}  // namespace

const Fp& g1_b() {
    static const Fp b = Fp::from_u64(3);
    return b;
}

const Fp2& g2_b() {
    // 3 / xi with xi = 9 + u
    static const Fp2 b = [] {
        Fp2 xi{Fp::from_u64(9), Fp::one()};
        Fp2 three{Fp::from_u64(3), Fp::zero()};
        return three * xi.inverse();
    }();
    return b;
}

std::optional<Fp> sqrt_fp(const Fp& a) {
    if (a.is_zero()) return a;
    static const Limbs e = sqrt_exp_p();
    Fp cand = a.pow(e);
    if (cand.square() != a) return std::nullopt;
    return cand;
}

std::optional<Fp2> sqrt_fp2(const Fp2& a) {
    if (a.is_zero()) return a;
    static const Fp half = Fp::from_u64(2).inverse();
    if (a.c1.is_zero()) {
        // a is in the base field: either a or -a is a square there
        // (-1 is a non-residue for p = 3 mod 4).
        if (auto t = sqrt_fp(a.c0)) return Fp2{*t, Fp::zero()};
        if (auto t = sqrt_fp(-a.c0)) return Fp2{Fp::zero(), *t};
        return std::nullopt;
    }
    // Gaussian-integer method: if (x + yu) = (s + tu)^2, the norm x^2 + y^2
    // must be a square n^2, and s^2 = (x +/- n)/2 for one of the signs.
    Fp n2 = a.c0.square() + a.c1.square();
    auto n = sqrt_fp(n2);
    if (!n) return std::nullopt;
    for (int sign = 0; sign < 2; ++sign) {
        Fp alpha = (sign == 0 ? a.c0 + *n : a.c0 - *n) * half;
        auto s = sqrt_fp(alpha);
        if (!s || s->is_zero()) continue;
        Fp t = a.c1 * (s->dbl()).inverse();
        Fp2 cand{*s, t};
        if (cand.square() == a) return cand;
    }
    return std::nullopt;
}

std::optional<Fp2> Fp2::sqrt() const { return sqrt_fp2(*this); }

const AffinePoint<Fp>& g1_generator() {
    static const AffinePoint<Fp> g = [] {
        AffinePoint<Fp> p = AffinePoint<Fp>::make(Fp::one(), Fp::from_u64(2));
        assert(p.is_on_curve());
        return p;
    }();
    return g;
}

namespace {

bool fp2_y_parity(const Fp2& y) {
    if (!y.c0.is_zero()) return y.c0.is_odd();
    return y.c1.is_odd();
}

AffinePoint<Fp2> derive_g2_generator() {
    static const Limbs h2 = g2_cofactor();
    for (u64 ctr = 0;; ++ctr) {
        Fp2 x{Fp::from_u64(ctr), Fp::one()};
        Fp2 rhs = x.square() * x + g2_b();
        auto y = sqrt_fp2(rhs);
        if (!y) continue;
        Fp2 yy = fp2_y_parity(*y) ? -*y : *y;  // canonical: even parity
        AffinePoint<Fp2> p0 = AffinePoint<Fp2>::make(x, yy);
        JacPoint<Fp2> q = point_mul(p0, h2);
        if (q.is_zero()) continue;
        AffinePoint<Fp2> gen = q.to_affine();
        assert(in_g2(gen));
        return gen;
    }
}

}  // namespace

const AffinePoint<Fp2>& g2_generator() {
    static const AffinePoint<Fp2> g = derive_g2_generator();
    return g;
}

bool in_g1(const AffinePoint<Fp>& p) {
    // E(Fp) has prime order r: on-curve is the whole story.
    return p.is_on_curve();
}

bool in_g2(const AffinePoint<Fp2>& p) {
    if (!p.is_on_curve()) return false;
    if (p.inf) return true;
    return point_mul(p, mod_r().m).is_zero();
}

std::array<std::uint8_t, 32> g1_compress(const AffinePoint<Fp>& p) {
    std::array<std::uint8_t, 32> out{};
    if (p.inf) {
        out[0] = 0x80;
        return out;
    }
    out = p.x.to_bytes();
    if (p.y.is_odd()) out[0] |= 0x40;
    return out;
}

std::optional<AffinePoint<Fp>> g1_decompress(std::span<const std::uint8_t> b) {
    if (b.size() != 32) return std::nullopt;
    std::array<std::uint8_t, 32> buf{};
    std::copy(b.begin(), b.end(), buf.begin());
    bool inf = buf[0] & 0x80;
    bool odd = buf[0] & 0x40;
    buf[0] &= 0x3f;
    if (inf) {
        // canonical infinity: flag byte only, everything else zero
        if (odd) return std::nullopt;
        for (auto c : buf)
            if (c) return std::nullopt;
        return AffinePoint<Fp>::infinity();
    }
    auto x = Fp::from_bytes(buf);
    if (!x) return std::nullopt;
    auto y = sqrt_fp(x->square() * *x + g1_b());
    if (!y) return std::nullopt;
    Fp yy = (y->is_odd() == odd) ? *y : -*y;
    return AffinePoint<Fp>::make(*x, yy);
}

std::array<std::uint8_t, 64> g2_compress(const AffinePoint<Fp2>& p) {
    std::array<std::uint8_t, 64> out{};
    if (p.inf) {
        out[0] = 0x80;
        return out;
    }
    auto hi = p.x.c1.to_bytes();
    auto lo = p.x.c0.to_bytes();
    std::copy(hi.begin(), hi.end(), out.begin());
    std::copy(lo.begin(), lo.end(), out.begin() + 32);
    if (fp2_y_parity(p.y)) out[0] |= 0x40;
    return out;
}

std::optional<AffinePoint<Fp2>> g2_decompress(std::span<const std::uint8_t> b) {
    if (b.size() != 64) return std::nullopt;
    std::array<std::uint8_t, 64> buf{};
    std::copy(b.begin(), b.end(), buf.begin());
    bool inf = buf[0] & 0x80;
    bool odd = buf[0] & 0x40;
    buf[0] &= 0x3f;
    if (inf) {
        if (odd) return std::nullopt;
        for (auto c : buf)
            if (c) return std::nullopt;
        return AffinePoint<Fp2>::infinity();
    }
    auto c1 = Fp::from_bytes(std::span<const std::uint8_t>(buf.data(), 32));
    auto c0 = Fp::from_bytes(std::span<const std::uint8_t>(buf.data() + 32, 32));
    if (!c0 || !c1) return std::nullopt;
    Fp2 x{*c0, *c1};
    auto y = sqrt_fp2(x.square() * x + g2_b());
    if (!y) return std::nullopt;
    Fp2 yy = (fp2_y_parity(*y) == odd) ? *y : -*y;
    AffinePoint<Fp2> p = AffinePoint<Fp2>::make(x, yy);
    if (!in_g2(p)) return std::nullopt;  // order-r subgroup only
    return p;
}

}  // namespace pod::algebra::bn254
