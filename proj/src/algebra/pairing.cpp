#include "pod/algebra/bn254/pairing.hpp"

#include <cassert>

namespace pod::algebra::bn254 {

namespace {

// q / d for a small divisor, returning the remainder.
u64 limbs_div_small(Limbs& q, u64 d) {
    u128 rem = 0;
    for (int i = 3; i >= 0; --i) {
        u128 cur = (rem << 64) | q[static_cast<std::size_t>(i)];
        q[static_cast<std::size_t>(i)] = static_cast<u64>(cur / d);
        rem = cur % d;
    }
    return static_cast<u64>(rem);
}

struct PairCtx {
    u64 ate_lo;   // 6z+2 minus the implicit top bit 2^64
    Fp2 frob[6];  // xi^{i(p-1)/6}
};

const PairCtx& ctx() {
    static const PairCtx c = [] {
        PairCtx c{};
        u128 loop = static_cast<u128>(kBnZ) * 6 + 2;
        assert(static_cast<u64>(loop >> 64) == 1);  // 6z+2 is 65 bits wide
        c.ate_lo = static_cast<u64>(loop);

        Limbs e6 = mod_p().m;
        Limbs one{1, 0, 0, 0};
        limbs_sub(e6, e6, one);
        u64 rem = limbs_div_small(e6, 6);
        assert(rem == 0);  // p = 1 mod 6
        (void)rem;

        Fp2 xi{Fp::from_u64(9), Fp::one()};
        Fp2 base = xi.pow(e6);
        c.frob[0] = Fp2::one();
        for (int i = 1; i < 6; ++i) c.frob[i] = c.frob[i - 1] * base;
        return c;
    }();
    return c;
}

// Twist endomorphism psi = untwist . frobenius . twist; acts as
// multiplication by p on the order-r subgroup of the twist.
AffinePoint<Fp2> psi(const AffinePoint<Fp2>& q) {
    if (q.inf) return q;
    return AffinePoint<Fp2>::make(q.x.conjugate() * ctx().frob[2], q.y.conjugate() * ctx().frob[3]);
}

// Line through the current Miller point with slope m (both on the twist),
// evaluated at the G1 argument and mapped through the untwist:
//   l = y_P - (m x_P) w + (m x_T - y_T) w^3
Fp12 line_eval(const Fp2& m, const Fp2& xt, const Fp2& yt, const AffinePoint<Fp>& p) {
    Fp12 l = Fp12::zero();
    l.c0.c0 = Fp2{p.y, Fp::zero()};
    l.c1.c0 = -m.mul_fp(p.x);
    l.c1.c1 = m * xt - yt;
    return l;
}

// Vertical line x - x_T, evaluated at P after untwisting: x_P - x_T w^2.
Fp12 line_vertical(const Fp2& xt, const AffinePoint<Fp>& p) {
    Fp12 l = Fp12::zero();
    l.c0.c0 = Fp2{p.x, Fp::zero()};
    l.c0.c1 = -xt;
    return l;
}

// Running point of the Miller loop, affine coordinates on the twist.
struct MillerT {
    Fp2 x, y;
    bool inf = false;

    void dbl_step(Fp12& f, const AffinePoint<Fp>& p) {
        if (inf) return;
        Fp2 m = (x.square().mul_fp(Fp::from_u64(3))) * y.dbl().inverse();
        f *= line_eval(m, x, y, p);
        Fp2 x2 = m.square() - x.dbl();
        y = m * (x - x2) - y;
        x = x2;
    }

    void add_step(Fp12& f, const AffinePoint<Fp2>& q, const AffinePoint<Fp>& p) {
        if (q.inf) return;
        if (inf) {
            x = q.x;
            y = q.y;
            inf = false;
            return;
        }
        if (x == q.x) {
            if (y == q.y) {
                dbl_step(f, p);
                return;
            }
            // T + (-T): vertical line, point goes to infinity
            f *= line_vertical(x, p);
            inf = true;
            return;
        }
        Fp2 m = (y - q.y) * (x - q.x).inverse();
        f *= line_eval(m, x, y, p);
        Fp2 x2 = m.square() - x - q.x;
        y = m * (x - x2) - y;
        x = x2;
    }
};

Fp12 exp_by_z(const Fp12& x) {
    static_assert((kBnZ >> 62) == 1, "z is 63 bits, MSB handled implicitly");
    Fp12 acc = x;
    for (int i = 61; i >= 0; --i) {
        acc = acc.square();
        if ((kBnZ >> i) & 1) acc *= x;
    }
    return acc;
}

}  // namespace

Fp12 Fp12::frobenius() const {
    const auto& f = ctx().frob;
    Fp6 a{c0.c0.conjugate(), c0.c1.conjugate() * f[2], c0.c2.conjugate() * f[4]};
    Fp6 b{c1.c0.conjugate() * f[1], c1.c1.conjugate() * f[3], c1.c2.conjugate() * f[5]};
    return {a, b};
}

Fp12 Fp12::frobenius_p2() const { return frobenius().frobenius(); }

Fp12 miller_loop(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q) {
    if (p.inf || q.inf) return Fp12::one();
    const u64 bits = ctx().ate_lo;
    Fp12 f = Fp12::one();
    MillerT t{q.x, q.y, false};
    for (int i = 63; i >= 0; --i) {
        f = f.square();
        t.dbl_step(f, p);
        if ((bits >> i) & 1) t.add_step(f, q, p);
    }
    // Correction steps of the optimal ate pairing: add psi(Q), then -psi^2(Q).
    AffinePoint<Fp2> q1 = psi(q);
    AffinePoint<Fp2> q2 = psi(q1).neg();
    t.add_step(f, q1, p);
    t.add_step(f, q2, p);
    return f;
}

Fp12 final_exponentiation(const Fp12& f) {
    // Easy part: f^((p^6 - 1)(p^2 + 1)). The result is cyclotomic, so
    // conjugation is inversion from here on.
    Fp12 t = f.conjugate() * f.inverse();
    t = t * t.frobenius_p2();

    // Hard part: f^((p^4 - p^2 + 1)/r) via the Frobenius/z addition chain.
    Fp12 fp1 = t.frobenius();
    Fp12 fp2 = t.frobenius_p2();
    Fp12 fp3 = fp2.frobenius();
    Fp12 fu1 = exp_by_z(t);
    Fp12 fu2 = exp_by_z(fu1);
    Fp12 fu3 = exp_by_z(fu2);

    Fp12 y0 = fp1 * fp2 * fp3;
    Fp12 y1 = t.conjugate();
    Fp12 y2 = fu2.frobenius_p2();
    Fp12 y3 = fu1.frobenius().conjugate();
    Fp12 y4 = (fu1 * fu2.frobenius()).conjugate();
    Fp12 y5 = fu2.conjugate();
    Fp12 y6 = (fu3 * fu3.frobenius()).conjugate();

    Fp12 t0 = y6.square() * y4 * y5;
    Fp12 t1 = y3 * y5 * t0;
    t0 = t0 * y2;
    t1 = t1.square() * t0;
    t1 = t1.square();
    t0 = t1 * y1;
    t1 = t1 * y0;
    t0 = t0.square() * t1;
    return t0;
}

Fp12 pairing(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q) {
    return final_exponentiation(miller_loop(p, q));
}

Fp12 pairing_product(std::span<const AffinePoint<Fp>> ps, std::span<const AffinePoint<Fp2>> qs) {
    assert(ps.size() == qs.size());
    Fp12 f = Fp12::one();
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (ps[i].inf || qs[i].inf) continue;
        f *= miller_loop(ps[i], qs[i]);
    }
    return final_exponentiation(f);
}

bool gt_is_valid(const Fp12& x) {
    if (x.c0.is_zero() && x.c1.is_zero()) return false;
    return x.pow(mod_r().m).is_one();
}

}  // namespace pod::algebra::bn254
