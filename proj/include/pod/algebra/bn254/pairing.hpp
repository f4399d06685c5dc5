#pragma once

#include <span>

#include "pod/algebra/bn254/curve.hpp"

namespace pod::algebra::bn254 {

// Optimal ate pairing e : G1 x G2 -> GT, where GT is the order-r subgroup of
// Fp12*. Miller loop over 6z+2 with affine line steps, followed by the
// standard easy/hard final exponentiation (the hard part uses the Frobenius
// + z-power addition chain; tests cross-check it against plain
// exponentiation by (p^4 - p^2 + 1)/r and against an independent Tate
// implementation).
Fp12 miller_loop(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q);
Fp12 final_exponentiation(const Fp12& f);
Fp12 pairing(const AffinePoint<Fp>& p, const AffinePoint<Fp2>& q);

// prod_i e(ps[i], qs[i]) with a single shared final exponentiation.
Fp12 pairing_product(std::span<const AffinePoint<Fp>> ps, std::span<const AffinePoint<Fp2>> qs);

// GT membership: x != 0 and x^r == 1.
bool gt_is_valid(const Fp12& x);

// x^e for a plain 256-bit exponent (GT exponentiation).
inline Fp12 gt_pow(const Fp12& x, const Limbs& e) { return x.pow(e); }

// BN parameter z; p, r, trace and the ate loop count derive from it
// (asserted in tests).
constexpr u64 kBnZ = 4965661367192848881ULL;

}  // namespace pod::algebra::bn254
