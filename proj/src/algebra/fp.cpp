#include "pod/algebra/bn254/fp.hpp"

#include <gmp.h>

#include <cstddef>

namespace pod::algebra::bn254 {

namespace {

// alt_bn128: p = 36z^4 + 36z^3 + 24z^2 + 6z + 1, r = 36z^4 + 36z^3 + 18z^2 + 6z + 1
// with z = 4965661367192848881. The test suite re-derives both from z.
constexpr const char* P_HEX = "30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd47";
constexpr const char* R_HEX = "30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001";

void mpz_to_limbs(Limbs& out, const mpz_t z) {
    out = {0, 0, 0, 0};
    std::size_t count = 0;
    mpz_export(out.data(), &count, -1 /* LSB word first */, sizeof(u64), 0, 0, z);
}

void limbs_to_mpz(mpz_t z, const Limbs& a) {
    mpz_import(z, 4, -1, sizeof(u64), 0, 0, a.data());
}

Mod make_mod(const char* hex) {
    Mod md{};
    mpz_t m, t;
    mpz_init_set_str(m, hex, 16);
    mpz_init(t);

    mpz_to_limbs(md.m, m);

    // rone = 2^256 mod m, r2 = 2^512 mod m
    mpz_set_ui(t, 1);
    mpz_mul_2exp(t, t, 256);
    mpz_mod(t, t, m);
    mpz_to_limbs(md.rone, t);

    mpz_set_ui(t, 1);
    mpz_mul_2exp(t, t, 512);
    mpz_mod(t, t, m);
    mpz_to_limbs(md.r2, t);

    // inv = -m^{-1} mod 2^64 by Newton iteration (m odd).
    u64 m0 = md.m[0];
    u64 x = 1;
    for (int i = 0; i < 6; ++i) x *= 2 - m0 * x;
    md.inv = ~x + 1;  // negate mod 2^64

    mpz_clear(m);
    mpz_clear(t);
    return md;
}

}  // namespace

const Mod& mod_p() {
    static const Mod md = make_mod(P_HEX);
    return md;
}

const Mod& mod_r() {
    static const Mod md = make_mod(R_HEX);
    return md;
}

void limbs_mod_inverse(Limbs& out, const Limbs& a, const Limbs& m) {
    mpz_t az, mz;
    mpz_init(az);
    mpz_init(mz);
    limbs_to_mpz(az, a);
    limbs_to_mpz(mz, m);
    if (mpz_invert(az, az, mz) == 0) mpz_set_ui(az, 0);  // non-invertible -> 0
    mpz_to_limbs(out, az);
    mpz_clear(az);
    mpz_clear(mz);
}

void limbs_reduce_wide(Limbs& out, std::span<const std::uint8_t> bytes, const Limbs& m) {
    mpz_t z, mm;
    mpz_init(z);
    mpz_init(mm);
    if (!bytes.empty()) mpz_import(z, bytes.size(), 1, 1, 1, 0, bytes.data());
    limbs_to_mpz(mm, m);
    mpz_mod(z, z, mm);
    mpz_to_limbs(out, z);
    mpz_clear(z);
    mpz_clear(mm);
}

}  // namespace pod::algebra::bn254
