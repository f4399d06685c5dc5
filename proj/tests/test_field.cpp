#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"

using namespace pod::algebra::bn254;
using pod::algebra::Drbg;

TEST_CASE("curve family parameters derive from the BN parameter z") {
    mpz_class z(oracle::limbs_mpz(Limbs{kBnZ, 0, 0, 0}));
    mpz_class z2 = z * z, z3 = z2 * z, z4 = z3 * z;
    mpz_class p_expected = 36 * z4 + 36 * z3 + 24 * z2 + 6 * z + 1;
    mpz_class r_expected = 36 * z4 + 36 * z3 + 18 * z2 + 6 * z + 1;
    mpz_class trace = 6 * z2 + 1;

    CHECK(oracle::P() == p_expected);
    CHECK(oracle::R() == r_expected);
    // group order = p + 1 - t
    CHECK(oracle::P() + 1 - trace == oracle::R());
    // optimal ate loop count 6z + 2
    mpz_class loop = 6 * z + 2;
    CHECK(loop == mpz_class("29793968203157093288"));
    CHECK(mpz_sizeinbase(loop.get_mpz_t(), 2) == 65);
    // both moduli prime
    CHECK(mpz_probab_prime_p(oracle::P().get_mpz_t(), 40) != 0);
    CHECK(mpz_probab_prime_p(oracle::R().get_mpz_t(), 40) != 0);
    // tower requirements: p = 3 mod 4, p = 1 mod 6
    CHECK(oracle::P() % 4 == 3);
    CHECK(oracle::P() % 6 == 1);
}

TEST_CASE("montgomery context constants") {
    for (const Mod* md : {&mod_p(), &mod_r()}) {
        mpz_class m = oracle::limbs_mpz(md->m);
        mpz_class r256 = (mpz_class(1) << 256) % m;
        mpz_class r512 = (mpz_class(1) << 512) % m;
        CHECK(oracle::limbs_mpz(md->rone) == r256);
        CHECK(oracle::limbs_mpz(md->r2) == r512);
        // m[0] * inv = -1 mod 2^64
        CHECK(static_cast<u64>(md->m[0] * md->inv) == ~u64{0});
    }
}

template <class FE>
static void field_matches_gmp(const mpz_class& mod, u64 seed) {
    Drbg rng(seed);
    for (int i = 0; i < 300; ++i) {
        mpz_class a = oracle::rand_mpz(rng, mod);
        mpz_class b = oracle::rand_mpz(rng, mod);
        FE fa = FE::from_plain(oracle::mpz_limbs4(a));
        FE fb = FE::from_plain(oracle::mpz_limbs4(b));

        CHECK(oracle::limbs_mpz((fa + fb).plain()) == (a + b) % mod);
        CHECK(oracle::limbs_mpz((fa - fb).plain()) == ((a - b) % mod + mod) % mod);
        CHECK(oracle::limbs_mpz((fa * fb).plain()) == (a * b) % mod);
        CHECK(oracle::limbs_mpz((-fa).plain()) == (mod - a) % mod);
        if (a != 0) {
            mpz_class ia;
            mpz_invert(ia.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
            CHECK(oracle::limbs_mpz(fa.inverse().plain()) == ia);
            CHECK((fa * fa.inverse()) == FE::one());
        }
    }
    // exponentiation vs mpz powm
    for (int i = 0; i < 20; ++i) {
        mpz_class a = oracle::rand_mpz(rng, mod);
        mpz_class e = oracle::rand_mpz(rng, mod);
        mpz_class expect;
        mpz_powm(expect.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
        FE fa = FE::from_plain(oracle::mpz_limbs4(a));
        CHECK(oracle::limbs_mpz(fa.pow(oracle::mpz_limbs4(e)).plain()) == expect);
    }
}

TEST_CASE("base field arithmetic agrees with GMP") { field_matches_gmp<Fp>(oracle::P(), 11); }

TEST_CASE("scalar field arithmetic agrees with GMP") { field_matches_gmp<Fr>(oracle::R(), 12); }

TEST_CASE("field serialization is canonical") {
    Drbg rng(13);
    for (int i = 0; i < 50; ++i) {
        Fp a = oracle::fp_of(oracle::rand_mpz(rng, oracle::P()));
        auto bytes = a.to_bytes();
        auto back = Fp::from_bytes(bytes);
        REQUIRE(back.has_value());
        CHECK(*back == a);
    }
    // values >= p are rejected
    auto pm = mod_p().m;
    Fp probe = Fp::one();
    auto enc = probe.to_bytes();
    std::array<std::uint8_t, 32> modbytes{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 8; ++j)
            modbytes[static_cast<std::size_t>(8 * i + j)] =
                static_cast<std::uint8_t>(pm[3 - static_cast<std::size_t>(i)] >> (8 * (7 - j)));
    CHECK(!Fp::from_bytes(modbytes).has_value());
    CHECK(!Fp::from_bytes(std::span<const std::uint8_t>(enc.data(), 31)).has_value());
    // zero/one round trips
    CHECK(Fp::from_bytes(Fp::zero().to_bytes())->is_zero());
    CHECK(*Fp::from_bytes(Fp::one().to_bytes()) == Fp::one());
}

TEST_CASE("quadratic extension identities") {
    Drbg rng(14);
    auto rand2 = [&] {
        return Fp2{oracle::fp_of(oracle::rand_mpz(rng, oracle::P())),
                   oracle::fp_of(oracle::rand_mpz(rng, oracle::P()))};
    };
    const Fp2 xi{Fp::from_u64(9), Fp::one()};
    for (int i = 0; i < 100; ++i) {
        Fp2 a = rand2(), b = rand2(), c = rand2();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a.square() == a * a);
        CHECK(a.mul_by_xi() == a * xi);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fp2::one());
        CHECK(a.conjugate().conjugate() == a);
        // norm multiplicativity: conj(a)*a is in the base field
        Fp2 n = a * a.conjugate();
        CHECK(n.c1.is_zero());
    }
    // u^2 = -1
    Fp2 u{Fp::zero(), Fp::one()};
    CHECK(u * u == Fp2{-Fp::one(), Fp::zero()});
}

TEST_CASE("quadratic extension square roots") {
    Drbg rng(15);
    int found = 0;
    for (int i = 0; i < 60; ++i) {
        Fp2 a{oracle::fp_of(oracle::rand_mpz(rng, oracle::P())),
              oracle::fp_of(oracle::rand_mpz(rng, oracle::P()))};
        Fp2 sq = a.square();
        auto root = sqrt_fp2(sq);
        REQUIRE(root.has_value());
        CHECK(root->square() == sq);
        if (sqrt_fp2(a).has_value()) ++found;
    }
    // roughly half of random elements are squares
    CHECK(found > 10);
    CHECK(found < 50);
    // base-field embedded cases
    Fp2 four{Fp::from_u64(4), Fp::zero()};
    auto r4 = sqrt_fp2(four);
    REQUIRE(r4.has_value());
    CHECK(r4->square() == four);
    CHECK(sqrt_fp2(Fp2::zero())->is_zero());
}

TEST_CASE("sextic and dodecic extension identities") {
    Drbg rng(16);
    auto randf = [&] { return oracle::fp_of(oracle::rand_mpz(rng, oracle::P())); };
    auto rand6 = [&] { return Fp6{{randf(), randf()}, {randf(), randf()}, {randf(), randf()}}; };
    const Fp6 v{Fp2::zero(), Fp2::one(), Fp2::zero()};
    for (int i = 0; i < 40; ++i) {
        Fp6 a = rand6(), b = rand6(), c = rand6();
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a.mul_by_v() == a * v);
        if (!a.is_zero()) CHECK(a * a.inverse() == Fp6::one());
    }
    // v^3 = xi
    Fp6 v3 = (v * v) * v;
    CHECK(v3.c0 == (Fp2{Fp::from_u64(9), Fp::one()}));
    CHECK(v3.c1.is_zero());
    CHECK(v3.c2.is_zero());

    for (int i = 0; i < 25; ++i) {
        Fp12 a{rand6(), rand6()}, b{rand6(), rand6()}, c{rand6(), rand6()};
        CHECK((a * b) * c == a * (b * c));
        CHECK(a.square() == a * a);
        CHECK(a * a.inverse() == Fp12::one());
        // w^2 = v
        Fp12 w{Fp6::zero(), Fp6::one()};
        CHECK(w * w == Fp12{v, Fp6::zero()});
        (void)c;
    }
}

TEST_CASE("wide-byte reduction matches GMP") {
    Drbg rng(17);
    for (int i = 0; i < 40; ++i) {
        auto raw = rng.bytes(64);
        mpz_class z;
        mpz_import(z.get_mpz_t(), raw.size(), 1, 1, 1, 0, raw.data());
        Fr reduced = Fr::from_wide_bytes(raw);
        CHECK(oracle::of_fr(reduced) == z % oracle::R());
    }
}
