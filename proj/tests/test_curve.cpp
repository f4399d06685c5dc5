#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"

using namespace pod::algebra::bn254;
using pod::algebra::Drbg;

namespace {

Limbs rand_scalar_limbs(Drbg& rng) {
    return oracle::mpz_limbs4(oracle::rand_mpz(rng, oracle::R()));
}

template <class F>
void group_law_suite(const AffinePoint<F>& gen, u64 seed) {
    Drbg rng(seed);
    CHECK(gen.is_on_curve());
    CHECK(!gen.inf);

    // order r: r*G = O, (r-1)*G = -G
    CHECK(point_mul(gen, mod_r().m).is_zero());
    Limbs rm1 = mod_r().m;
    Limbs one{1, 0, 0, 0};
    limbs_sub(rm1, rm1, one);
    CHECK(point_mul(gen, rm1).to_affine() == gen.neg());

    // windowed multiplication vs naive double-and-add
    for (int i = 0; i < 25; ++i) {
        Limbs e = rand_scalar_limbs(rng);
        CHECK(point_mul(gen, e).eq(oracle::naive_mul(gen, e)));
    }

    // associativity / commutativity on random points
    for (int i = 0; i < 25; ++i) {
        auto a = point_mul(gen, rand_scalar_limbs(rng));
        auto b = point_mul(gen, rand_scalar_limbs(rng));
        auto c = point_mul(gen, rand_scalar_limbs(rng));
        CHECK(a.add(b).eq(b.add(a)));
        CHECK(a.add(b).add(c).eq(a.add(b.add(c))));
        // mixed addition agrees with full addition
        auto b_aff = b.to_affine();
        CHECK(a.add_mixed(b_aff).eq(a.add(b)));
        // doubling agrees with adding to itself (degenerate-add branch)
        CHECK(a.dbl().eq(a.add(a)));
        CHECK(a.add(a.neg()).is_zero());
        // identity cases
        CHECK(a.add(JacPoint<F>::infinity()).eq(a));
        CHECK(JacPoint<F>::infinity().add(a).eq(a));
    }

    // batch normalization matches one-at-a-time conversion
    std::vector<JacPoint<F>> pts;
    for (int i = 0; i < 17; ++i) pts.push_back(point_mul(gen, rand_scalar_limbs(rng)));
    pts.push_back(JacPoint<F>::infinity());
    auto affs = batch_to_affine(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(affs[i] == pts[i].to_affine());

    // fixed-base table agrees with generic multiplication
    FixedBaseTable<F> table(gen);
    for (int i = 0; i < 30; ++i) {
        Limbs e = rand_scalar_limbs(rng);
        CHECK(table.mul(e).eq(point_mul(gen, e)));
    }
    CHECK(table.mul(Limbs{0, 0, 0, 0}).is_zero());
    CHECK(table.mul(one).to_affine() == gen);

    // interleaved multi-scalar multiplication vs the naive product
    for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{5}, std::size_t{16}}) {
        std::vector<AffinePoint<F>> bases;
        std::vector<Limbs> exps;
        JacPoint<F> expect = JacPoint<F>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            bases.push_back(point_mul(gen, rand_scalar_limbs(rng)).to_affine());
            exps.push_back(rand_scalar_limbs(rng));
            expect = expect.add(point_mul(bases.back(), exps.back()));
        }
        CHECK(multi_point_mul<F>(bases, exps).eq(expect));
    }
}

}  // namespace

TEST_CASE("G1 group law") { group_law_suite<Fp>(g1_generator(), 21); }

TEST_CASE("G2 group law") { group_law_suite<Fp2>(g2_generator(), 22); }

TEST_CASE("G2 generator lies in the order-r subgroup") {
    const auto& g = g2_generator();
    CHECK(g.is_on_curve());
    CHECK(!g.inf);
    CHECK(in_g2(g));
    // derivation is deterministic
    CHECK(g2_generator() == g);
    // a point cleared by a *different* run of the same procedure is equal:
    // the search is pure function of curve constants, nothing else.
}

TEST_CASE("twist curve really is a different group") {
    // a random twist point before cofactor clearing usually fails the
    // subgroup check, which is exactly why decompression enforces it
    Drbg rng(23);
    int outside = 0;
    for (u64 ctr = 0; ctr < 40; ++ctr) {
        Fp2 x{oracle::fp_of(oracle::rand_mpz(rng, oracle::P())),
              oracle::fp_of(oracle::rand_mpz(rng, oracle::P()))};
        auto y = sqrt_fp2(x.square() * x + g2_b());
        if (!y) continue;
        AffinePoint<Fp2> p = AffinePoint<Fp2>::make(x, *y);
        CHECK(p.is_on_curve());
        if (!in_g2(p)) ++outside;
    }
    CHECK(outside > 0);
}

TEST_CASE("G1 compression round-trips") {
    Drbg rng(24);
    const auto& g = g1_generator();
    for (int i = 0; i < 30; ++i) {
        auto p = point_mul(g, rand_scalar_limbs(rng)).to_affine();
        auto enc = g1_compress(p);
        auto dec = g1_decompress(enc);
        REQUIRE(dec.has_value());
        CHECK(*dec == p);
    }
    // infinity
    auto inf_enc = g1_compress(AffinePoint<Fp>::infinity());
    auto inf_dec = g1_decompress(inf_enc);
    REQUIRE(inf_dec.has_value());
    CHECK(inf_dec->inf);
    // malformed: non-canonical infinity encodings and off-curve x
    auto bad = inf_enc;
    bad[31] = 1;
    CHECK(!g1_decompress(bad).has_value());
    int rejected = 0;
    for (int i = 0; i < 20; ++i) {
        auto junk = rng.bytes(32);
        junk[0] &= 0x3f;
        if (!g1_decompress(junk).has_value()) ++rejected;
    }
    CHECK(rejected > 0);  // ~half of field values are not x-coordinates
}

TEST_CASE("G2 compression round-trips and enforces the subgroup") {
    Drbg rng(25);
    const auto& g = g2_generator();
    for (int i = 0; i < 20; ++i) {
        auto p = point_mul(g, rand_scalar_limbs(rng)).to_affine();
        auto enc = g2_compress(p);
        auto dec = g2_decompress(enc);
        REQUIRE(dec.has_value());
        CHECK(*dec == p);
    }
    auto inf_enc = g2_compress(AffinePoint<Fp2>::infinity());
    REQUIRE(g2_decompress(inf_enc).has_value());
    CHECK(g2_decompress(inf_enc)->inf);

    // an on-curve point outside the order-r subgroup must not decompress
    for (u64 ctr = 0;; ++ctr) {
        Fp2 x{Fp::from_u64(ctr), Fp::one()};
        auto y = sqrt_fp2(x.square() * x + g2_b());
        if (!y) continue;
        AffinePoint<Fp2> p = AffinePoint<Fp2>::make(x, *y);
        if (in_g2(p)) continue;  // astronomically unlikely
        CHECK(!g2_decompress(g2_compress(p)).has_value());
        break;
    }
}
