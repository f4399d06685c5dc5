#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <string>
#include <vector>

#include "pod/oabs/oabs.hpp"
#include "support/oracles.hpp"

using namespace pod;
using namespace pod::oabs;
using algebra::Drbg;
using algebra::DualGroupElement;
using algebra::Scalar;
using algebra::TargetElement;

namespace {

Bytes msg(std::string_view s) { return Bytes(s.begin(), s.end()); }

AttributeSet attrs(std::initializer_list<std::string> labels) {
    return AttributeSet::from_labels(std::vector<std::string>(labels));
}

policy::AccessFormula formula(std::string_view text) {
    auto r = policy::parse_formula(text);
    REQUIRE(r.has_value());
    return r.value();
}

struct Fixture {
    Drbg rng{7700};
    SetupResult sr;
    KeyPair keys;

    explicit Fixture(std::size_t n = 8, std::string_view pol = "fw AND (eu OR us)")
        : sr(setup(rng, n, 256)), keys(keygen(sr.params, sr.msk, formula(pol), rng)) {}
};

}  // namespace

TEST_CASE("sign and verify round-trip") {
    Fixture fx;
    AttributeSet w = attrs({"fw", "eu"});
    Bytes m = msg("update-manifest-v1");

    auto partial = sign_out(fx.sr.params, fx.keys.outsourcing, w, fx.rng);
    REQUIRE(partial.has_value());
    auto sig = sign(fx.sr.params, fx.keys.device, partial.value(), w, m, fx.rng);
    REQUIRE(sig.has_value());

    CHECK(verify(fx.sr.params, m, w, sig.value()));

    // Wrong message, wrong attribute set, mutated components all fail.
    CHECK_FALSE(verify(fx.sr.params, msg("update-manifest-v2"), w, sig.value()));
    CHECK_FALSE(verify(fx.sr.params, m, attrs({"fw", "us"}), sig.value()));

    Signature bad = sig.value();
    bad.sigma0 = bad.sigma0 * fx.sr.params.g;
    CHECK_FALSE(verify(fx.sr.params, m, w, bad));
    bad = sig.value();
    bad.sigma1 = bad.sigma1 * fx.sr.params.g;
    CHECK_FALSE(verify(fx.sr.params, m, w, bad));
    bad = sig.value();
    bad.sigma2 = bad.sigma2 * fx.sr.params.g;
    CHECK_FALSE(verify(fx.sr.params, m, w, bad));

    // A different parameter set rejects the signature outright.
    Drbg other_rng(7701);
    auto other = setup(other_rng, 8, 256);
    CHECK_FALSE(verify(other.params, m, w, sig.value()));
}

TEST_CASE("alternative satisfying sets sign independently") {
    Fixture fx;
    Bytes m = msg("payload");
    for (auto labels : {attrs({"fw", "us"}), attrs({"fw", "eu", "us"})}) {
        auto sig = sign_full(fx.sr.params, fx.keys, labels, m, fx.rng);
        REQUIRE(sig.has_value());
        CHECK(verify(fx.sr.params, m, labels, sig.value()));
    }
}

TEST_CASE("verification equation holds pairing by pairing") {
    Fixture fx;
    AttributeSet w = attrs({"fw", "eu"});
    Bytes m = msg("equation-check");
    auto sig = sign_full(fx.sr.params, fx.keys, w, m, fx.rng);
    REQUIRE(sig.has_value());
    const Signature& s = sig.value();
    const PublicParams& pp = fx.sr.params;

    // Recompute the two aggregates exactly as the verifier does.
    auto coeffs = policy::vanishing_coefficients(w, pp.theta, pp.n);
    REQUIRE(coeffs.has_value());
    std::vector<DualGroupElement> vb;
    std::vector<Scalar> ve;
    for (std::size_t k = 1; k <= pp.n; ++k)
        if (!(*coeffs)[k - 1].is_zero()) {
            vb.push_back(pp.V[k]);
            ve.push_back((*coeffs)[k - 1]);
        }
    DualGroupElement Va = pp.V[0] * algebra::multi_exp(vb, ve);

    ByteWriter inner;
    inner.block(m);
    inner.raw(s.sigma1.to_bytes());
    inner.block(w.canonical_bytes());
    inner.raw(pp.theta.to_bytes());
    ByteWriter outer;
    outer.block("pod.oabs.msg.v1");
    outer.block(inner.take());
    auto bits = algebra::hash_to_bits(outer.take(), pp.l);
    std::vector<DualGroupElement> uf = {pp.u[0]};
    for (std::size_t j = 1; j <= pp.l; ++j)
        if (bits[j - 1]) uf.push_back(pp.u[j]);
    DualGroupElement U = DualGroupElement::product(uf);

    // Full-exponentiation pairings, no shared shortcut.
    TargetElement lhs = algebra::pair(s.sigma2, pp.g);
    TargetElement rhs = pp.Z * algebra::pair(s.sigma0, U) * algebra::pair(s.sigma1, Va);
    CHECK(lhs == rhs);

    // Independent reference pairing: it differs from the production map by a
    // fixed exponent, so the signature ratio
    //   t(sigma2, g) / (t(sigma0, U) * t(sigma1, Va))
    // must equal the same (reference-side) commitment for every signature.
    auto tate_ratio = [&](const Signature& sg, const DualGroupElement& Ue,
                          const DualGroupElement& Ve) {
        auto num = oracle::tate_pairing(sg.sigma2.p1(), pp.g.p2());
        auto d0 = oracle::tate_pairing(sg.sigma0.p1(), Ue.p2());
        auto d1 = oracle::tate_pairing(sg.sigma1.p1(), Ve.p2());
        return num * (d0 * d1).inverse();
    };
    auto ratio1 = tate_ratio(s, U, Va);
    CHECK(!ratio1.is_one());

    Bytes m2 = msg("equation-check-second");
    AttributeSet w2 = attrs({"fw", "us"});
    auto sig2 = sign_full(fx.sr.params, fx.keys, w2, m2, fx.rng);
    REQUIRE(sig2.has_value());
    auto coeffs2 = policy::vanishing_coefficients(w2, pp.theta, pp.n);
    REQUIRE(coeffs2.has_value());
    std::vector<DualGroupElement> vb2;
    std::vector<Scalar> ve2;
    for (std::size_t k = 1; k <= pp.n; ++k)
        if (!(*coeffs2)[k - 1].is_zero()) {
            vb2.push_back(pp.V[k]);
            ve2.push_back((*coeffs2)[k - 1]);
        }
    DualGroupElement Va2 = pp.V[0] * algebra::multi_exp(vb2, ve2);
    ByteWriter inner2;
    inner2.block(m2);
    inner2.raw(sig2.value().sigma1.to_bytes());
    inner2.block(w2.canonical_bytes());
    inner2.raw(pp.theta.to_bytes());
    ByteWriter outer2;
    outer2.block("pod.oabs.msg.v1");
    outer2.block(inner2.take());
    auto bits2 = algebra::hash_to_bits(outer2.take(), pp.l);
    std::vector<DualGroupElement> uf2 = {pp.u[0]};
    for (std::size_t j = 1; j <= pp.l; ++j)
        if (bits2[j - 1]) uf2.push_back(pp.u[j]);
    DualGroupElement U2 = DualGroupElement::product(uf2);

    CHECK(tate_ratio(sig2.value(), U2, Va2) == ratio1);
}

TEST_CASE("key rows stay consistent with the public commitment") {
    Fixture fx(8, "a AND b AND c");
    const PublicParams& pp = fx.sr.params;
    AttributeSet w = attrs({"a", "b", "c"});

    auto recon = policy::reconstruction_coefficients(fx.keys.outsourcing.structure, w);
    REQUIRE(recon.has_value());
    auto coeffs = policy::vanishing_coefficients(w, pp.theta, pp.n);
    REQUIRE(coeffs.has_value());

    // blinded(row) = d * prod dpp^{c_x}; summing shares over a satisfying set
    // plus the device row reassembles the full master secret:
    //   e(prod blinded_i^{w_i} * blinded_theta, g)
    //     == Z * e(prod d'_i^{w_i} * d'_theta, V0 * prod V^c)
    auto blinded = [&](const KeyRow& row) {
        std::vector<DualGroupElement> bases;
        std::vector<Scalar> exps;
        for (std::size_t x = 2; x <= pp.n; ++x)
            if (!(*coeffs)[x - 1].is_zero()) {
                bases.push_back(row.dpp[x - 2]);
                exps.push_back((*coeffs)[x - 1]);
            }
        return row.d * algebra::multi_exp(bases, exps);
    };

    std::vector<DualGroupElement> lb, rb;
    std::vector<Scalar> le, re;
    for (const auto& [i, wi] : *recon) {
        lb.push_back(blinded(fx.keys.outsourcing.rows[i]));
        le.push_back(wi);
        rb.push_back(fx.keys.outsourcing.rows[i].dp);
        re.push_back(wi);
    }
    DualGroupElement left = algebra::multi_exp(lb, le) * blinded(fx.keys.device.theta_row);
    DualGroupElement right = algebra::multi_exp(rb, re) * fx.keys.device.theta_row.dp;

    std::vector<DualGroupElement> vb;
    std::vector<Scalar> ve;
    for (std::size_t k = 1; k <= pp.n; ++k)
        if (!(*coeffs)[k - 1].is_zero()) {
            vb.push_back(pp.V[k]);
            ve.push_back((*coeffs)[k - 1]);
        }
    DualGroupElement Va = pp.V[0] * algebra::multi_exp(vb, ve);

    CHECK(algebra::pair(left, pp.g) == pp.Z * algebra::pair(right, Va));
}

TEST_CASE("signing failures are typed") {
    Fixture fx;  // policy: fw AND (eu OR us), n = 8

    // Unsatisfying attribute sets.
    for (auto w : {AttributeSet(), attrs({"eu"}), attrs({"eu", "us"}), attrs({"other"})}) {
        auto r = sign_out(fx.sr.params, fx.keys.outsourcing, w, fx.rng);
        REQUIRE_FALSE(r.has_value());
        CHECK(r.error() == Error::PolicyUnsatisfied);
    }

    // Capacity: n = 4 admits at most |W| = 2.
    Drbg rng2(7702);
    auto small = setup(rng2, 4, 256);
    auto keys = keygen(small.params, small.msk, formula("a AND b AND c"), rng2);
    auto r = sign_out(small.params, keys.outsourcing, attrs({"a", "b", "c"}), rng2);
    REQUIRE_FALSE(r.has_value());
    CHECK(r.error() == Error::CapacityExceeded);
    CHECK_FALSE(error_text(r.error()).empty());

    // Keys inconsistent with the parameter dimension.
    OutsourcingKey broken = fx.keys.outsourcing;
    broken.rows[0].dpp.pop_back();
    auto rb = sign_out(fx.sr.params, broken, attrs({"fw", "eu"}), fx.rng);
    REQUIRE_FALSE(rb.has_value());
    CHECK(rb.error() == Error::MalformedKey);

    DeviceKey dbroken = fx.keys.device;
    dbroken.theta_row.dpp.pop_back();
    auto partial = sign_out(fx.sr.params, fx.keys.outsourcing, attrs({"fw", "eu"}), fx.rng);
    REQUIRE(partial.has_value());
    auto rs = sign(fx.sr.params, dbroken, partial.value(), attrs({"fw", "eu"}), msg("m"), fx.rng);
    REQUIRE_FALSE(rs.has_value());
    CHECK(rs.error() == Error::MalformedKey);
}

TEST_CASE("attribute capacity boundary is inclusive") {
    // |W| + 2 == n exactly: three attributes need n = 5.
    Drbg rng(7703);
    auto sr = setup(rng, 5, 256);
    auto keys = keygen(sr.params, sr.msk, formula("x AND y AND z"), rng);
    AttributeSet w = attrs({"x", "y", "z"});
    Bytes m = msg("boundary");
    auto sig = sign_full(sr.params, keys, w, m, rng);
    REQUIRE(sig.has_value());
    CHECK(verify(sr.params, m, w, sig.value()));
}

TEST_CASE("deterministic signatures from a fixed seed") {
    auto run = [](std::uint64_t seed) {
        Drbg rng(seed);
        auto sr = setup(rng, 6, 256);
        auto keys = keygen(sr.params, sr.msk, formula("p AND q"), rng);
        auto sig = sign_full(sr.params, keys, attrs({"p", "q"}), msg("det"), rng);
        REQUIRE(sig.has_value());
        return std::pair{sr, sig.value().to_bytes()};
    };
    auto [sr1, b1] = run(99);
    auto [sr2, b2] = run(99);
    auto [sr3, b3] = run(100);
    CHECK(b1 == b2);
    CHECK(sr1.params.to_bytes() == sr2.params.to_bytes());
    CHECK(b1 != b3);
}

TEST_CASE("serialization round-trips") {
    Fixture fx(5, "a AND (b OR c)");
    AttributeSet w = attrs({"a", "c"});
    Bytes m = msg("wire");

    Bytes ppb = fx.sr.params.to_bytes();
    auto pp2 = PublicParams::from_bytes(ppb);
    REQUIRE(pp2.has_value());
    CHECK(pp2->to_bytes() == ppb);

    Bytes okb = fx.keys.outsourcing.to_bytes();
    auto ok2 = OutsourcingKey::from_bytes(okb);
    REQUIRE(ok2.has_value());
    CHECK(ok2->to_bytes() == okb);

    Bytes dkb = fx.keys.device.to_bytes();
    auto dk2 = DeviceKey::from_bytes(dkb);
    REQUIRE(dk2.has_value());
    CHECK(dk2->to_bytes() == dkb);

    auto partial = sign_out(fx.sr.params, fx.keys.outsourcing, w, fx.rng);
    REQUIRE(partial.has_value());
    Bytes pb = partial.value().to_bytes();
    auto p2 = PartialSignature::from_bytes(pb);
    REQUIRE(p2.has_value());
    CHECK(p2->to_bytes() == pb);

    auto sig = sign(fx.sr.params, fx.keys.device, partial.value(), w, m, fx.rng);
    REQUIRE(sig.has_value());
    Bytes sb = sig.value().to_bytes();
    auto s2 = Signature::from_bytes(sb);
    REQUIRE(s2.has_value());
    CHECK(s2->to_bytes() == sb);

    // Deserialized material keeps working end to end.
    auto partial2 = sign_out(*pp2, *ok2, w, fx.rng);
    REQUIRE(partial2.has_value());
    auto sig2 = sign(*pp2, *dk2, partial2.value(), w, m, fx.rng);
    REQUIRE(sig2.has_value());
    CHECK(verify(fx.sr.params, m, w, sig2.value()));
    CHECK(verify(*pp2, m, w, s2.value()));

    // Truncations and trailing bytes are rejected everywhere.
    for (Bytes* b : {&ppb, &okb, &dkb, &pb, &sb}) {
        Bytes cut(b->begin(), b->end() - 1);
        Bytes pad = *b;
        pad.push_back(0);
        if (b == &ppb) {
            CHECK_FALSE(PublicParams::from_bytes(cut).has_value());
            CHECK_FALSE(PublicParams::from_bytes(pad).has_value());
        } else if (b == &okb) {
            CHECK_FALSE(OutsourcingKey::from_bytes(cut).has_value());
            CHECK_FALSE(OutsourcingKey::from_bytes(pad).has_value());
        } else if (b == &dkb) {
            CHECK_FALSE(DeviceKey::from_bytes(cut).has_value());
            CHECK_FALSE(DeviceKey::from_bytes(pad).has_value());
        } else if (b == &pb) {
            CHECK_FALSE(PartialSignature::from_bytes(cut).has_value());
            CHECK_FALSE(PartialSignature::from_bytes(pad).has_value());
        } else {
            CHECK_FALSE(Signature::from_bytes(cut).has_value());
            CHECK_FALSE(Signature::from_bytes(pad).has_value());
        }
    }
}

TEST_CASE("timing snapshot at protocol-sized parameters") {
    using clock = std::chrono::steady_clock;
    Drbg rng(7704);
    auto t0 = clock::now();
    auto sr = setup(rng, 16, 256);
    auto t1 = clock::now();
    auto keys = keygen(sr.params, sr.msk, formula("fw AND (eu OR us) AND tier1"), rng);
    auto t2 = clock::now();
    AttributeSet w = attrs({"fw", "eu", "tier1"});
    Bytes m = msg("timing");
    auto partial = sign_out(sr.params, keys.outsourcing, w, rng);
    REQUIRE(partial.has_value());
    auto t3 = clock::now();
    auto sig = sign(sr.params, keys.device, partial.value(), w, m, rng);
    REQUIRE(sig.has_value());
    auto t4 = clock::now();
    bool okv = verify(sr.params, m, w, sig.value());
    auto t5 = clock::now();
    CHECK(okv);

    auto ms = [](auto a, auto b) {
        return std::chrono::duration_cast<std::chrono::microseconds>(b - a).count() / 1000.0;
    };
    MESSAGE("setup ", ms(t0, t1), " ms, keygen ", ms(t1, t2), " ms, sign_out ", ms(t2, t3),
            " ms, sign ", ms(t3, t4), " ms, verify ", ms(t4, t5), " ms");
    CHECK(ms(t4, t5) < 250.0);
    CHECK(ms(t2, t3) < 500.0);
}
