#include "pod/algebra/group.hpp"

#include <cassert>
#include <stdexcept>

namespace pod::algebra {

namespace bn = bn254;

Scalar Scalar::from_u64(std::uint64_t v) { return Scalar(bn::Fr::from_u64(v)); }

Scalar Scalar::random(Drbg& rng) {
    std::array<std::uint8_t, 64> wide{};
    rng.fill(wide);
    return from_wide_bytes(wide);
}

Scalar Scalar::random_nonzero(Drbg& rng) {
    for (;;) {
        Scalar s = random(rng);
        if (!s.is_zero()) return s;
    }
}

std::optional<Scalar> Scalar::from_bytes(std::span<const std::uint8_t> b) {
    auto v = bn::Fr::from_bytes(b);
    if (!v) return std::nullopt;
    return Scalar(*v);
}

Scalar Scalar::from_wide_bytes(std::span<const std::uint8_t> b) {
    return Scalar(bn::Fr::from_wide_bytes(b));
}

std::array<std::uint8_t, 32> Scalar::to_bytes() const { return v_.to_bytes(); }

namespace {

const bn::FixedBaseTable<bn::Fp>& g1_table() {
    static const bn::FixedBaseTable<bn::Fp> t(bn::g1_generator());
    return t;
}

const bn::FixedBaseTable<bn::Fp2>& g2_table() {
    static const bn::FixedBaseTable<bn::Fp2> t(bn::g2_generator());
    return t;
}

}  // namespace

GroupElement GroupElement::generator() { return GroupElement(bn::g1_generator()); }

GroupElement GroupElement::from_exponent(const Scalar& s) {
    return GroupElement(g1_table().mul(s.plain()).to_affine());
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    return GroupElement(bn::JacPoint<bn::Fp>::from_affine(p_).add_mixed(o.p_).to_affine());
}

GroupElement GroupElement::exp(const Scalar& s) const {
    return GroupElement(bn::point_mul(p_, s.plain()).to_affine());
}

GroupElement GroupElement::product(std::span<const GroupElement> xs) {
    auto acc = bn::JacPoint<bn::Fp>::infinity();
    for (const auto& x : xs) acc = acc.add_mixed(x.p_);
    return GroupElement(acc.to_affine());
}

std::optional<GroupElement> GroupElement::from_bytes(std::span<const std::uint8_t> b) {
    auto p = bn::g1_decompress(b);
    if (!p) return std::nullopt;
    return GroupElement(*p);
}

DualGroupElement DualGroupElement::generator() {
    return DualGroupElement(bn::g1_generator(), bn::g2_generator());
}

DualGroupElement DualGroupElement::from_exponent(const Scalar& s) {
    return DualGroupElement(g1_table().mul(s.plain()).to_affine(),
                            g2_table().mul(s.plain()).to_affine());
}

DualGroupElement DualGroupElement::operator*(const DualGroupElement& o) const {
    return DualGroupElement(bn::JacPoint<bn::Fp>::from_affine(g1_).add_mixed(o.g1_).to_affine(),
                            bn::JacPoint<bn::Fp2>::from_affine(g2_).add_mixed(o.g2_).to_affine());
}

DualGroupElement DualGroupElement::exp(const Scalar& s) const {
    return DualGroupElement(bn::point_mul(g1_, s.plain()).to_affine(),
                            bn::point_mul(g2_, s.plain()).to_affine());
}

DualGroupElement DualGroupElement::product(std::span<const DualGroupElement> xs) {
    auto a = bn::JacPoint<bn::Fp>::infinity();
    auto b = bn::JacPoint<bn::Fp2>::infinity();
    for (const auto& x : xs) {
        a = a.add_mixed(x.g1_);
        b = b.add_mixed(x.g2_);
    }
    return DualGroupElement(a.to_affine(), b.to_affine());
}

std::array<std::uint8_t, 96> DualGroupElement::to_bytes() const {
    std::array<std::uint8_t, 96> out{};
    auto a = bn::g1_compress(g1_);
    auto b = bn::g2_compress(g2_);
    std::copy(a.begin(), a.end(), out.begin());
    std::copy(b.begin(), b.end(), out.begin() + 32);
    return out;
}

std::optional<DualGroupElement> DualGroupElement::from_bytes(std::span<const std::uint8_t> b) {
    if (b.size() != 96) return std::nullopt;
    auto p1 = bn::g1_decompress(b.subspan(0, 32));
    auto p2 = bn::g2_decompress(b.subspan(32, 64));
    if (!p1 || !p2) return std::nullopt;
    // Both halves must be the identity together, or neither.
    if (p1->inf != p2->inf) return std::nullopt;
    return DualGroupElement(*p1, *p2);
}

std::array<std::uint8_t, 384> TargetElement::to_bytes() const {
    std::array<std::uint8_t, 384> out{};
    const bn::Fp* coeffs[12] = {
        &v_.c0.c0.c0, &v_.c0.c0.c1, &v_.c0.c1.c0, &v_.c0.c1.c1, &v_.c0.c2.c0, &v_.c0.c2.c1,
        &v_.c1.c0.c0, &v_.c1.c0.c1, &v_.c1.c1.c0, &v_.c1.c1.c1, &v_.c1.c2.c0, &v_.c1.c2.c1,
    };
    for (int i = 0; i < 12; ++i) {
        auto b = coeffs[i]->to_bytes();
        std::copy(b.begin(), b.end(), out.begin() + 32 * i);
    }
    return out;
}

std::optional<TargetElement> TargetElement::from_bytes(std::span<const std::uint8_t> b) {
    if (b.size() != 384) return std::nullopt;
    bn::Fp12 v;
    bn::Fp* coeffs[12] = {
        &v.c0.c0.c0, &v.c0.c0.c1, &v.c0.c1.c0, &v.c0.c1.c1, &v.c0.c2.c0, &v.c0.c2.c1,
        &v.c1.c0.c0, &v.c1.c0.c1, &v.c1.c1.c0, &v.c1.c1.c1, &v.c1.c2.c0, &v.c1.c2.c1,
    };
    for (int i = 0; i < 12; ++i) {
        auto f = bn::Fp::from_bytes(b.subspan(static_cast<std::size_t>(32) * i, 32));
        if (!f) return std::nullopt;
        *coeffs[i] = *f;
    }
    if (!bn::gt_is_valid(v)) return std::nullopt;  // order-r subgroup only
    return TargetElement(v);
}

TargetElement pair(const DualGroupElement& a, const DualGroupElement& b) {
    return TargetElement(bn::pairing(a.p1(), b.p2()));
}

TargetElement pair_product(std::span<const DualGroupElement> lhs,
                           std::span<const DualGroupElement> rhs) {
    if (lhs.size() != rhs.size()) throw std::invalid_argument("pair_product: length mismatch");
    std::vector<bn::AffinePoint<bn::Fp>> ps;
    std::vector<bn::AffinePoint<bn::Fp2>> qs;
    ps.reserve(lhs.size());
    qs.reserve(rhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        ps.push_back(lhs[i].p1());
        qs.push_back(rhs[i].p2());
    }
    return TargetElement(bn::pairing_product(ps, qs));
}

GroupElement multi_exp(std::span<const GroupElement> bases, std::span<const Scalar> exps) {
    if (bases.size() != exps.size()) throw std::invalid_argument("multi_exp: length mismatch");
    std::vector<bn::AffinePoint<bn::Fp>> ps;
    std::vector<bn::Limbs> es;
    ps.reserve(bases.size());
    es.reserve(exps.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        ps.push_back(bases[i].affine());
        es.push_back(exps[i].plain());
    }
    return GroupElement(bn::multi_point_mul<bn::Fp>(ps, es).to_affine());
}

DualGroupElement multi_exp(std::span<const DualGroupElement> bases,
                           std::span<const Scalar> exps) {
    if (bases.size() != exps.size()) throw std::invalid_argument("multi_exp: length mismatch");
    std::vector<bn::AffinePoint<bn::Fp>> p1;
    std::vector<bn::AffinePoint<bn::Fp2>> p2;
    std::vector<bn::Limbs> es;
    p1.reserve(bases.size());
    p2.reserve(bases.size());
    es.reserve(exps.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        p1.push_back(bases[i].p1());
        p2.push_back(bases[i].p2());
        es.push_back(exps[i].plain());
    }
    return DualGroupElement(bn::multi_point_mul<bn::Fp>(p1, es).to_affine(),
                            bn::multi_point_mul<bn::Fp2>(p2, es).to_affine());
}

void DualFixedBase::build(const DualGroupElement& base) {
    t1_.build(base.p1());
    t2_.build(base.p2());
    built_ = true;
}

DualGroupElement DualFixedBase::exp(const Scalar& s) const {
    assert(built_);
    auto e = s.plain();
    return DualGroupElement(t1_.mul(e).to_affine(), t2_.mul(e).to_affine());
}

Scalar hash_to_scalar(std::string_view domain, std::span<const std::uint8_t> data) {
    ByteWriter w;
    w.block(domain);
    w.block(data);
    Bytes wide = hash_expand(w.bytes(), 64);
    return Scalar::from_wide_bytes(wide);
}

const Scalar& theta_attribute() {
    static const Scalar t = Scalar::one();
    return t;
}

Scalar hash_to_attribute(std::string_view label) {
    for (std::uint32_t ctr = 0;; ++ctr) {
        ByteWriter w;
        w.block(label);
        w.u32(ctr);
        Scalar s = hash_to_scalar("pod.attr.v1", w.bytes());
        if (!s.is_zero() && s != theta_attribute()) return s;
    }
}

}  // namespace pod::algebra
