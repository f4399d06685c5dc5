#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pod/algebra/bn254/pairing.hpp"
#include "pod/algebra/hash.hpp"
#include "pod/algebra/rng.hpp"
#include "pod/bytes.hpp"

// Public algebra interface used by every scheme in this library. The
// signature scheme is written for a symmetric pairing e : G x G -> GT; BN254
// is asymmetric, so DualGroupElement carries a (G1, G2) pair sharing one
// discrete logarithm and pair(a, b) maps to e(a.G1, b.G2). Schemes that only
// need a plain DLOG group (the double-signing scheme, hybrid encryption,
// ledger signatures) use the G1-only GroupElement.

namespace pod::algebra {

class Scalar {
public:
    Scalar() = default;  // zero

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return from_u64(1); }
    static Scalar from_u64(std::uint64_t v);

    // Uniform in Z_r (64-byte expansion reduced mod r).
    static Scalar random(Drbg& rng);
    // Uniform in Z_r^* (resamples zero).
    static Scalar random_nonzero(Drbg& rng);

    static std::optional<Scalar> from_bytes(std::span<const std::uint8_t> b);
    static Scalar from_wide_bytes(std::span<const std::uint8_t> b);
    std::array<std::uint8_t, 32> to_bytes() const;

    bool is_zero() const { return v_.is_zero(); }
    bool operator==(const Scalar& o) const { return v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return v_ != o.v_; }
    // Total order on plain integer values (canonical sort for attribute sets).
    int cmp(const Scalar& o) const { return v_.cmp(o.v_); }
    bool operator<(const Scalar& o) const { return cmp(o) < 0; }

    Scalar operator+(const Scalar& o) const { return Scalar(v_ + o.v_); }
    Scalar operator-(const Scalar& o) const { return Scalar(v_ - o.v_); }
    Scalar operator*(const Scalar& o) const { return Scalar(v_ * o.v_); }
    Scalar operator-() const { return Scalar(-v_); }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar inverse() const { return Scalar(v_.inverse()); }

    // Backend access (internal use by the algebra layer itself).
    explicit Scalar(const bn254::Fr& v) : v_(v) {}
    const bn254::Fr& fr() const { return v_; }
    bn254::Limbs plain() const { return v_.plain(); }

private:
    bn254::Fr v_;
};

// G1 element, affine storage, canonical 32-byte compressed encoding.
class GroupElement {
public:
    GroupElement() = default;  // identity

    static GroupElement identity() { return GroupElement(); }
    static GroupElement generator();
    // generator^s via the shared fixed-base table.
    static GroupElement from_exponent(const Scalar& s);

    bool is_identity() const { return p_.inf; }
    bool operator==(const GroupElement& o) const { return p_ == o.p_; }
    bool operator!=(const GroupElement& o) const { return !(p_ == o.p_); }

    GroupElement operator*(const GroupElement& o) const;  // group operation
    GroupElement inverse() const { return GroupElement(p_.neg()); }
    GroupElement exp(const Scalar& s) const;

    // Product of many elements with one shared normalization.
    static GroupElement product(std::span<const GroupElement> xs);

    std::array<std::uint8_t, 32> to_bytes() const { return bn254::g1_compress(p_); }
    static std::optional<GroupElement> from_bytes(std::span<const std::uint8_t> b);

    explicit GroupElement(const bn254::AffinePoint<bn254::Fp>& p) : p_(p) {}
    const bn254::AffinePoint<bn254::Fp>& affine() const { return p_; }

private:
    bn254::AffinePoint<bn254::Fp> p_ = bn254::AffinePoint<bn254::Fp>::infinity();
};

// The symmetric-group stand-in: one logical element materialized in both
// source groups. All scheme-level exponentiations keep the two halves in
// lock-step; deserialization checks membership of both halves (the shared
// discrete log itself is not efficiently checkable and is a producer
// invariant, cross-audited by pairing tests).
class DualGroupElement {
public:
    DualGroupElement() = default;  // identity

    static DualGroupElement identity() { return DualGroupElement(); }
    static DualGroupElement generator();
    static DualGroupElement from_exponent(const Scalar& s);

    bool is_identity() const { return g1_.inf && g2_.inf; }
    bool operator==(const DualGroupElement& o) const { return g1_ == o.g1_ && g2_ == o.g2_; }
    bool operator!=(const DualGroupElement& o) const { return !(*this == o); }

    DualGroupElement operator*(const DualGroupElement& o) const;
    DualGroupElement inverse() const { return DualGroupElement(g1_.neg(), g2_.neg()); }
    DualGroupElement exp(const Scalar& s) const;

    static DualGroupElement product(std::span<const DualGroupElement> xs);

    // 96 bytes: G1 compressed || G2 compressed.
    std::array<std::uint8_t, 96> to_bytes() const;
    static std::optional<DualGroupElement> from_bytes(std::span<const std::uint8_t> b);

    GroupElement left() const { return GroupElement(g1_); }

    DualGroupElement(const bn254::AffinePoint<bn254::Fp>& a,
                     const bn254::AffinePoint<bn254::Fp2>& b)
        : g1_(a), g2_(b) {}
    const bn254::AffinePoint<bn254::Fp>& p1() const { return g1_; }
    const bn254::AffinePoint<bn254::Fp2>& p2() const { return g2_; }

private:
    bn254::AffinePoint<bn254::Fp> g1_ = bn254::AffinePoint<bn254::Fp>::infinity();
    bn254::AffinePoint<bn254::Fp2> g2_ = bn254::AffinePoint<bn254::Fp2>::infinity();
};

class TargetElement {
public:
    TargetElement() : v_(bn254::Fp12::one()) {}

    static TargetElement identity() { return TargetElement(); }

    bool is_identity() const { return v_.is_one(); }
    bool operator==(const TargetElement& o) const { return v_ == o.v_; }
    bool operator!=(const TargetElement& o) const { return !(v_ == o.v_); }

    TargetElement operator*(const TargetElement& o) const { return TargetElement(v_ * o.v_); }
    TargetElement inverse() const { return TargetElement(v_.inverse()); }
    TargetElement pow(const Scalar& s) const { return TargetElement(bn254::gt_pow(v_, s.plain())); }

    // 384 bytes: twelve Fp coefficients, c0 tower-first.
    std::array<std::uint8_t, 384> to_bytes() const;
    static std::optional<TargetElement> from_bytes(std::span<const std::uint8_t> b);

    explicit TargetElement(const bn254::Fp12& v) : v_(v) {}
    const bn254::Fp12& fp12() const { return v_; }

private:
    bn254::Fp12 v_;
};

// e(a.G1, b.G2)
TargetElement pair(const DualGroupElement& a, const DualGroupElement& b);
// prod_i e(lhs[i].G1, rhs[i].G2) with one shared final exponentiation.
TargetElement pair_product(std::span<const DualGroupElement> lhs,
                           std::span<const DualGroupElement> rhs);

// Interleaved multi-exponentiation prod_i bases[i]^exps[i].
GroupElement multi_exp(std::span<const GroupElement> bases, std::span<const Scalar> exps);
DualGroupElement multi_exp(std::span<const DualGroupElement> bases,
                           std::span<const Scalar> exps);

// Reusable fixed-base table for one dual element (scheme setup elements get
// exponentiated many times per run).
class DualFixedBase {
public:
    DualFixedBase() = default;
    explicit DualFixedBase(const DualGroupElement& base) { build(base); }
    void build(const DualGroupElement& base);
    bool built() const { return built_; }
    DualGroupElement exp(const Scalar& s) const;

private:
    bn254::FixedBaseTable<bn254::Fp> t1_;
    bn254::FixedBaseTable<bn254::Fp2> t2_;
    bool built_ = false;
};

// Domain-separated hash to Z_r.
Scalar hash_to_scalar(std::string_view domain, std::span<const std::uint8_t> data);

// The reserved default attribute value (never produced by hash_to_attribute).
const Scalar& theta_attribute();

// Deterministic map from attribute labels to Z_r^* \ {theta}.
Scalar hash_to_attribute(std::string_view label);

}  // namespace pod::algebra
