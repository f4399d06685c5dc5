#include "pod/oabs/oabs.hpp"

#include <stdexcept>

#include "pod/algebra/hash.hpp"

namespace pod::oabs {

using algebra::DualFixedBase;
using algebra::hash_to_bits;
using algebra::multi_exp;
using algebra::pair;
using algebra::pair_product;

std::string_view error_text(Error e) {
    switch (e) {
        case Error::PolicyUnsatisfied: return "attribute set does not satisfy the policy";
        case Error::CapacityExceeded: return "attribute set exceeds parameter capacity";
        case Error::MalformedKey: return "key material inconsistent with parameters";
    }
    return "unknown error";
}

namespace {

constexpr std::string_view kDigestDomain = "pod.oabs.msg.v1";
constexpr std::size_t kMaxDim = 4096;

// Digest bits m_1..m_l binding message, sigma1, the attribute set and the
// default attribute.
std::vector<std::uint8_t> digest_bits(const PublicParams& pp,
                                      std::span<const std::uint8_t> message,
                                      const DualGroupElement& sigma1, const AttributeSet& w) {
    ByteWriter inner;
    inner.block(message);
    inner.raw(sigma1.to_bytes());
    inner.block(w.canonical_bytes());
    inner.raw(pp.theta.to_bytes());
    ByteWriter outer;
    outer.block(kDigestDomain);
    outer.block(inner.take());
    return hash_to_bits(outer.take(), pp.l);
}

bool row_fits(const PublicParams& pp, const KeyRow& row) {
    return row.dpp.size() + 1 == pp.n;
}

// d * prod_{x=2..n} dpp[x-2]^{c_x}, skipping zero coefficients. The
// coefficient vector is indexed so that coeffs[x-1] multiplies dimension x.
DualGroupElement blinded_row(const KeyRow& row, const std::vector<Scalar>& coeffs) {
    std::vector<DualGroupElement> bases;
    std::vector<Scalar> exps;
    for (std::size_t x = 2; x - 2 < row.dpp.size(); ++x) {
        const Scalar& c = coeffs[x - 1];
        if (c.is_zero()) continue;
        bases.push_back(row.dpp[x - 2]);
        exps.push_back(c);
    }
    return row.d * multi_exp(bases, exps);
}

// V0 * prod_{k=1..n} V[k]^{c_k}, skipping zero coefficients.
DualGroupElement attribute_aggregate(const PublicParams& pp, const std::vector<Scalar>& coeffs) {
    std::vector<DualGroupElement> bases;
    std::vector<Scalar> exps;
    for (std::size_t k = 1; k <= pp.n; ++k) {
        const Scalar& c = coeffs[k - 1];
        if (c.is_zero()) continue;
        bases.push_back(pp.V[k]);
        exps.push_back(c);
    }
    return pp.V[0] * multi_exp(bases, exps);
}

// u0 * prod_{j : m_j = 1} u[j].
DualGroupElement digest_aggregate(const PublicParams& pp, const std::vector<std::uint8_t>& bits) {
    std::vector<DualGroupElement> factors;
    factors.reserve(bits.size() + 1);
    factors.push_back(pp.u[0]);
    for (std::size_t j = 1; j <= pp.l; ++j)
        if (bits[j - 1]) factors.push_back(pp.u[j]);
    return DualGroupElement::product(factors);
}

KeyRow make_row(const PublicParams& pp, const DualFixedBase& v1_table, const Scalar& rho,
                std::string label, const Scalar& share, Drbg& rng) {
    KeyRow row;
    row.rho = rho;
    row.label = std::move(label);
    Scalar r = Scalar::random_nonzero(rng);
    row.d = DualGroupElement::from_exponent(share) * pp.V[0].exp(r);
    row.dp = DualGroupElement::from_exponent(r);
    row.dpp.reserve(pp.n - 1);
    Scalar rho_pow = rho;  // rho^{x-1} for x = 2
    for (std::size_t x = 2; x <= pp.n; ++x) {
        row.dpp.push_back(v1_table.exp(-(rho_pow * r)) * pp.V[x].exp(r));
        rho_pow *= rho;
    }
    return row;
}

}  // namespace

SetupResult setup(Drbg& rng, std::size_t n, std::size_t l) {
    if (n < 2 || l < 1 || n > kMaxDim || l > kMaxDim)
        throw std::invalid_argument("setup: dimension out of range");
    SetupResult out;
    out.msk.alpha = Scalar::random_nonzero(rng);
    out.params.n = n;
    out.params.l = l;
    out.params.theta = algebra::theta_attribute();
    out.params.g = DualGroupElement::generator();
    out.params.Z = pair(DualGroupElement::from_exponent(out.msk.alpha), out.params.g);
    out.params.V.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out.params.V.push_back(DualGroupElement::from_exponent(Scalar::random_nonzero(rng)));
    out.params.u.reserve(l + 1);
    for (std::size_t j = 0; j <= l; ++j)
        out.params.u.push_back(DualGroupElement::from_exponent(Scalar::random_nonzero(rng)));
    return out;
}

KeyPair keygen(const PublicParams& pp, const MasterKey& msk, const AccessFormula& formula,
               Drbg& rng) {
    AccessStructure structure = policy::lsss_from_formula(formula);
    // Split the master secret between the relay rows and the device row.
    Scalar alpha1 = Scalar::random(rng);
    Scalar alpha2 = msk.alpha - alpha1;

    // Share vector v = (alpha1, v2..vc); row i's share is M_i . v.
    std::vector<Scalar> v = {alpha1};
    for (std::size_t j = 1; j < structure.cols; ++j) v.push_back(Scalar::random(rng));

    DualFixedBase v1_table(pp.V[1]);

    KeyPair out;
    out.outsourcing.structure = structure;
    out.outsourcing.rows.reserve(structure.rows.size());
    for (std::size_t i = 0; i < structure.rows.size(); ++i) {
        Scalar share = Scalar::zero();
        for (std::size_t j = 0; j < structure.cols; ++j) share += structure.rows[i][j] * v[j];
        out.outsourcing.rows.push_back(make_row(pp, v1_table, structure.row_attrs[i],
                                                structure.row_labels[i], share, rng));
    }
    out.device.theta_row = make_row(pp, v1_table, pp.theta, "", alpha2, rng);
    return out;
}

Result<PartialSignature, Error> sign_out(const PublicParams& pp, const OutsourcingKey& ok,
                                         const AttributeSet& w, Drbg& rng) {
    using R = Result<PartialSignature, Error>;
    if (ok.rows.size() != ok.structure.rows.size()) return R::err(Error::MalformedKey);
    for (const auto& row : ok.rows)
        if (!row_fits(pp, row)) return R::err(Error::MalformedKey);

    auto recon = policy::reconstruction_coefficients(ok.structure, w);
    if (!recon) return R::err(Error::PolicyUnsatisfied);
    auto coeffs = policy::vanishing_coefficients(w, pp.theta, pp.n);
    if (!coeffs) return R::err(Error::CapacityExceeded);

    Scalar r = Scalar::random_nonzero(rng);

    // sigma1' = g^r * prod d'_i^{w_i}
    std::vector<DualGroupElement> dp_bases;
    std::vector<Scalar> weights;
    for (const auto& [i, wi] : *recon) {
        dp_bases.push_back(ok.rows[i].dp);
        weights.push_back(wi);
    }
    PartialSignature out;
    out.sigma1p = DualGroupElement::from_exponent(r) * multi_exp(dp_bases, weights);

    // sigma2' = prod (d_i * prod dpp^{c_x})^{w_i} * (V0 * prod V_k^{c_k})^r
    std::vector<DualGroupElement> bases;
    std::vector<Scalar> exps;
    for (const auto& [i, wi] : *recon) {
        bases.push_back(blinded_row(ok.rows[i], *coeffs));
        exps.push_back(wi);
    }
    bases.push_back(attribute_aggregate(pp, *coeffs));
    exps.push_back(r);
    out.sigma2p = multi_exp(bases, exps);
    return R::ok(std::move(out));
}

Result<Signature, Error> sign(const PublicParams& pp, const DeviceKey& dk,
                              const PartialSignature& partial, const AttributeSet& w,
                              std::span<const std::uint8_t> message, Drbg& rng) {
    using R = Result<Signature, Error>;
    if (!row_fits(pp, dk.theta_row)) return R::err(Error::MalformedKey);
    auto coeffs = policy::vanishing_coefficients(w, pp.theta, pp.n);
    if (!coeffs) return R::err(Error::CapacityExceeded);

    Signature out;
    out.sigma1 = partial.sigma1p * dk.theta_row.dp;

    auto bits = digest_bits(pp, message, out.sigma1, w);
    Scalar s = Scalar::random_nonzero(rng);
    out.sigma0 = DualGroupElement::from_exponent(s);
    out.sigma2 =
        blinded_row(dk.theta_row, *coeffs) * partial.sigma2p * digest_aggregate(pp, bits).exp(s);
    return R::ok(std::move(out));
}

Result<Signature, Error> sign_full(const PublicParams& pp, const KeyPair& keys,
                                   const AttributeSet& w, std::span<const std::uint8_t> message,
                                   Drbg& rng) {
    auto partial = sign_out(pp, keys.outsourcing, w, rng);
    if (!partial) return Result<Signature, Error>::err(partial.error());
    return sign(pp, keys.device, partial.value(), w, message, rng);
}

bool verify(const PublicParams& pp, std::span<const std::uint8_t> message, const AttributeSet& w,
            const Signature& sig) {
    auto coeffs = policy::vanishing_coefficients(w, pp.theta, pp.n);
    if (!coeffs) return false;

    auto bits = digest_bits(pp, message, sig.sigma1, w);
    DualGroupElement U = digest_aggregate(pp, bits);
    DualGroupElement Va = attribute_aggregate(pp, *coeffs);

    // e(sigma2, g) == Z * e(sigma0, U) * e(sigma1, Va), rearranged to one
    // product with a shared final exponentiation.
    std::vector<DualGroupElement> lhs = {sig.sigma2, sig.sigma0.inverse(), sig.sigma1.inverse()};
    std::vector<DualGroupElement> rhs = {pp.g, U, Va};
    return pair_product(lhs, rhs) == pp.Z;
}

// --- serialization ---

Bytes PublicParams::to_bytes() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(n));
    w.u32(static_cast<std::uint32_t>(l));
    w.raw(theta.to_bytes());
    w.raw(g.to_bytes());
    w.raw(Z.to_bytes());
    for (const auto& e : V) w.raw(e.to_bytes());
    for (const auto& e : u) w.raw(e.to_bytes());
    return w.take();
}

std::optional<PublicParams> PublicParams::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    PublicParams pp;
    pp.n = r.u32();
    pp.l = r.u32();
    if (!r.ok() || pp.n < 2 || pp.l < 1 || pp.n > kMaxDim || pp.l > kMaxDim) return std::nullopt;
    auto theta = Scalar::from_bytes(r.raw(32));
    auto g = DualGroupElement::from_bytes(r.raw(96));
    auto Z = TargetElement::from_bytes(r.raw(384));
    if (!r.ok() || !theta || !g || !Z) return std::nullopt;
    pp.theta = *theta;
    pp.g = *g;
    pp.Z = *Z;
    for (std::size_t i = 0; i <= pp.n; ++i) {
        auto e = DualGroupElement::from_bytes(r.raw(96));
        if (!r.ok() || !e) return std::nullopt;
        pp.V.push_back(*e);
    }
    for (std::size_t j = 0; j <= pp.l; ++j) {
        auto e = DualGroupElement::from_bytes(r.raw(96));
        if (!r.ok() || !e) return std::nullopt;
        pp.u.push_back(*e);
    }
    if (!r.finish()) return std::nullopt;
    return pp;
}

void KeyRow::write(ByteWriter& w) const {
    w.raw(rho.to_bytes());
    w.block(label);
    w.raw(d.to_bytes());
    w.raw(dp.to_bytes());
    w.u32(static_cast<std::uint32_t>(dpp.size()));
    for (const auto& e : dpp) w.raw(e.to_bytes());
}

std::optional<KeyRow> KeyRow::read(ByteReader& r) {
    KeyRow row;
    auto rho = Scalar::from_bytes(r.raw(32));
    if (!r.ok() || !rho) return std::nullopt;
    row.rho = *rho;
    auto label = r.block();
    if (!r.ok()) return std::nullopt;
    row.label.assign(label.begin(), label.end());
    auto d = DualGroupElement::from_bytes(r.raw(96));
    auto dp = DualGroupElement::from_bytes(r.raw(96));
    if (!r.ok() || !d || !dp) return std::nullopt;
    row.d = *d;
    row.dp = *dp;
    std::uint32_t count = r.u32();
    if (!r.ok() || count > kMaxDim) return std::nullopt;
    row.dpp.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        auto e = DualGroupElement::from_bytes(r.raw(96));
        if (!r.ok() || !e) return std::nullopt;
        row.dpp.push_back(*e);
    }
    return row;
}

Bytes OutsourcingKey::to_bytes() const {
    ByteWriter w;
    w.block(structure.to_bytes());
    w.u32(static_cast<std::uint32_t>(rows.size()));
    for (const auto& row : rows) row.write(w);
    return w.take();
}

std::optional<OutsourcingKey> OutsourcingKey::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    OutsourcingKey ok;
    auto sb = r.block();
    if (!r.ok()) return std::nullopt;
    auto structure = AccessStructure::from_bytes(sb);
    if (!structure) return std::nullopt;
    ok.structure = std::move(*structure);
    std::uint32_t count = r.u32();
    if (!r.ok() || count != ok.structure.rows.size()) return std::nullopt;
    for (std::uint32_t i = 0; i < count; ++i) {
        auto row = KeyRow::read(r);
        if (!row) return std::nullopt;
        ok.rows.push_back(std::move(*row));
    }
    if (!r.finish()) return std::nullopt;
    return ok;
}

Bytes DeviceKey::to_bytes() const {
    ByteWriter w;
    theta_row.write(w);
    return w.take();
}

std::optional<DeviceKey> DeviceKey::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto row = KeyRow::read(r);
    if (!row || !r.finish()) return std::nullopt;
    DeviceKey dk;
    dk.theta_row = std::move(*row);
    return dk;
}

Bytes PartialSignature::to_bytes() const {
    ByteWriter w;
    w.raw(sigma1p.to_bytes());
    w.raw(sigma2p.to_bytes());
    return w.take();
}

std::optional<PartialSignature> PartialSignature::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto s1 = DualGroupElement::from_bytes(r.raw(96));
    auto s2 = DualGroupElement::from_bytes(r.raw(96));
    if (!r.ok() || !s1 || !s2 || !r.finish()) return std::nullopt;
    return PartialSignature{*s1, *s2};
}

Bytes Signature::to_bytes() const {
    ByteWriter w;
    w.raw(sigma0.to_bytes());
    w.raw(sigma1.to_bytes());
    w.raw(sigma2.to_bytes());
    return w.take();
}

std::optional<Signature> Signature::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto s0 = DualGroupElement::from_bytes(r.raw(96));
    auto s1 = DualGroupElement::from_bytes(r.raw(96));
    auto s2 = DualGroupElement::from_bytes(r.raw(96));
    if (!r.ok() || !s0 || !s1 || !s2 || !r.finish()) return std::nullopt;
    return Signature{*s0, *s1, *s2};
}

}  // namespace pod::oabs
