#include "pod/daps/daps.hpp"

#include <stdexcept>

namespace pod::daps {

using algebra::hash_to_scalar;

namespace {

constexpr std::string_view kNonceDomain = "pod.daps.nonce.v1";
constexpr std::string_view kChallengeDomain = "pod.daps.chal.v1";

Scalar nonce_for(const Scalar& sk, const DapsAddress& addr) {
    ByteWriter w;
    w.block(sk.to_bytes());
    w.block(addr.bytes());
    return hash_to_scalar(kNonceDomain, w.take());
}

Scalar challenge(const GroupElement& R, const DapsAddress& addr,
                 std::span<const std::uint8_t> payload) {
    ByteWriter w;
    w.block(R.to_bytes());
    w.block(addr.bytes());
    w.block(payload);
    return hash_to_scalar(kChallengeDomain, w.take());
}

}  // namespace

DapsAddress::DapsAddress(Bytes bytes) : bytes_(std::move(bytes)) {
    if (bytes_.empty()) throw std::invalid_argument("address must be non-empty");
}

DapsAddress DapsAddress::session(const GroupElement& pk, std::span<const std::uint8_t> update_id) {
    ByteWriter w;
    w.raw(pk.to_bytes());
    w.block(update_id);
    return DapsAddress(w.take());
}

std::string_view extract_error_text(ExtractError e) {
    switch (e) {
        case ExtractError::NoConflict: return "payloads are identical, no conflict to extract from";
        case ExtractError::AddressMismatch: return "commitments differ, not one signing session";
        case ExtractError::ExtractionFailure: return "signatures invalid or challenges collide";
    }
    return "unknown error";
}

DapsKeypair daps_kgen(Drbg& rng) {
    DapsKeypair kp;
    kp.sk = Scalar::random_nonzero(rng);
    kp.pk = GroupElement::from_exponent(kp.sk);
    return kp;
}

DapsSignature daps_sign(const Scalar& sk, const DapsAddress& addr,
                        std::span<const std::uint8_t> payload) {
    Scalar k = nonce_for(sk, addr);
    DapsSignature sig;
    sig.R = GroupElement::from_exponent(k);
    sig.z = k + sk * challenge(sig.R, addr, payload);
    return sig;
}

bool daps_verify(const GroupElement& pk, const DapsAddress& addr,
                 std::span<const std::uint8_t> payload, const DapsSignature& sig) {
    Scalar c = challenge(sig.R, addr, payload);
    return GroupElement::from_exponent(sig.z) == sig.R * pk.exp(c);
}

Result<Scalar, ExtractError> daps_extract(const GroupElement& pk, const DapsAddress& addr,
                                          std::span<const std::uint8_t> payload1,
                                          const DapsSignature& sig1,
                                          std::span<const std::uint8_t> payload2,
                                          const DapsSignature& sig2) {
    using R = Result<Scalar, ExtractError>;
    if (payload1.size() == payload2.size() &&
        std::equal(payload1.begin(), payload1.end(), payload2.begin()))
        return R::err(ExtractError::NoConflict);
    if (sig1.R != sig2.R) return R::err(ExtractError::AddressMismatch);
    if (!daps_verify(pk, addr, payload1, sig1) || !daps_verify(pk, addr, payload2, sig2))
        return R::err(ExtractError::ExtractionFailure);
    Scalar c1 = challenge(sig1.R, addr, payload1);
    Scalar c2 = challenge(sig2.R, addr, payload2);
    Scalar dc = c1 - c2;
    if (dc.is_zero()) return R::err(ExtractError::ExtractionFailure);
    Scalar sk = (sig1.z - sig2.z) * dc.inverse();
    if (GroupElement::from_exponent(sk) != pk) return R::err(ExtractError::ExtractionFailure);
    return R::ok(std::move(sk));
}

Bytes DapsSignature::to_bytes() const {
    ByteWriter w;
    w.raw(R.to_bytes());
    w.raw(z.to_bytes());
    return w.take();
}

std::optional<DapsSignature> DapsSignature::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto R_ = GroupElement::from_bytes(r.raw(32));
    auto z_ = Scalar::from_bytes(r.raw(32));
    if (!r.ok() || !R_ || !z_ || !r.finish()) return std::nullopt;
    return DapsSignature{*R_, *z_};
}

}  // namespace pod::daps
