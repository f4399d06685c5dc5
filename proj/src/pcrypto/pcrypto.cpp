#include "pod/pcrypto/pcrypto.hpp"

#include <algorithm>

#include "pod/algebra/hash.hpp"

namespace pod::pcrypto {

using algebra::hash_expand;
using algebra::hash_to_scalar;
using algebra::sha256;

namespace {

constexpr std::string_view kKemDomain = "pod.hybrid.kem.v1";
constexpr std::string_view kStreamDomain = "pod.hybrid.stream.v1";
constexpr std::string_view kTagDomain = "pod.hybrid.tag.v1";
constexpr std::string_view kSigDomain = "pod.ledger.sig.v1";

constexpr std::array<std::uint8_t, 4> kMagic = {'P', 'O', 'D', 'C'};
constexpr std::uint8_t kVersion = 1;

// Session key from the KEM pair (ephemeral, shared).
std::array<std::uint8_t, 32> session_key(const GroupElement& ephemeral,
                                         const GroupElement& shared) {
    ByteWriter w;
    w.block(kKemDomain);
    w.raw(ephemeral.to_bytes());
    w.raw(shared.to_bytes());
    return sha256(w.take());
}

Bytes keystream(const std::array<std::uint8_t, 32>& key, std::size_t len) {
    ByteWriter w;
    w.block(kStreamDomain);
    w.raw(key);
    return hash_expand(w.take(), len);
}

std::array<std::uint8_t, 32> plaintext_tag(const std::array<std::uint8_t, 32>& key,
                                           std::span<const std::uint8_t> plaintext) {
    ByteWriter w;
    w.block(kTagDomain);
    w.raw(key);
    w.block(plaintext);
    return sha256(w.take());
}

Scalar signature_challenge(const GroupElement& R, const GroupElement& PK,
                           std::span<const std::uint8_t> message) {
    ByteWriter w;
    w.block(R.to_bytes());
    w.block(PK.to_bytes());
    w.block(message);
    return hash_to_scalar(kSigDomain, w.take());
}

}  // namespace

std::string_view decrypt_error_text(DecryptError e) {
    switch (e) {
        case DecryptError::TagMismatch: return "integrity tag mismatch";
    }
    return "unknown error";
}

HybridCiphertext encrypt(const GroupElement& pk, std::span<const std::uint8_t> plaintext,
                         Drbg& rng) {
    Scalar k = Scalar::random_nonzero(rng);
    HybridCiphertext c;
    c.ephemeral = GroupElement::from_exponent(k);
    auto key = session_key(c.ephemeral, pk.exp(k));
    Bytes stream = keystream(key, plaintext.size());
    c.body.resize(plaintext.size());
    for (std::size_t i = 0; i < plaintext.size(); ++i) c.body[i] = plaintext[i] ^ stream[i];
    c.tag = plaintext_tag(key, plaintext);
    return c;
}

Result<Bytes, DecryptError> decrypt(const Scalar& sk, const HybridCiphertext& c) {
    auto key = session_key(c.ephemeral, c.ephemeral.exp(sk));
    Bytes stream = keystream(key, c.body.size());
    Bytes plaintext(c.body.size());
    for (std::size_t i = 0; i < c.body.size(); ++i) plaintext[i] = c.body[i] ^ stream[i];
    if (plaintext_tag(key, plaintext) != c.tag)
        return Result<Bytes, DecryptError>::err(DecryptError::TagMismatch);
    return Result<Bytes, DecryptError>::ok(std::move(plaintext));
}

Bytes HybridCiphertext::to_bytes() const {
    ByteWriter w;
    w.raw(kMagic);
    w.u8(kVersion);
    w.raw(ephemeral.to_bytes());
    w.raw(tag);
    w.u32(static_cast<std::uint32_t>(body.size()));
    w.raw(body);
    return w.take();
}

std::optional<HybridCiphertext> HybridCiphertext::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto magic = r.raw(4);
    if (!r.ok() || !std::equal(kMagic.begin(), kMagic.end(), magic.begin())) return std::nullopt;
    if (r.u8() != kVersion) return std::nullopt;
    HybridCiphertext c;
    auto eph = GroupElement::from_bytes(r.raw(32));
    if (!r.ok() || !eph) return std::nullopt;
    c.ephemeral = *eph;
    auto tag = r.raw(32);
    if (!r.ok()) return std::nullopt;
    std::copy(tag.begin(), tag.end(), c.tag.begin());
    std::uint32_t len = r.u32();
    auto body = r.raw(len);
    if (!r.ok() || !r.finish()) return std::nullopt;
    c.body.assign(body.begin(), body.end());
    return c;
}

LedgerKeypair ledger_keygen(Drbg& rng) {
    LedgerKeypair kp;
    kp.SK = Scalar::random_nonzero(rng);
    kp.PK = GroupElement::from_exponent(kp.SK);
    return kp;
}

LedgerSignature ledger_sign(const Scalar& SK, std::span<const std::uint8_t> message, Drbg& rng) {
    Scalar k = Scalar::random_nonzero(rng);
    GroupElement R = GroupElement::from_exponent(k);
    LedgerSignature sig;
    sig.c = signature_challenge(R, GroupElement::from_exponent(SK), message);
    sig.z = k + SK * sig.c;
    return sig;
}

bool ledger_verify(const GroupElement& PK, std::span<const std::uint8_t> message,
                   const LedgerSignature& sig) {
    // R' = g^z * PK^{-c}; accept iff the challenge recomputes.
    GroupElement R = GroupElement::from_exponent(sig.z) * PK.exp(sig.c).inverse();
    return signature_challenge(R, PK, message) == sig.c;
}

Bytes LedgerSignature::to_bytes() const {
    ByteWriter w;
    w.raw(c.to_bytes());
    w.raw(z.to_bytes());
    return w.take();
}

std::optional<LedgerSignature> LedgerSignature::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    auto c_ = Scalar::from_bytes(r.raw(32));
    auto z_ = Scalar::from_bytes(r.raw(32));
    if (!r.ok() || !c_ || !z_ || !r.finish()) return std::nullopt;
    return LedgerSignature{*c_, *z_};
}

}  // namespace pod::pcrypto
