#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "pod/algebra/group.hpp"
#include "pod/bytes.hpp"
#include "pod/result.hpp"

// Double-authentication-preventing signatures in the discrete-log setting:
// the signing nonce is a PRF of (sk, address), so the commitment R is fixed
// per address. Two signatures on distinct payloads under one address share R
// and differ only in the challenge, which makes the secret key a linear
// function of the two responses. One signature per address is an ordinary
// Schnorr-style signature and reveals nothing.

namespace pod::daps {

using algebra::Drbg;
using algebra::GroupElement;
using algebra::Scalar;

struct DapsKeypair {
    Scalar sk;
    GroupElement pk;  // g^sk
};

// The authentication subject: any non-empty byte string. The delivery
// protocol uses pk serialization || update id, one address per session.
class DapsAddress {
public:
    explicit DapsAddress(Bytes bytes);
    static DapsAddress session(const GroupElement& pk, std::span<const std::uint8_t> update_id);

    const Bytes& bytes() const { return bytes_; }
    bool operator==(const DapsAddress& o) const { return bytes_ == o.bytes_; }

private:
    Bytes bytes_;
};

struct DapsSignature {
    GroupElement R;
    Scalar z;

    // 64 bytes: compressed R || z.
    Bytes to_bytes() const;
    static std::optional<DapsSignature> from_bytes(std::span<const std::uint8_t> b);
};

enum class ExtractError {
    NoConflict,         // the two payloads are identical
    AddressMismatch,    // commitments differ: not the same signing session
    ExtractionFailure,  // signatures invalid or challenges collide
};

std::string_view extract_error_text(ExtractError e);

DapsKeypair daps_kgen(Drbg& rng);

DapsSignature daps_sign(const Scalar& sk, const DapsAddress& addr,
                        std::span<const std::uint8_t> payload);

bool daps_verify(const GroupElement& pk, const DapsAddress& addr,
                 std::span<const std::uint8_t> payload, const DapsSignature& sig);

// Recover sk from two verifying signatures on distinct payloads under one
// address: sk = (z1 - z2) / (c1 - c2).
Result<Scalar, ExtractError> daps_extract(const GroupElement& pk, const DapsAddress& addr,
                                          std::span<const std::uint8_t> payload1,
                                          const DapsSignature& sig1,
                                          std::span<const std::uint8_t> payload2,
                                          const DapsSignature& sig2);

}  // namespace pod::daps
