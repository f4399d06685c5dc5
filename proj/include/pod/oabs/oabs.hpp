#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pod/algebra/group.hpp"
#include "pod/bytes.hpp"
#include "pod/policy/policy.hpp"
#include "pod/result.hpp"

// Attribute-based signatures with outsourced signing. The issuer splits the
// master secret in two: the outsourcing share is embedded, via linear secret
// sharing over a policy matrix, into a key that a semi-trusted relay can use
// to produce partial signatures for any attribute set satisfying the policy;
// the device share lives in a single default-attribute row, so finalizing a
// signature costs the constrained device only a handful of exponentiations.
// Verification is three pairings against the public commitment Z.

namespace pod::oabs {

using algebra::Drbg;
using algebra::DualGroupElement;
using algebra::Scalar;
using algebra::TargetElement;
using policy::AccessFormula;
using policy::AccessStructure;
using policy::AttributeSet;

enum class Error {
    PolicyUnsatisfied,   // attribute set does not satisfy the key's policy
    CapacityExceeded,    // |W| + 2 exceeds the parameter dimension n
    MalformedKey,        // key material inconsistent with the parameters
};

std::string_view error_text(Error e);

// Public parameters. V[0..n] blind the attribute rows, u[0..l] absorb the
// message digest bits, Z = e(g,g)^alpha is the verification target.
struct PublicParams {
    std::size_t n = 0;  // attribute dimension: signatures need |W| + 2 <= n
    std::size_t l = 0;  // digest length in bits
    Scalar theta;       // reserved default attribute
    DualGroupElement g;
    TargetElement Z;
    std::vector<DualGroupElement> V;  // n + 1 elements
    std::vector<DualGroupElement> u;  // l + 1 elements

    Bytes to_bytes() const;
    static std::optional<PublicParams> from_bytes(std::span<const std::uint8_t> b);
};

struct MasterKey {
    Scalar alpha;
};

// One key row: d = g^share * V0^r, dp = g^r, and per-dimension blinding
// dpp[x-2] = (V1^{-rho^{x-1}} * Vx)^r for x = 2..n.
struct KeyRow {
    Scalar rho;
    std::string label;
    DualGroupElement d;
    DualGroupElement dp;
    std::vector<DualGroupElement> dpp;  // n - 1 elements

    void write(ByteWriter& w) const;
    static std::optional<KeyRow> read(ByteReader& r);
};

// Relay key: the policy matrix plus one row per matrix row, sharing the
// outsourcing half of the master secret.
struct OutsourcingKey {
    AccessStructure structure;
    std::vector<KeyRow> rows;  // parallel to structure.rows

    Bytes to_bytes() const;
    static std::optional<OutsourcingKey> from_bytes(std::span<const std::uint8_t> b);
};

// Device key: a single row for the default attribute carrying the device
// half of the master secret.
struct DeviceKey {
    KeyRow theta_row;

    Bytes to_bytes() const;
    static std::optional<DeviceKey> from_bytes(std::span<const std::uint8_t> b);
};

struct KeyPair {
    OutsourcingKey outsourcing;
    DeviceKey device;
};

// Relay output: sigma1p = g^{r + sum w_i r_i}, sigma2p the matching
// aggregate carrying the outsourcing share.
struct PartialSignature {
    DualGroupElement sigma1p;
    DualGroupElement sigma2p;

    Bytes to_bytes() const;
    static std::optional<PartialSignature> from_bytes(std::span<const std::uint8_t> b);
};

struct Signature {
    DualGroupElement sigma0;
    DualGroupElement sigma1;
    DualGroupElement sigma2;

    Bytes to_bytes() const;
    static std::optional<Signature> from_bytes(std::span<const std::uint8_t> b);
};

struct SetupResult {
    PublicParams params;
    MasterKey msk;
};

// Fresh parameters and master key. Requires n >= 2 (dimension must fit the
// default attribute) and l >= 1.
SetupResult setup(Drbg& rng, std::size_t n, std::size_t l);

// Split the master secret and issue the relay/device key pair for a policy.
KeyPair keygen(const PublicParams& pp, const MasterKey& msk, const AccessFormula& formula,
               Drbg& rng);

// Relay half of signing: combine policy rows for the attribute set W.
Result<PartialSignature, Error> sign_out(const PublicParams& pp, const OutsourcingKey& ok,
                                         const AttributeSet& w, Drbg& rng);

// Device half: bind the message and finish the signature.
Result<Signature, Error> sign(const PublicParams& pp, const DeviceKey& dk,
                              const PartialSignature& partial, const AttributeSet& w,
                              std::span<const std::uint8_t> message, Drbg& rng);

// Full signing convenience (relay + device in sequence).
Result<Signature, Error> sign_full(const PublicParams& pp, const KeyPair& keys,
                                   const AttributeSet& w, std::span<const std::uint8_t> message,
                                   Drbg& rng);

bool verify(const PublicParams& pp, std::span<const std::uint8_t> message, const AttributeSet& w,
            const Signature& sig);

}  // namespace pod::oabs
