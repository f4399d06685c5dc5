#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "pod/algebra/group.hpp"
#include "pod/bytes.hpp"
#include "pod/result.hpp"

// Payload-scale public-key encryption and the ledger signature scheme.
//
// Encryption is hybrid ElGamal: the KEM is (g^k, pk^k) hashed to a session
// key, the DEM is a hash-counter keystream XOR with a keyed integrity tag
// over the plaintext. The same discrete-log keypair used by the
// double-authentication scheme works here, which is what lets an extracted
// secret key decrypt payloads encrypted to the matching public key.
//
// Ledger signatures are Schnorr-style (challenge, response) pairs; the
// surrounding protocol only relies on the standard unforgeability contract
// of the conventional choice, not on any structural detail of it.

namespace pod::pcrypto {

using algebra::Drbg;
using algebra::GroupElement;
using algebra::Scalar;

enum class DecryptError {
    TagMismatch,  // wrong key, damaged body, or damaged tag
};

std::string_view decrypt_error_text(DecryptError e);

struct HybridCiphertext {
    GroupElement ephemeral;  // g^k
    Bytes body;              // keystream-masked payload, same length as plaintext
    std::array<std::uint8_t, 32> tag{};  // keyed digest of the plaintext

    // File format: magic "PODC" | version 0x01 | ephemeral (32) | tag (32) |
    // body length (u32, big-endian) | body.
    Bytes to_bytes() const;
    static std::optional<HybridCiphertext> from_bytes(std::span<const std::uint8_t> b);
};

HybridCiphertext encrypt(const GroupElement& pk, std::span<const std::uint8_t> plaintext,
                         Drbg& rng);

Result<Bytes, DecryptError> decrypt(const Scalar& sk, const HybridCiphertext& c);

struct LedgerKeypair {
    Scalar SK;
    GroupElement PK;  // g^SK
};

struct LedgerSignature {
    Scalar c;  // challenge
    Scalar z;  // response

    // 64 bytes: c || z.
    Bytes to_bytes() const;
    static std::optional<LedgerSignature> from_bytes(std::span<const std::uint8_t> b);
};

LedgerKeypair ledger_keygen(Drbg& rng);

LedgerSignature ledger_sign(const Scalar& SK, std::span<const std::uint8_t> message, Drbg& rng);

bool ledger_verify(const GroupElement& PK, std::span<const std::uint8_t> message,
                   const LedgerSignature& sig);

}  // namespace pod::pcrypto
