#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pod/bytes.hpp"
#include "pod/daps/daps.hpp"
#include "pod/oabs/oabs.hpp"
#include "pod/pcrypto/pcrypto.hpp"
#include "pod/policy/policy.hpp"
#include "pod/result.hpp"

// Deterministic single-chain ledger simulation: accounts with balances and
// nonces, an epoch clock, signed transactions applied in submission order,
// and the proof-of-delivery contract state machine. Currency is conserved
// after genesis minting; every accepted or rejected transaction leaves one
// canonical log line, so equal seeds give byte-identical logs.

namespace pod::ledger {

using algebra::GroupElement;
using algebra::Scalar;
using policy::AttributeSet;

using Epoch = std::uint64_t;
using Amount = std::int64_t;
using ContractId = std::uint64_t;
using AccountKey = std::array<std::uint8_t, 32>;  // compressed public key

enum class TxKind : std::uint8_t { Publish = 1, Claim = 2, Withdraw = 3, Transfer = 4 };

std::string_view tx_kind_text(TxKind k);

inline AccountKey account_key(const GroupElement& g) { return g.to_bytes(); }

enum class TxError {
    SignatureRejected,  // ledger signature does not verify
    NonceMismatch,      // stale or future account nonce
    Malformed,          // payload fails to decode
    UnknownContract,
    Underfunded,         // deploy: funds < device_count * incentive
    InsufficientFunds,   // sender balance too small
    Expired,             // claim after the limitation time
    ProofRejected,       // delivery or double-authentication proof invalid
    Unregistered,        // pk not in the contract's public key list
    ReplayRejected,      // pk already paid
    Exhausted,           // claim counter used up
    Premature,           // withdraw at or before the limitation time
    Unauthorized,        // withdraw by non-owner
};

std::string_view tx_error_text(TxError e);

struct ContractState {
    AccountKey owner{};             // vendor ledger key
    Epoch limitation_time = 0;      // claims while height <= t, withdraw after
    Bytes update_id;                // D_id digest
    std::vector<AccountKey> public_key_list;  // registered delivery keys
    AttributeSet attribute_set;
    Amount counter = 0;             // devices still claimable minus one
    Amount incentive = 0;           // x
    Amount balance = 0;
    std::vector<AccountKey> claimed;
};

struct Transaction {
    TxKind kind = TxKind::Transfer;
    GroupElement sender;
    std::uint64_t nonce = 0;
    Bytes payload;
    pcrypto::LedgerSignature sig;

    // Canonical bytes covered by the ledger signature.
    Bytes signing_bytes() const;
};

// Sign a transaction payload under the sender's ledger key.
Transaction make_transaction(TxKind kind, const pcrypto::LedgerKeypair& kp, std::uint64_t nonce,
                             Bytes payload, algebra::Drbg& rng);

// --- payload encodings ---

struct PublishArgs {
    Epoch limitation_time = 0;
    Bytes update_id;
    std::uint64_t device_count = 0;             // n
    AttributeSet attribute_set;                 // W
    std::vector<GroupElement> public_key_list;  // L
    Amount incentive = 0;                       // x
    Amount funds = 0;
};

Bytes encode_publish(const PublishArgs& args);

struct ClaimArgs {
    ContractId contract = 0;
    Bytes oabs_sig;             // serialized delivery proof
    Bytes daps_sig;             // serialized double-authentication signature
    GroupElement pk;            // the delivery key pk_t being claimed for
};

Bytes encode_claim(const ClaimArgs& args);

Bytes encode_withdraw(ContractId contract);

Bytes encode_transfer(const GroupElement& to, Amount amount);

// The exact payload the claim's double-authentication signature must cover;
// recomputed by the contract, by the claimant, and by any extractor.
Bytes claim_binding(ContractId contract, const GroupElement& pk, const GroupElement& sender);

struct TxReceipt {
    TxKind kind = TxKind::Transfer;
    ContractId contract = 0;  // deployed or touched contract, 0 for transfer
    Amount paid = 0;          // amount moved to the beneficiary
};

// Accepted claim, observable by anyone watching the chain.
struct ClaimEvent {
    Epoch epoch = 0;
    ContractId contract = 0;
    GroupElement pk;          // delivery key
    GroupElement sender;      // paid ledger account
    Bytes oabs_sig;
    daps::DapsSignature daps_sig;
    Amount paid = 0;
};

class LedgerSim {
public:
    // The signature-scheme parameters every contract verifies against.
    explicit LedgerSim(oabs::PublicParams params);

    // Genesis minting; only before the first transaction or epoch advance.
    void mint(const GroupElement& account, Amount amount);

    Epoch height() const { return height_; }
    void advance_epoch();

    Amount balance(const GroupElement& account) const;
    std::uint64_t account_nonce(const GroupElement& account) const;
    const ContractState* contract(ContractId id) const;
    const oabs::PublicParams& params() const { return params_; }

    Result<TxReceipt, TxError> submit(const Transaction& tx);

    // Conservation: sum of account balances plus contract balances.
    Amount total_in_circulation() const;
    Amount minted_total() const { return minted_; }

    // Canonical line-delimited event log (one line per mint/advance/tx).
    const std::vector<std::string>& log() const { return log_; }
    const std::vector<ClaimEvent>& claims() const { return claims_; }

private:
    Result<TxReceipt, TxError> apply_publish(const Transaction& tx);
    Result<TxReceipt, TxError> apply_claim(const Transaction& tx);
    Result<TxReceipt, TxError> apply_withdraw(const Transaction& tx);
    Result<TxReceipt, TxError> apply_transfer(const Transaction& tx);
    void credit(const AccountKey& account, Amount amount);

    oabs::PublicParams params_;
    Epoch height_ = 0;
    bool genesis_open_ = true;
    Amount minted_ = 0;
    std::map<AccountKey, Amount> balances_;
    std::map<AccountKey, std::uint64_t> nonces_;
    std::map<ContractId, ContractState> contracts_;
    ContractId next_contract_ = 1;
    std::vector<std::string> log_;
    std::vector<ClaimEvent> claims_;
};

}  // namespace pod::ledger
