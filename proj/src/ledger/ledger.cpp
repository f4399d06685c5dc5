#include "pod/ledger/ledger.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace pod::ledger {

namespace {

constexpr std::string_view kTxDomain = "pod.ledger.tx.v1";
constexpr std::string_view kClaimDomain = "pod.claim.v1";
constexpr std::size_t kMaxPayload = 1 << 22;  // 4 MiB: proofs and key lists are far smaller

using nlohmann::json;

}  // namespace

std::string_view tx_kind_text(TxKind k) {
    switch (k) {
        case TxKind::Publish: return "publish";
        case TxKind::Claim: return "claim";
        case TxKind::Withdraw: return "withdraw";
        case TxKind::Transfer: return "transfer";
    }
    return "unknown";
}

std::string_view tx_error_text(TxError e) {
    switch (e) {
        case TxError::SignatureRejected: return "signature-rejected";
        case TxError::NonceMismatch: return "nonce-mismatch";
        case TxError::Malformed: return "malformed";
        case TxError::UnknownContract: return "unknown-contract";
        case TxError::Underfunded: return "underfunded";
        case TxError::InsufficientFunds: return "insufficient-funds";
        case TxError::Expired: return "expired";
        case TxError::ProofRejected: return "proof-rejected";
        case TxError::Unregistered: return "unregistered";
        case TxError::ReplayRejected: return "replay-rejected";
        case TxError::Exhausted: return "exhausted";
        case TxError::Premature: return "premature";
        case TxError::Unauthorized: return "unauthorized";
    }
    return "unknown";
}

Bytes Transaction::signing_bytes() const {
    ByteWriter w;
    w.reserve(4 + kTxDomain.size() + 1 + 32 + 8 + 4 + payload.size());
    w.block(kTxDomain);
    w.u8(static_cast<std::uint8_t>(kind));
    w.raw(sender.to_bytes());
    w.u64(nonce);
    w.block(payload);
    return w.take();
}

Transaction make_transaction(TxKind kind, const pcrypto::LedgerKeypair& kp, std::uint64_t nonce,
                             Bytes payload, algebra::Drbg& rng) {
    Transaction tx;
    tx.kind = kind;
    tx.sender = kp.PK;
    tx.nonce = nonce;
    tx.payload = std::move(payload);
    tx.sig = pcrypto::ledger_sign(kp.SK, tx.signing_bytes(), rng);
    return tx;
}

Bytes encode_publish(const PublishArgs& args) {
    ByteWriter w;
    w.u64(args.limitation_time);
    w.block(args.update_id);
    w.u64(args.device_count);
    w.block(args.attribute_set.canonical_bytes());
    w.u32(static_cast<std::uint32_t>(args.public_key_list.size()));
    for (const auto& pk : args.public_key_list) w.raw(pk.to_bytes());
    w.u64(static_cast<std::uint64_t>(args.incentive));
    w.u64(static_cast<std::uint64_t>(args.funds));
    return w.take();
}

Bytes encode_claim(const ClaimArgs& args) {
    ByteWriter w;
    w.u64(args.contract);
    w.block(args.oabs_sig);
    w.block(args.daps_sig);
    w.raw(args.pk.to_bytes());
    return w.take();
}

Bytes encode_withdraw(ContractId contract) {
    ByteWriter w;
    w.u64(contract);
    return w.take();
}

Bytes encode_transfer(const GroupElement& to, Amount amount) {
    ByteWriter w;
    w.raw(to.to_bytes());
    w.u64(static_cast<std::uint64_t>(amount));
    return w.take();
}

Bytes claim_binding(ContractId contract, const GroupElement& pk, const GroupElement& sender) {
    ByteWriter w;
    w.reserve(4 + kClaimDomain.size() + 8 + 64);
    w.block(kClaimDomain);
    w.u64(contract);
    w.raw(pk.to_bytes());
    w.raw(sender.to_bytes());
    return w.take();
}

LedgerSim::LedgerSim(oabs::PublicParams params) : params_(std::move(params)) {}

void LedgerSim::mint(const GroupElement& account, Amount amount) {
    if (!genesis_open_) throw std::logic_error("mint: only available at genesis");
    if (amount < 0) throw std::invalid_argument("mint: negative amount");
    AccountKey key = account_key(account);
    balances_[key] += amount;
    minted_ += amount;
    json j;
    j["epoch"] = height_;
    j["kind"] = "mint";
    j["account"] = to_hex(key);
    j["amount"] = amount;
    log_.push_back(j.dump());
}

void LedgerSim::advance_epoch() {
    genesis_open_ = false;
    height_ += 1;
    json j;
    j["epoch"] = height_;
    j["kind"] = "advance";
    log_.push_back(j.dump());
}

Amount LedgerSim::balance(const GroupElement& account) const {
    auto it = balances_.find(account_key(account));
    return it == balances_.end() ? 0 : it->second;
}

std::uint64_t LedgerSim::account_nonce(const GroupElement& account) const {
    auto it = nonces_.find(account_key(account));
    return it == nonces_.end() ? 0 : it->second;
}

const ContractState* LedgerSim::contract(ContractId id) const {
    auto it = contracts_.find(id);
    return it == contracts_.end() ? nullptr : &it->second;
}

Amount LedgerSim::total_in_circulation() const {
    Amount total = 0;
    for (const auto& [key, bal] : balances_) total += bal;
    for (const auto& [id, c] : contracts_) total += c.balance;
    return total;
}

void LedgerSim::credit(const AccountKey& account, Amount amount) {
    balances_[account] += amount;
}

Result<TxReceipt, TxError> LedgerSim::submit(const Transaction& tx) {
    genesis_open_ = false;

    Result<TxReceipt, TxError> result = [&]() -> Result<TxReceipt, TxError> {
        if (tx.payload.size() > kMaxPayload) return TxError::Malformed;
        if (!pcrypto::ledger_verify(tx.sender, tx.signing_bytes(), tx.sig))
            return TxError::SignatureRejected;
        if (tx.nonce != account_nonce(tx.sender)) return TxError::NonceMismatch;
        switch (tx.kind) {
            case TxKind::Publish: return apply_publish(tx);
            case TxKind::Claim: return apply_claim(tx);
            case TxKind::Withdraw: return apply_withdraw(tx);
            case TxKind::Transfer: return apply_transfer(tx);
        }
        return TxError::Malformed;
    }();

    if (result.has_value()) nonces_[account_key(tx.sender)] += 1;

    json j;
    j["epoch"] = height_;
    j["kind"] = tx_kind_text(tx.kind);
    j["sender"] = to_hex(account_key(tx.sender));
    if (result.has_value()) {
        j["result"] = "ok";
        j["amount"] = result.value().paid;
        if (result.value().contract != 0) j["contract"] = result.value().contract;
    } else {
        j["result"] = std::string(tx_error_text(result.error()));
        j["amount"] = 0;
    }
    log_.push_back(j.dump());

    assert(total_in_circulation() == minted_);
    return result;
}

Result<TxReceipt, TxError> LedgerSim::apply_publish(const Transaction& tx) {
    ByteReader r(tx.payload);
    PublishArgs args;
    args.limitation_time = r.u64();
    args.update_id = r.block();
    args.device_count = r.u64();
    auto attrs = AttributeSet::from_canonical_bytes(r.block());
    std::uint32_t keys = r.u32();
    if (!r.ok() || keys > (1u << 16)) return TxError::Malformed;
    std::vector<AccountKey> key_list;
    key_list.reserve(keys);
    for (std::uint32_t i = 0; i < keys; ++i) {
        auto raw = r.raw_array<32>();
        if (!algebra::GroupElement::from_bytes(raw)) return TxError::Malformed;
        key_list.push_back(raw);
    }
    args.incentive = static_cast<Amount>(r.u64());
    args.funds = static_cast<Amount>(r.u64());
    if (!r.finish() || !attrs) return TxError::Malformed;
    if (args.device_count == 0 || key_list.empty()) return TxError::Malformed;
    if (args.incentive <= 0 || args.funds < 0) return TxError::Malformed;
    std::set<AccountKey> unique(key_list.begin(), key_list.end());
    if (unique.size() != key_list.size()) return TxError::Malformed;

    Amount required = static_cast<Amount>(args.device_count) * args.incentive;
    if (args.funds < required) return TxError::Underfunded;
    AccountKey vendor = account_key(tx.sender);
    if (balance(tx.sender) < args.funds) return TxError::InsufficientFunds;

    balances_[vendor] -= args.funds;
    ContractId id = next_contract_++;
    ContractState& c = contracts_[id];
    c.owner = vendor;
    c.limitation_time = args.limitation_time;
    c.update_id = args.update_id;
    c.public_key_list = std::move(key_list);
    c.attribute_set = *attrs;
    c.counter = static_cast<Amount>(args.device_count) - 1;
    c.incentive = args.incentive;
    c.balance = args.funds;
    return TxReceipt{TxKind::Publish, id, args.funds};
}

Result<TxReceipt, TxError> LedgerSim::apply_claim(const Transaction& tx) {
    ByteReader r(tx.payload);
    ContractId id = r.u64();
    Bytes oabs_bytes = r.block();
    Bytes daps_bytes = r.block();
    auto pk_raw = r.raw_array<32>();
    if (!r.finish()) return TxError::Malformed;
    auto pk = algebra::GroupElement::from_bytes(pk_raw);
    if (!pk) return TxError::Malformed;

    auto it = contracts_.find(id);
    if (it == contracts_.end()) return TxError::UnknownContract;
    ContractState& c = it->second;

    if (height_ > c.limitation_time) return TxError::Expired;
    if (std::find(c.public_key_list.begin(), c.public_key_list.end(), pk_raw) ==
        c.public_key_list.end())
        return TxError::Unregistered;
    if (std::find(c.claimed.begin(), c.claimed.end(), pk_raw) != c.claimed.end())
        return TxError::ReplayRejected;
    if (c.counter < 0) return TxError::Exhausted;

    auto gamma = oabs::Signature::from_bytes(oabs_bytes);
    if (!gamma || !oabs::verify(params_, pk_raw, c.attribute_set, *gamma))
        return TxError::ProofRejected;

    auto delta = daps::DapsSignature::from_bytes(daps_bytes);
    auto addr = daps::DapsAddress::session(*pk, c.update_id);
    Bytes bound = claim_binding(id, *pk, tx.sender);
    if (!delta || !daps::daps_verify(*pk, addr, bound, *delta)) return TxError::ProofRejected;

    Amount pay = c.balance - c.incentive * c.counter;
    assert(pay >= 0 && pay <= c.balance);
    c.balance -= pay;
    c.counter -= 1;
    c.claimed.push_back(pk_raw);
    credit(account_key(tx.sender), pay);
    claims_.push_back(ClaimEvent{height_, id, *pk, tx.sender, std::move(oabs_bytes), *delta, pay});
    return TxReceipt{TxKind::Claim, id, pay};
}

Result<TxReceipt, TxError> LedgerSim::apply_withdraw(const Transaction& tx) {
    ByteReader r(tx.payload);
    ContractId id = r.u64();
    if (!r.finish()) return TxError::Malformed;
    auto it = contracts_.find(id);
    if (it == contracts_.end()) return TxError::UnknownContract;
    ContractState& c = it->second;
    if (account_key(tx.sender) != c.owner) return TxError::Unauthorized;
    if (height_ <= c.limitation_time) return TxError::Premature;
    Amount refund = c.balance;
    c.balance = 0;
    credit(c.owner, refund);
    return TxReceipt{TxKind::Withdraw, id, refund};
}

Result<TxReceipt, TxError> LedgerSim::apply_transfer(const Transaction& tx) {
    ByteReader r(tx.payload);
    auto to_raw = r.raw_array<32>();
    Amount amount = static_cast<Amount>(r.u64());
    if (!r.finish() || amount < 0) return TxError::Malformed;
    if (!algebra::GroupElement::from_bytes(to_raw)) return TxError::Malformed;
    AccountKey from = account_key(tx.sender);
    if (balances_[from] < amount) return TxError::InsufficientFunds;
    balances_[from] -= amount;
    credit(to_raw, amount);
    return TxReceipt{TxKind::Transfer, 0, amount};
}

}  // namespace pod::ledger
