#include "pod/protocol/actors.hpp"

#include <algorithm>
#include <stdexcept>

#include "pod/algebra/hash.hpp"

namespace pod::protocol {

namespace {

constexpr std::string_view kUpdateDomain = "pod.update.v1";

bool formula_mentions_theta(const policy::AccessFormula& f) {
    if (f.kind == policy::AccessFormula::Kind::Attribute)
        return f.attribute == algebra::theta_attribute();
    for (const auto& child : f.children)
        if (formula_mentions_theta(child)) return true;
    return false;
}

std::string ledger_error(ledger::TxError e) { return std::string(ledger::tx_error_text(e)); }

}  // namespace

Bytes update_binding(const Bytes& ciphertext, const Bytes& update_id) {
    ByteWriter w;
    w.reserve(12 + kUpdateDomain.size() + ciphertext.size() + update_id.size());
    w.block(kUpdateDomain);
    w.block(ciphertext);
    w.block(update_id);
    return w.take();
}

// --- Vendor ---

Vendor::Vendor(std::string name, std::size_t n, std::size_t l, Drbg& rng)
    : name_(std::move(name)), srv_(oabs::setup(rng, n, l)), ledger_(pcrypto::ledger_keygen(rng)) {}

void Vendor::register_node(const GroupElement& pk) {
    if (!node_registered(pk)) nodes_.push_back(pk);
}

bool Vendor::node_registered(const GroupElement& pk) const {
    auto key = pk.to_bytes();
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [&](const GroupElement& g) { return g.to_bytes() == key; });
}

Result<oabs::KeyPair, std::string> Vendor::issue_device_key(const std::string& device_id,
                                                            const policy::AccessFormula& policy,
                                                            Drbg& rng) {
    if (formula_mentions_theta(policy)) return std::string("reserved-attribute-in-policy");
    oabs::KeyPair keys = oabs::keygen(srv_.params, srv_.msk, policy, rng);
    devices_.insert_or_assign(device_id, keys.outsourcing.structure);
    return keys;
}

const policy::AccessStructure* Vendor::device_structure(const std::string& device_id) const {
    auto it = devices_.find(device_id);
    return it == devices_.end() ? nullptr : &it->second;
}

Result<Vendor::Published, std::string> Vendor::publish(ledger::LedgerSim& sim, Bytes firmware,
                                                       Epoch deadline, std::uint64_t paid_slots,
                                                       const AttributeSet& attributes,
                                                       Amount incentive, Drbg& rng) {
    if (nodes_.empty()) return std::string("no-registered-nodes");
    auto digest = algebra::sha256(firmware);
    Bytes update_id(digest.begin(), digest.end());

    ledger::PublishArgs args;
    args.limitation_time = deadline;
    args.update_id = update_id;
    args.device_count = paid_slots;
    args.attribute_set = attributes;
    args.public_key_list = nodes_;
    args.incentive = incentive;
    args.funds = static_cast<Amount>(paid_slots) * incentive;
    auto tx = ledger::make_transaction(ledger::TxKind::Publish, ledger_,
                                       sim.account_nonce(ledger_.PK),
                                       ledger::encode_publish(args), rng);
    auto receipt = sim.submit(tx);
    if (!receipt.has_value()) return ledger_error(receipt.error());

    updates_[update_id] = std::move(firmware);
    return Published{receipt.value().contract, update_id};
}

Result<UpdateBundle, std::string> Vendor::query(const GroupElement& node_pk,
                                                const Bytes& update_id, Drbg& rng) {
    auto it = updates_.find(update_id);
    if (it == updates_.end()) return std::string("unknown-update");
    UpdateBundle b;
    b.update_id = update_id;
    b.ciphertext = pcrypto::encrypt(node_pk, it->second, rng);
    b.sigma = pcrypto::ledger_sign(ledger_.SK, update_binding(b.ciphertext.to_bytes(), update_id),
                                   rng);
    b.node_pk = node_pk;
    return b;
}

Result<Amount, std::string> Vendor::withdraw(ledger::LedgerSim& sim, ContractId contract,
                                             Drbg& rng) {
    auto tx = ledger::make_transaction(ledger::TxKind::Withdraw, ledger_,
                                       sim.account_nonce(ledger_.PK),
                                       ledger::encode_withdraw(contract), rng);
    auto receipt = sim.submit(tx);
    if (!receipt.has_value()) return ledger_error(receipt.error());
    return receipt.value().paid;
}

const Bytes* Vendor::firmware(const Bytes& update_id) const {
    auto it = updates_.find(update_id);
    return it == updates_.end() ? nullptr : &it->second;
}

// --- TransmissionNode ---

TransmissionNode::TransmissionNode(std::string name, Drbg& rng)
    : name_(std::move(name)), ledger_(pcrypto::ledger_keygen(rng)), delivery_(daps::daps_kgen(rng)) {}

Result<Bytes, std::string> TransmissionNode::fetch(const UpdateBundle& bundle,
                                                   const GroupElement& vendor_pk) {
    Bytes bound = update_binding(bundle.ciphertext.to_bytes(), bundle.update_id);
    if (!pcrypto::ledger_verify(vendor_pk, bound, bundle.sigma))
        return std::string("update-signature-rejected");
    auto plain = pcrypto::decrypt(delivery_.sk, bundle.ciphertext);
    if (!plain.has_value()) return std::string("decrypt-failed");
    updates_[bundle.update_id] = plain.value();
    bundles_[bundle.update_id] = bundle;
    return plain.value();
}

const Bytes* TransmissionNode::update(const Bytes& update_id) const {
    auto it = updates_.find(update_id);
    return it == updates_.end() ? nullptr : &it->second;
}

const UpdateBundle* TransmissionNode::bundle(const Bytes& update_id) const {
    auto it = bundles_.find(update_id);
    return it == bundles_.end() ? nullptr : &it->second;
}

daps::DapsSignature TransmissionNode::sign_once(const daps::DapsAddress& addr,
                                                const Bytes& payload) {
    auto& signed_list = sessions_[addr.bytes()];
    if (std::find(signed_list.begin(), signed_list.end(), payload) == signed_list.end())
        signed_list.push_back(payload);
    return daps::daps_sign(delivery_.sk, addr, payload);
}

daps::DapsSignature TransmissionNode::sign_challenge(const Bytes& update_id,
                                                     const Bytes& challenge) {
    auto addr = daps::DapsAddress::session(delivery_.pk, update_id);
    return sign_once(addr, challenge);
}

void TransmissionNode::accept_gamma(const Bytes& update_id, const oabs::Signature& gamma) {
    gammas_.insert_or_assign(update_id, gamma);
}

bool TransmissionNode::has_gamma(const Bytes& update_id) const {
    return gammas_.find(update_id) != gammas_.end();
}

Result<ledger::TxReceipt, std::string> TransmissionNode::claim(ledger::LedgerSim& sim,
                                                               ContractId contract,
                                                               const Bytes& update_id, Drbg& rng,
                                                               bool with_delta2) {
    auto it = gammas_.find(update_id);
    if (it == gammas_.end()) return std::string("missing-delivery-proof");

    Bytes delta2_bytes;
    if (with_delta2) {
        auto addr = daps::DapsAddress::session(delivery_.pk, update_id);
        Bytes bound = ledger::claim_binding(contract, delivery_.pk, ledger_.PK);
        delta2_bytes = sign_once(addr, bound).to_bytes();
    } else {
        delta2_bytes = rng.bytes(64);  // a claim skipping the second signature
    }

    ledger::ClaimArgs args{contract, it->second.to_bytes(), delta2_bytes, delivery_.pk};
    auto tx = ledger::make_transaction(ledger::TxKind::Claim, ledger_,
                                       sim.account_nonce(ledger_.PK), ledger::encode_claim(args),
                                       rng);
    auto receipt = sim.submit(tx);
    if (!receipt.has_value()) return ledger_error(receipt.error());
    return receipt.value();
}

const std::vector<Bytes>* TransmissionNode::signed_payloads(const Bytes& address) const {
    auto it = sessions_.find(address);
    return it == sessions_.end() ? nullptr : &it->second;
}

// --- Gateway ---

Gateway::Gateway(std::string name, Drbg& rng)
    : name_(std::move(name)), ledger_(pcrypto::ledger_keygen(rng)) {}

void Gateway::register_device(const std::string& device_id) { devices_.insert(device_id); }

bool Gateway::device_registered(const std::string& device_id) const {
    return devices_.count(device_id) != 0;
}

Result<Bytes, std::string> Gateway::notify(const GroupElement& node_pk, const Bytes& update_id,
                                           const std::string& device_id, Drbg& rng) {
    if (!device_registered(device_id)) return std::string("session-declined");
    Bytes addr = daps::DapsAddress::session(node_pk, update_id).bytes();
    Session s;
    s.device_id = device_id;
    s.node_pk = node_pk;
    s.update_id = update_id;
    s.challenge = rng.bytes(32);
    if (sessions_.find(addr) == sessions_.end()) session_order_.push_back(addr);
    sessions_.insert_or_assign(addr, std::move(s));
    return sessions_[addr].challenge;
}

Result<UpdateBundle, std::string> Gateway::accept_sign1(const UpdateBundle& bundle,
                                                        const daps::DapsSignature& delta1) {
    Bytes addr = daps::DapsAddress::session(bundle.node_pk, bundle.update_id).bytes();
    auto it = sessions_.find(addr);
    if (it == sessions_.end()) return std::string("session-unknown");
    Session& s = it->second;
    auto session_addr = daps::DapsAddress(addr);
    if (!daps::daps_verify(bundle.node_pk, session_addr, s.challenge, delta1))
        return std::string("challenge-signature-rejected");
    s.delta1 = delta1;
    return bundle;
}

void Gateway::hold_outsourcing_key(const std::string& device_id, oabs::OutsourcingKey key) {
    held_keys_.insert_or_assign(device_id, std::move(key));
}

Result<oabs::PartialSignature, std::string> Gateway::outsource_sign(const oabs::PublicParams& pp,
                                                                    const std::string& device_id,
                                                                    const AttributeSet& attributes,
                                                                    Drbg& rng) {
    auto it = held_keys_.find(device_id);
    if (it == held_keys_.end()) return std::string("no-outsourcing-key");
    auto partial = oabs::sign_out(pp, it->second, attributes, rng);
    if (!partial.has_value()) return std::string(oabs::error_text(partial.error()));
    return partial.value();
}

std::vector<Gateway::Extraction> Gateway::watch(const ledger::LedgerSim& sim) {
    std::vector<Extraction> out;
    for (const auto& ev : sim.claims()) {
        const ledger::ContractState* c = sim.contract(ev.contract);
        if (c == nullptr) continue;
        Bytes addr_bytes = daps::DapsAddress::session(ev.pk, c->update_id).bytes();
        auto it = sessions_.find(addr_bytes);
        if (it == sessions_.end()) continue;
        Session& s = it->second;
        if (s.extracted || !s.delta1.has_value()) continue;
        s.extracted = true;
        Bytes bound = ledger::claim_binding(ev.contract, ev.pk, ev.sender);
        auto addr = daps::DapsAddress(addr_bytes);
        auto sk = daps::daps_extract(ev.pk, addr, s.challenge, *s.delta1, bound, ev.daps_sig);
        if (!sk.has_value()) continue;
        out.push_back(Extraction{s.device_id, ev.pk, c->update_id, sk.value()});
    }
    return out;
}

// --- Device ---

Device::Device(std::string id, GroupElement vendor_pk)
    : id_(std::move(id)), vendor_pk_(vendor_pk) {}

void Device::provision(oabs::KeyPair keys) {
    if (keys_.has_value()) throw std::logic_error("device keys are burned at manufacture");
    keys_ = std::move(keys);
}

const oabs::OutsourcingKey& Device::outsourcing_key() const {
    if (!keys_.has_value()) throw std::logic_error("device not provisioned");
    return keys_->outsourcing;
}

Result<bool, std::string> Device::accept_offer(const UpdateBundle& bundle) {
    Bytes bound = update_binding(bundle.ciphertext.to_bytes(), bundle.update_id);
    if (!pcrypto::ledger_verify(vendor_pk_, bound, bundle.sigma))
        return std::string("update-signature-rejected");
    pending_ = bundle;
    return true;
}

Result<oabs::Signature, std::string> Device::complete_signature(
    const oabs::PublicParams& pp, const oabs::PartialSignature& partial,
    const AttributeSet& attributes, Drbg& rng) {
    if (!keys_.has_value()) return std::string("device-not-provisioned");
    if (!pending_.has_value()) return std::string("no-verified-offer");
    auto message = pending_->node_pk.to_bytes();
    auto sig = oabs::sign(pp, keys_->device, partial, attributes, message, rng);
    if (!sig.has_value()) return std::string(oabs::error_text(sig.error()));
    return sig.value();
}

Result<Bytes, std::string> Device::install(const Scalar& sk) {
    if (!pending_.has_value()) return std::string("no-verified-offer");
    auto plain = pcrypto::decrypt(sk, pending_->ciphertext);
    if (!plain.has_value()) return std::string("decrypt-failed");
    auto digest = algebra::sha256(plain.value());
    if (!std::equal(digest.begin(), digest.end(), pending_->update_id.begin(),
                    pending_->update_id.end()))
        return std::string("digest-mismatch");
    firmware_ = plain.value();
    firmware_digest_ = pending_->update_id;
    pending_.reset();
    return firmware_;
}

}  // namespace pod::protocol
