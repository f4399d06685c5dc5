#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pod/daps/daps.hpp"
#include "pod/ledger/ledger.hpp"
#include "pod/oabs/oabs.hpp"
#include "pod/pcrypto/pcrypto.hpp"
#include "pod/policy/policy.hpp"
#include "pod/result.hpp"

// The four delivery-protocol roles as single-threaded state machines. Actors
// never share mutable state; a scenario driver moves messages between them
// and owns the ledger. Error returns are short stable tokens (ledger
// rejections reuse the transaction error text).
//
// Fair-exchange shape: the update ciphertext is encrypted to the transmission
// node's delivery key. The node can read the update immediately, but the
// device holding the ciphertext cannot — until the node claims its incentive,
// which requires double-signing on the session address and therefore hands
// the gateway enough to extract the delivery secret for the device.

namespace pod::protocol {

using algebra::Drbg;
using algebra::GroupElement;
using algebra::Scalar;
using ledger::Amount;
using ledger::ContractId;
using ledger::Epoch;
using policy::AttributeSet;

// Bytes covered by the vendor's update signature (detects any modification of
// the ciphertext/update-id pair between vendor and device).
Bytes update_binding(const Bytes& ciphertext, const Bytes& update_id);

// What a querying node receives, and what travels onward to the device.
struct UpdateBundle {
    Bytes update_id;                       // D_id = H(D)
    pcrypto::HybridCiphertext ciphertext;  // C, under the node's delivery key
    pcrypto::LedgerSignature sigma;        // vendor signature over (C, D_id)
    GroupElement node_pk;                  // the delivery key pk_t of this session
};

class Vendor {
public:
    Vendor(std::string name, std::size_t n, std::size_t l, Drbg& rng);

    const std::string& name() const { return name_; }
    const oabs::PublicParams& params() const { return srv_.params; }
    const pcrypto::LedgerKeypair& ledger_keys() const { return ledger_; }
    const GroupElement& ledger_pk() const { return ledger_.PK; }

    // Register: remember a transmission node's delivery key. Idempotent.
    void register_node(const GroupElement& pk);
    bool node_registered(const GroupElement& pk) const;
    const std::vector<GroupElement>& registered_nodes() const { return nodes_; }

    // KeyGen: issue signing keys for a device policy; the policy must not
    // contain the reserved default attribute.
    Result<oabs::KeyPair, std::string> issue_device_key(const std::string& device_id,
                                                        const policy::AccessFormula& policy,
                                                        Drbg& rng);
    const policy::AccessStructure* device_structure(const std::string& device_id) const;

    struct Published {
        ContractId contract = 0;
        Bytes update_id;
    };

    // Publish: D_id = H(D); deploy the delivery contract funded with
    // paid_slots * incentive, registered nodes snapshot as the key list.
    Result<Published, std::string> publish(ledger::LedgerSim& sim, Bytes firmware, Epoch deadline,
                                           std::uint64_t paid_slots,
                                           const AttributeSet& attributes, Amount incentive,
                                           Drbg& rng);

    // Query: encrypt the update to the node's delivery key and sign (C, D_id).
    Result<UpdateBundle, std::string> query(const GroupElement& node_pk, const Bytes& update_id,
                                            Drbg& rng);

    // After the deadline: sweep the contract residue back to the vendor.
    Result<Amount, std::string> withdraw(ledger::LedgerSim& sim, ContractId contract, Drbg& rng);

    const Bytes* firmware(const Bytes& update_id) const;

private:
    std::string name_;
    oabs::SetupResult srv_;
    pcrypto::LedgerKeypair ledger_;
    std::vector<GroupElement> nodes_;  // L, in registration order
    std::map<std::string, policy::AccessStructure> devices_;
    std::map<Bytes, Bytes> updates_;  // D_id -> D
};

class TransmissionNode {
public:
    TransmissionNode(std::string name, Drbg& rng);

    const std::string& name() const { return name_; }
    const pcrypto::LedgerKeypair& ledger_keys() const { return ledger_; }
    const GroupElement& ledger_pk() const { return ledger_.PK; }
    const daps::DapsKeypair& delivery_keys() const { return delivery_; }
    const GroupElement& delivery_pk() const { return delivery_.pk; }

    // Query, node side: verify the vendor's signature, decrypt with the own
    // delivery secret, retain both plaintext and bundle.
    Result<Bytes, std::string> fetch(const UpdateBundle& bundle, const GroupElement& vendor_pk);
    const Bytes* update(const Bytes& update_id) const;
    const UpdateBundle* bundle(const Bytes& update_id) const;

    // Sign1: sign the gateway's challenge on the session address.
    daps::DapsSignature sign_challenge(const Bytes& update_id, const Bytes& challenge);

    // Sign2 tail: the finished delivery proof comes back through the gateway.
    void accept_gamma(const Bytes& update_id, const oabs::Signature& gamma);
    bool has_gamma(const Bytes& update_id) const;

    // Receive: build and submit the claim. The double-authentication
    // signature over the claim binding is the deliberate second signature on
    // the session address; with_delta2=false submits a claim whose slot for
    // it is garbage (the shortcut a cheating node would try).
    Result<ledger::TxReceipt, std::string> claim(ledger::LedgerSim& sim, ContractId contract,
                                                 const Bytes& update_id, Drbg& rng,
                                                 bool with_delta2 = true);

    // Payloads this node has signed per address (fair-exchange bookkeeping:
    // one entry is safe, a second distinct entry is the deliberate act).
    const std::vector<Bytes>* signed_payloads(const Bytes& address) const;

private:
    daps::DapsSignature sign_once(const daps::DapsAddress& addr, const Bytes& payload);

    std::string name_;
    pcrypto::LedgerKeypair ledger_;
    daps::DapsKeypair delivery_;
    std::map<Bytes, Bytes> updates_;          // D_id -> D
    std::map<Bytes, UpdateBundle> bundles_;   // D_id -> received bundle
    std::map<Bytes, oabs::Signature> gammas_; // D_id -> delivery proof
    std::map<Bytes, std::vector<Bytes>> sessions_;  // address -> payloads signed
};

class Gateway {
public:
    Gateway(std::string name, Drbg& rng);

    const std::string& name() const { return name_; }
    const pcrypto::LedgerKeypair& ledger_keys() const { return ledger_; }

    // Device-side registration (the device joins this gateway's list).
    void register_device(const std::string& device_id);
    bool device_registered(const std::string& device_id) const;

    // Notification: open a session for (node, update, device) and mint a
    // fresh random challenge; declined when the device is not served here.
    Result<Bytes, std::string> notify(const GroupElement& node_pk, const Bytes& update_id,
                                      const std::string& device_id, Drbg& rng);

    // Sign1, gateway side: verify the node's challenge signature; retain it;
    // on success the bundle may be forwarded to the device.
    Result<UpdateBundle, std::string> accept_sign1(const UpdateBundle& bundle,
                                                   const daps::DapsSignature& delta1);

    // Sign2 outsourcing: the device hands its outsourcing key over once;
    // the gateway then produces partial signatures on its behalf.
    void hold_outsourcing_key(const std::string& device_id, oabs::OutsourcingKey key);
    Result<oabs::PartialSignature, std::string> outsource_sign(const oabs::PublicParams& pp,
                                                               const std::string& device_id,
                                                               const AttributeSet& attributes,
                                                               Drbg& rng);

    struct Extraction {
        std::string device_id;
        GroupElement node_pk;
        Bytes update_id;
        Scalar sk;  // the delivery secret, pushed to the device only
    };

    // Receive, gateway side: scan newly accepted claims; where this gateway
    // holds the first signature of the pair, extract the delivery secret.
    std::vector<Extraction> watch(const ledger::LedgerSim& sim);

    const std::vector<Bytes>& trace_addresses() const { return session_order_; }

private:
    struct Session {
        std::string device_id;
        GroupElement node_pk;
        Bytes update_id;
        Bytes challenge;
        std::optional<daps::DapsSignature> delta1;
        bool extracted = false;
    };

    std::string name_;
    pcrypto::LedgerKeypair ledger_;
    std::set<std::string> devices_;  // L'
    std::map<Bytes, Session> sessions_;  // session address -> state
    std::vector<Bytes> session_order_;
    std::map<std::string, oabs::OutsourcingKey> held_keys_;
};

class Device {
public:
    Device(std::string id, GroupElement vendor_pk);

    const std::string& id() const { return id_; }
    // Burn the signing keys at manufacture time (exactly once).
    void provision(oabs::KeyPair keys);
    bool provisioned() const { return keys_.has_value(); }
    const oabs::OutsourcingKey& outsourcing_key() const;

    // Sign2, device side, first half: authenticate the offer. Nothing is
    // retained when the vendor signature fails.
    Result<bool, std::string> accept_offer(const UpdateBundle& bundle);
    bool has_pending_offer() const { return pending_.has_value(); }

    // Sign2, device side, second half: finish the delivery proof over the
    // session's delivery key.
    Result<oabs::Signature, std::string> complete_signature(const oabs::PublicParams& pp,
                                                            const oabs::PartialSignature& partial,
                                                            const AttributeSet& attributes,
                                                            Drbg& rng);

    // Receive tail: decrypt the pending ciphertext with the extracted
    // delivery secret; the authenticity tag and the update digest both gate
    // installation.
    Result<Bytes, std::string> install(const Scalar& sk);

    bool updated() const { return !firmware_digest_.empty(); }
    const Bytes& firmware_digest() const { return firmware_digest_; }
    const Bytes& firmware() const { return firmware_; }

private:
    std::string id_;
    GroupElement vendor_pk_;
    std::optional<oabs::KeyPair> keys_;
    std::optional<UpdateBundle> pending_;
    Bytes firmware_digest_;
    Bytes firmware_;
};

}  // namespace pod::protocol
