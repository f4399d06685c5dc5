#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pod/ledger/ledger.hpp"

using namespace pod;
using namespace pod::ledger;

namespace {

// Shared signature-scheme environment (parameters, one issued key, one
// attribute set); built once because parameter setup dominates runtime.
struct Env {
    oabs::SetupResult srv;
    oabs::KeyPair keys;
    policy::AttributeSet W;

    Env() {
        algebra::Drbg rng(0x6c656467);
        srv = oabs::setup(rng, 8, 32);
        auto formula = policy::parse_formula("fw");
        REQUIRE(formula.has_value());
        keys = oabs::keygen(srv.params, srv.msk, formula.value(), rng);
        std::vector<std::string> labels{"fw"};
        W = policy::AttributeSet::from_labels(labels);
    }
};

const Env& env() {
    static Env e;
    return e;
}

struct Party {
    pcrypto::LedgerKeypair ledger;
    daps::DapsKeypair daps;
};

Party make_party(algebra::Drbg& rng) {
    return Party{pcrypto::ledger_keygen(rng), daps::daps_kgen(rng)};
}

ContractId deploy(LedgerSim& sim, const pcrypto::LedgerKeypair& vendor, Epoch t,
                  std::uint64_t n, Amount x, Amount funds,
                  const std::vector<algebra::GroupElement>& pks, algebra::Drbg& rng) {
    PublishArgs args;
    args.limitation_time = t;
    args.update_id = Bytes{0xd1, 0xd1, 0xd1, 0xd1};
    args.device_count = n;
    args.attribute_set = env().W;
    args.public_key_list = pks;
    args.incentive = x;
    args.funds = funds;
    auto tx = make_transaction(TxKind::Publish, vendor, sim.account_nonce(vendor.PK),
                               encode_publish(args), rng);
    auto receipt = sim.submit(tx);
    REQUIRE(receipt.has_value());
    return receipt.value().contract;
}

// A full claim transaction: delivery proof over the claimed key, plus the
// double-authentication signature over the canonical claim binding.
Transaction claim_tx(const LedgerSim& sim, ContractId id, const pcrypto::LedgerKeypair& node,
                     const daps::DapsKeypair& dkp, algebra::Drbg& rng) {
    const ContractState* c = sim.contract(id);
    REQUIRE(c != nullptr);
    auto pk_bytes = dkp.pk.to_bytes();
    auto gamma = oabs::sign_full(env().srv.params, env().keys, env().W, pk_bytes, rng);
    REQUIRE(gamma.has_value());
    auto addr = daps::DapsAddress::session(dkp.pk, c->update_id);
    Bytes bound = claim_binding(id, dkp.pk, node.PK);
    auto delta = daps::daps_sign(dkp.sk, addr, bound);
    ClaimArgs args{id, gamma.value().to_bytes(), delta.to_bytes(), dkp.pk};
    return make_transaction(TxKind::Claim, node, sim.account_nonce(node.PK), encode_claim(args),
                            rng);
}

Transaction withdraw_tx(const LedgerSim& sim, const pcrypto::LedgerKeypair& caller, ContractId id,
                        algebra::Drbg& rng) {
    return make_transaction(TxKind::Withdraw, caller, sim.account_nonce(caller.PK),
                            encode_withdraw(id), rng);
}

}  // namespace

TEST_CASE("deployment initializes the contract and debits the vendor") {
    algebra::Drbg rng(1001);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    std::vector<Party> nodes{make_party(rng), make_party(rng), make_party(rng)};
    sim.mint(vendor.ledger.PK, 100);
    CHECK(sim.total_in_circulation() == 100);

    std::vector<algebra::GroupElement> pks;
    for (auto& p : nodes) pks.push_back(p.daps.pk);
    ContractId id = deploy(sim, vendor.ledger, 5, 3, 10, 30, pks, rng);
    CHECK(id == 1);

    const ContractState* c = sim.contract(id);
    REQUIRE(c != nullptr);
    CHECK(c->counter == 2);
    CHECK(c->balance == 30);
    CHECK(c->incentive == 10);
    CHECK(c->limitation_time == 5);
    CHECK(c->owner == account_key(vendor.ledger.PK));
    CHECK(c->public_key_list.size() == 3);
    CHECK(c->claimed.empty());
    CHECK(sim.balance(vendor.ledger.PK) == 70);
    CHECK(sim.total_in_circulation() == 100);
    CHECK(sim.account_nonce(vendor.ledger.PK) == 1);
}

TEST_CASE("underfunded or malformed deployments are rejected without effect") {
    algebra::Drbg rng(1002);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    sim.mint(vendor.ledger.PK, 100);

    auto attempt = [&](std::uint64_t n, Amount x, Amount funds,
                       std::vector<algebra::GroupElement> pks) {
        PublishArgs args;
        args.limitation_time = 5;
        args.update_id = Bytes{1};
        args.device_count = n;
        args.attribute_set = env().W;
        args.public_key_list = std::move(pks);
        args.incentive = x;
        args.funds = funds;
        auto tx = make_transaction(TxKind::Publish, vendor.ledger,
                                   sim.account_nonce(vendor.ledger.PK), encode_publish(args), rng);
        return sim.submit(tx);
    };

    auto r1 = attempt(3, 10, 29, {node.daps.pk});
    REQUIRE(!r1.has_value());
    CHECK(r1.error() == TxError::Underfunded);

    auto r2 = attempt(4, 30, 120, {node.daps.pk});  // funded on paper, balance too small
    REQUIRE(!r2.has_value());
    CHECK(r2.error() == TxError::InsufficientFunds);

    auto r3 = attempt(0, 10, 0, {node.daps.pk});
    REQUIRE(!r3.has_value());
    CHECK(r3.error() == TxError::Malformed);

    auto r4 = attempt(1, 0, 0, {node.daps.pk});
    REQUIRE(!r4.has_value());
    CHECK(r4.error() == TxError::Malformed);

    auto r5 = attempt(2, 10, 20, {node.daps.pk, node.daps.pk});  // duplicate key
    REQUIRE(!r5.has_value());
    CHECK(r5.error() == TxError::Malformed);

    auto r6 = attempt(1, 10, 10, {});
    REQUIRE(!r6.has_value());
    CHECK(r6.error() == TxError::Malformed);

    // Truncated payload.
    auto tx = make_transaction(TxKind::Publish, vendor.ledger,
                               sim.account_nonce(vendor.ledger.PK), Bytes{1, 2, 3}, rng);
    auto r7 = sim.submit(tx);
    REQUIRE(!r7.has_value());
    CHECK(r7.error() == TxError::Malformed);

    CHECK(sim.balance(vendor.ledger.PK) == 100);
    CHECK(sim.account_nonce(vendor.ledger.PK) == 0);
    CHECK(sim.contract(1) == nullptr);
    CHECK(sim.total_in_circulation() == 100);
}

TEST_CASE("contract arithmetic matches the hand-executed oracle over device counts and incentives") {
    // Independent integer model of the contract's payment rule.
    struct Oracle {
        Amount balance;
        Amount counter;
        Amount x;
        Amount step() {
            Amount pay = balance - x * counter;
            balance -= pay;
            counter -= 1;
            return pay;
        }
    };

    for (std::uint64_t n : {1ull, 3ull, 10ull}) {
        for (Amount x : {Amount(1), Amount(10)}) {
            CAPTURE(n);
            CAPTURE(x);
            algebra::Drbg rng(2000 + 10 * n + static_cast<std::uint64_t>(x));
            LedgerSim sim(env().srv.params);
            Party vendor = make_party(rng);
            Party node = make_party(rng);
            Amount funds = static_cast<Amount>(n) * x;
            sim.mint(vendor.ledger.PK, funds);

            std::vector<daps::DapsKeypair> delivery_keys;
            std::vector<algebra::GroupElement> pks;
            for (std::uint64_t i = 0; i < n; ++i) {
                delivery_keys.push_back(daps::daps_kgen(rng));
                pks.push_back(delivery_keys.back().pk);
            }
            ContractId id = deploy(sim, vendor.ledger, 100, n, x, funds, pks, rng);

            Oracle oracle{funds, static_cast<Amount>(n) - 1, x};
            CHECK(sim.contract(id)->counter == oracle.counter);
            CHECK(sim.contract(id)->balance == oracle.balance);

            Amount paid_total = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                auto r = sim.submit(claim_tx(sim, id, node.ledger, delivery_keys[i], rng));
                REQUIRE(r.has_value());
                Amount expect = oracle.step();
                CHECK(r.value().paid == expect);
                CHECK(expect == x);  // fully funded contracts pay exactly x per claim
                CHECK(sim.contract(id)->counter == oracle.counter);
                CHECK(sim.contract(id)->balance == oracle.balance);
                paid_total += r.value().paid;
                CHECK(sim.total_in_circulation() == sim.minted_total());
            }
            CHECK(sim.contract(id)->counter == -1);
            CHECK(sim.contract(id)->balance == 0);
            CHECK(paid_total == funds);
            CHECK(sim.balance(node.ledger.PK) == funds);
        }
    }
}

TEST_CASE("surplus funding drains through the first claim") {
    algebra::Drbg rng(1003);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    auto k1 = daps::daps_kgen(rng);
    auto k2 = daps::daps_kgen(rng);
    sim.mint(vendor.ledger.PK, 14);
    ContractId id = deploy(sim, vendor.ledger, 9, 2, 5, 14, {k1.pk, k2.pk}, rng);

    auto r1 = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
    REQUIRE(r1.has_value());
    CHECK(r1.value().paid == 9);  // 14 - 5*1
    auto r2 = sim.submit(claim_tx(sim, id, node.ledger, k2, rng));
    REQUIRE(r2.has_value());
    CHECK(r2.value().paid == 5);
    CHECK(sim.contract(id)->balance == 0);
    CHECK(sim.contract(id)->counter == -1);
    CHECK(sim.balance(node.ledger.PK) == 14);
}

TEST_CASE("claims fail with typed errors and leave state unchanged") {
    algebra::Drbg rng(1004);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    Party other = make_party(rng);
    auto kA = daps::daps_kgen(rng);
    auto kB = daps::daps_kgen(rng);
    auto kC = daps::daps_kgen(rng);  // never registered
    sim.mint(vendor.ledger.PK, 40);
    sim.mint(node.ledger.PK, 5);
    ContractId id = deploy(sim, vendor.ledger, 3, 2, 10, 20, {kA.pk, kB.pk}, rng);

    auto expect_error = [&](const Transaction& tx, TxError want) {
        Amount before = sim.total_in_circulation();
        Amount node_before = sim.balance(node.ledger.PK);
        Amount contract_before = sim.contract(id)->balance;
        Amount counter_before = sim.contract(id)->counter;
        auto r = sim.submit(tx);
        REQUIRE(!r.has_value());
        CHECK(r.error() == want);
        CHECK(sim.total_in_circulation() == before);
        CHECK(sim.balance(node.ledger.PK) == node_before);
        CHECK(sim.contract(id)->balance == contract_before);
        CHECK(sim.contract(id)->counter == counter_before);
    };

    SUBCASE("unknown contract") {
        ClaimArgs args{77, {}, {}, kA.pk};
        auto bogus = make_transaction(TxKind::Claim, node.ledger,
                                      sim.account_nonce(node.ledger.PK), encode_claim(args), rng);
        auto r = sim.submit(bogus);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::UnknownContract);
    }

    SUBCASE("unregistered key") {
        expect_error(claim_tx(sim, id, node.ledger, kC, rng), TxError::Unregistered);
    }

    SUBCASE("delivery proof bound to a different key is rejected") {
        // Proof signed over kB's identity, claimed for kA.
        auto pk_other = kB.pk.to_bytes();
        auto gamma = oabs::sign_full(env().srv.params, env().keys, env().W, pk_other, rng);
        REQUIRE(gamma.has_value());
        auto addr = daps::DapsAddress::session(kA.pk, sim.contract(id)->update_id);
        Bytes bound = claim_binding(id, kA.pk, node.ledger.PK);
        auto delta = daps::daps_sign(kA.sk, addr, bound);
        ClaimArgs args{id, gamma.value().to_bytes(), delta.to_bytes(), kA.pk};
        auto tx = make_transaction(TxKind::Claim, node.ledger, sim.account_nonce(node.ledger.PK),
                                   encode_claim(args), rng);
        expect_error(tx, TxError::ProofRejected);
    }

    SUBCASE("corrupted delivery proof is rejected") {
        auto tx = claim_tx(sim, id, node.ledger, kA, rng);
        // Rebuild with a flipped byte inside the delivery proof block.
        Bytes payload = tx.payload;
        payload[20] ^= 0x01;
        auto bad = make_transaction(TxKind::Claim, node.ledger, sim.account_nonce(node.ledger.PK),
                                    payload, rng);
        expect_error(bad, TxError::ProofRejected);
    }

    SUBCASE("double-authentication signature over the wrong binding is rejected") {
        auto pk_bytes = kA.pk.to_bytes();
        auto gamma = oabs::sign_full(env().srv.params, env().keys, env().W, pk_bytes, rng);
        REQUIRE(gamma.has_value());
        auto addr = daps::DapsAddress::session(kA.pk, sim.contract(id)->update_id);
        Bytes wrong = claim_binding(id + 1, kA.pk, node.ledger.PK);
        auto delta = daps::daps_sign(kA.sk, addr, wrong);
        ClaimArgs args{id, gamma.value().to_bytes(), delta.to_bytes(), kA.pk};
        auto tx = make_transaction(TxKind::Claim, node.ledger, sim.account_nonce(node.ledger.PK),
                                   encode_claim(args), rng);
        expect_error(tx, TxError::ProofRejected);
    }

    SUBCASE("a claim built for one sender cannot be submitted by another") {
        // The binding covers the paid account, so a bystander cannot lift the
        // proofs out of a claim and redirect the payment to themselves.
        auto honest = claim_tx(sim, id, node.ledger, kA, rng);
        auto hijack = make_transaction(TxKind::Claim, other.ledger,
                                       sim.account_nonce(other.ledger.PK), honest.payload, rng);
        auto r = sim.submit(hijack);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::ProofRejected);
    }

    SUBCASE("replay of an already-paid key") {
        auto r1 = sim.submit(claim_tx(sim, id, node.ledger, kA, rng));
        REQUIRE(r1.has_value());
        expect_error(claim_tx(sim, id, node.ledger, kA, rng), TxError::ReplayRejected);
    }

    SUBCASE("exhausted paid slots") {
        // One paid slot, two registered keys: the second distinct claim runs
        // into counter < 0.
        ContractId small = deploy(sim, vendor.ledger, 3, 1, 10, 10, {kA.pk, kB.pk}, rng);
        auto r1 = sim.submit(claim_tx(sim, small, node.ledger, kA, rng));
        REQUIRE(r1.has_value());
        CHECK(r1.value().paid == 10);
        CHECK(sim.contract(small)->counter == -1);
        auto r2 = sim.submit(claim_tx(sim, small, node.ledger, kB, rng));
        REQUIRE(!r2.has_value());
        CHECK(r2.error() == TxError::Exhausted);
    }

    SUBCASE("expired claims, including precedence over other defects") {
        auto good = claim_tx(sim, id, node.ledger, kA, rng);
        for (int i = 0; i < 4; ++i) sim.advance_epoch();  // height 4 > t=3
        auto r = sim.submit(good);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::Expired);
        // Unregistered key after the deadline still reports expired first.
        auto unreg = claim_tx(sim, id, node.ledger, kC, rng);
        auto r2 = sim.submit(unreg);
        REQUIRE(!r2.has_value());
        CHECK(r2.error() == TxError::Expired);
    }
}

TEST_CASE("withdrawal is owner-only and strictly after the deadline") {
    algebra::Drbg rng(1005);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    Party outsider = make_party(rng);
    auto k1 = daps::daps_kgen(rng);
    auto k2 = daps::daps_kgen(rng);
    sim.mint(vendor.ledger.PK, 20);
    ContractId id = deploy(sim, vendor.ledger, 2, 2, 10, 20, {k1.pk, k2.pk}, rng);

    auto r1 = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
    REQUIRE(r1.has_value());
    CHECK(sim.contract(id)->balance == 10);

    auto early = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
    REQUIRE(!early.has_value());
    CHECK(early.error() == TxError::Premature);

    sim.advance_epoch();
    sim.advance_epoch();  // height 2 == t: still premature (strict inequality)
    auto boundary = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
    REQUIRE(!boundary.has_value());
    CHECK(boundary.error() == TxError::Premature);

    // While claims are admissible no withdrawal succeeds, and vice versa.
    auto r2 = sim.submit(claim_tx(sim, id, node.ledger, k2, rng));
    REQUIRE(r2.has_value());
    CHECK(sim.contract(id)->balance == 0);

    sim.advance_epoch();  // height 3 > t
    auto late_claim = claim_tx(sim, id, node.ledger, k2, rng);
    auto rc = sim.submit(late_claim);
    REQUIRE(!rc.has_value());
    CHECK(rc.error() == TxError::Expired);

    auto foreign = sim.submit(withdraw_tx(sim, outsider.ledger, id, rng));
    REQUIRE(!foreign.has_value());
    CHECK(foreign.error() == TxError::Unauthorized);

    auto unknown = sim.submit(withdraw_tx(sim, vendor.ledger, 42, rng));
    REQUIRE(!unknown.has_value());
    CHECK(unknown.error() == TxError::UnknownContract);

    Amount vendor_before = sim.balance(vendor.ledger.PK);
    auto w = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
    REQUIRE(w.has_value());
    CHECK(w.value().paid == 0);  // both slots were claimed; nothing residual
    CHECK(sim.balance(vendor.ledger.PK) == vendor_before);
}

TEST_CASE("withdrawal refunds the residual balance and repeats as a no-op") {
    algebra::Drbg rng(1006);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    auto k1 = daps::daps_kgen(rng);
    auto k2 = daps::daps_kgen(rng);
    sim.mint(vendor.ledger.PK, 30);
    ContractId id = deploy(sim, vendor.ledger, 0, 3, 10, 30, {k1.pk, k2.pk}, rng);

    auto r1 = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
    REQUIRE(r1.has_value());
    CHECK(r1.value().paid == 10);

    sim.advance_epoch();  // height 1 > t=0
    auto w1 = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
    REQUIRE(w1.has_value());
    CHECK(w1.value().paid == 20);
    CHECK(sim.balance(vendor.ledger.PK) == 20);
    CHECK(sim.contract(id)->balance == 0);

    auto w2 = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
    REQUIRE(w2.has_value());
    CHECK(w2.value().paid == 0);
    CHECK(sim.balance(vendor.ledger.PK) == 20);
    CHECK(sim.total_in_circulation() == 30);
}

TEST_CASE("submission order decides between competing claims") {
    for (int order : {0, 1}) {
        CAPTURE(order);
        algebra::Drbg rng(1007);  // same seed both ways
        LedgerSim sim(env().srv.params);
        Party vendor = make_party(rng);
        Party nodeA = make_party(rng);
        Party nodeB = make_party(rng);
        sim.mint(vendor.ledger.PK, 10);
        ContractId id =
            deploy(sim, vendor.ledger, 5, 1, 10, 10, {nodeA.daps.pk, nodeB.daps.pk}, rng);
        auto txA = claim_tx(sim, id, nodeA.ledger, nodeA.daps, rng);
        auto txB = claim_tx(sim, id, nodeB.ledger, nodeB.daps, rng);
        auto first = order == 0 ? txA : txB;
        auto second = order == 0 ? txB : txA;
        auto r1 = sim.submit(first);
        REQUIRE(r1.has_value());
        CHECK(r1.value().paid == 10);
        auto r2 = sim.submit(second);
        REQUIRE(!r2.has_value());
        CHECK(r2.error() == TxError::Exhausted);
        CHECK(sim.balance(order == 0 ? nodeA.ledger.PK : nodeB.ledger.PK) == 10);
        CHECK(sim.balance(order == 0 ? nodeB.ledger.PK : nodeA.ledger.PK) == 0);
    }
}

TEST_CASE("transaction authentication rejects bad signatures, nonces, and replays") {
    algebra::Drbg rng(1008);
    LedgerSim sim(env().srv.params);
    Party alice = make_party(rng);
    Party bob = make_party(rng);
    sim.mint(alice.ledger.PK, 50);

    auto tx = make_transaction(TxKind::Transfer, alice.ledger, 0,
                               encode_transfer(bob.ledger.PK, 7), rng);

    SUBCASE("flipped signature byte") {
        Transaction bad = tx;
        bad.sig.z = bad.sig.z + algebra::Scalar::one();
        auto r = sim.submit(bad);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::SignatureRejected);
        CHECK(sim.balance(alice.ledger.PK) == 50);
        CHECK(sim.balance(bob.ledger.PK) == 0);
        CHECK(sim.account_nonce(alice.ledger.PK) == 0);
    }

    SUBCASE("tampered payload under the old signature") {
        Transaction bad = tx;
        bad.payload = encode_transfer(bob.ledger.PK, 49);
        auto r = sim.submit(bad);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::SignatureRejected);
    }

    SUBCASE("wrong nonce") {
        auto ahead = make_transaction(TxKind::Transfer, alice.ledger, 3,
                                      encode_transfer(bob.ledger.PK, 7), rng);
        auto r = sim.submit(ahead);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::NonceMismatch);
    }

    SUBCASE("accepted transfer moves funds once; replay is rejected") {
        auto r1 = sim.submit(tx);
        REQUIRE(r1.has_value());
        CHECK(sim.balance(alice.ledger.PK) == 43);
        CHECK(sim.balance(bob.ledger.PK) == 7);
        auto r2 = sim.submit(tx);  // identical signed transaction
        REQUIRE(!r2.has_value());
        CHECK(r2.error() == TxError::NonceMismatch);
        CHECK(sim.balance(bob.ledger.PK) == 7);
    }

    SUBCASE("overdraft and negative amounts") {
        auto big = make_transaction(TxKind::Transfer, alice.ledger, 0,
                                    encode_transfer(bob.ledger.PK, 51), rng);
        auto r = sim.submit(big);
        REQUIRE(!r.has_value());
        CHECK(r.error() == TxError::InsufficientFunds);

        auto neg = make_transaction(TxKind::Transfer, alice.ledger, 0,
                                    encode_transfer(bob.ledger.PK, -5), rng);
        auto r2 = sim.submit(neg);
        REQUIRE(!r2.has_value());
        CHECK(r2.error() == TxError::Malformed);
    }
}

TEST_CASE("minting is restricted to genesis") {
    algebra::Drbg rng(1009);
    LedgerSim sim(env().srv.params);
    Party alice = make_party(rng);
    sim.mint(alice.ledger.PK, 10);
    sim.mint(alice.ledger.PK, 5);  // several genesis mints are fine
    CHECK(sim.balance(alice.ledger.PK) == 15);
    CHECK_THROWS_AS(sim.mint(alice.ledger.PK, -1), std::invalid_argument);

    sim.advance_epoch();
    CHECK(sim.height() == 1);
    CHECK_THROWS_AS(sim.mint(alice.ledger.PK, 1), std::logic_error);
    CHECK(sim.minted_total() == 15);
}

TEST_CASE("the event log is canonical, line-delimited, and seed-deterministic") {
    auto run = [&]() {
        algebra::Drbg rng(1010);
        LedgerSim sim(env().srv.params);
        Party vendor = make_party(rng);
        Party node = make_party(rng);
        auto k1 = daps::daps_kgen(rng);
        sim.mint(vendor.ledger.PK, 10);
        ContractId id = deploy(sim, vendor.ledger, 1, 1, 10, 10, {k1.pk}, rng);
        auto r = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
        REQUIRE(r.has_value());
        // One rejected transaction is part of the scripted log.
        auto again = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
        REQUIRE(!again.has_value());
        sim.advance_epoch();
        sim.advance_epoch();
        auto w = sim.submit(withdraw_tx(sim, vendor.ledger, id, rng));
        REQUIRE(w.has_value());
        return sim.log();
    };

    auto log1 = run();
    auto log2 = run();
    CHECK(log1 == log2);
    REQUIRE(log1.size() == 7);  // mint, publish, claim, rejected claim, 2 advances, withdraw

    // Every line parses as a JSON object with the common fields.
    for (const auto& line : log1) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        REQUIRE(!j.is_discarded());
        CHECK(j.contains("epoch"));
        CHECK(j.contains("kind"));
    }
    auto claim_line = nlohmann::json::parse(log1[2]);
    CHECK(claim_line["kind"] == "claim");
    CHECK(claim_line["result"] == "ok");
    CHECK(claim_line["amount"] == 10);
    auto rejected = nlohmann::json::parse(log1[3]);
    CHECK(rejected["result"] == "replay-rejected");
    auto withdraw_line = nlohmann::json::parse(log1[6]);
    CHECK(withdraw_line["kind"] == "withdraw");
    CHECK(withdraw_line["amount"] == 0);
}

TEST_CASE("accepted claims are observable with their proofs") {
    algebra::Drbg rng(1011);
    LedgerSim sim(env().srv.params);
    Party vendor = make_party(rng);
    Party node = make_party(rng);
    auto k1 = daps::daps_kgen(rng);
    sim.mint(vendor.ledger.PK, 10);
    ContractId id = deploy(sim, vendor.ledger, 5, 1, 10, 10, {k1.pk}, rng);
    auto r = sim.submit(claim_tx(sim, id, node.ledger, k1, rng));
    REQUIRE(r.has_value());

    REQUIRE(sim.claims().size() == 1);
    const ClaimEvent& ev = sim.claims()[0];
    CHECK(ev.contract == id);
    CHECK(ev.paid == 10);
    CHECK(ev.pk.to_bytes() == k1.pk.to_bytes());
    CHECK(ev.sender.to_bytes() == node.ledger.PK.to_bytes());
    // The recorded double-authentication signature verifies over the binding
    // any observer can recompute from public claim data.
    auto addr = daps::DapsAddress::session(ev.pk, sim.contract(id)->update_id);
    CHECK(daps::daps_verify(ev.pk, addr, claim_binding(id, ev.pk, ev.sender), ev.daps_sig));
}
