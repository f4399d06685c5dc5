#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pod/ledger/ledger.hpp"
#include "pod/protocol/actors.hpp"

// Deterministic scenario driver: wires the four actors and the ledger into a
// complete delivery session, classifies the outcome, and renders reports
// whose canonical bytes depend only on the configuration (wall-clock timing
// is reported separately and never enters the canonical form).

namespace pod::protocol {

// Who misbehaves, and how. Every session of a run follows the same script;
// partially-adversarial populations are out of scope for outcome
// classification.
enum class Adversary {
    Honest,                // everyone follows the protocol
    NodeSkipsDelta2,       // node claims with garbage in the second-signature slot
    DeviceWithholdsGamma,  // device never finishes the delivery proof
    UnregisteredNode,      // serving nodes missing from the vendor's register
    LateClaim,             // node claims only after the deadline epoch
};

inline constexpr std::array<Adversary, 5> kAllAdversaries = {
    Adversary::Honest,           Adversary::NodeSkipsDelta2, Adversary::DeviceWithholdsGamma,
    Adversary::UnregisteredNode, Adversary::LateClaim,
};

std::string_view adversary_token(Adversary a);
std::optional<Adversary> parse_adversary(std::string_view token);

struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::size_t vendors = 1;  // exactly one supported (multi-vendor is a non-goal)
    std::size_t nodes = 1;
    std::size_t gateways = 1;  // exactly one supported
    std::size_t devices = 1;
    std::size_t n = 16;   // attribute capacity of the vendor's parameters
    std::size_t l = 256;  // digest length in bits
    std::vector<std::string> policies = {"firmware AND region"};  // one, or one per device
    std::vector<std::string> attributes = {"firmware", "region"};  // claimed set W
    ledger::Amount incentive = 10;                                 // x, per delivered device
    ledger::Epoch deadline = 5;                                    // limitation time t
    Adversary adversary = Adversary::Honest;
    std::size_t payload_size = 1024;  // update binary size in bytes
};

// Empty when the configuration is runnable; otherwise a usage message that
// starts with the offending field name.
std::optional<std::string> validate_config(const ScenarioConfig& cfg);

// key=value text, one pair per line; '#' starts a comment; 'policy' may
// repeat to give per-device policies; 'attributes' is a comma-joined list.
Result<ScenarioConfig, std::string> parse_config_text(std::string_view text);
Result<ScenarioConfig, std::string> load_config_file(const std::string& path);

// One key=value assignment on top of an existing configuration (flag
// overrides). Empty on success, message on unknown key or bad value.
std::optional<std::string> apply_override(ScenarioConfig& cfg, std::string_view key,
                                          std::string_view value);

enum class Outcome {
    PaidDelivered,        // every slot claimed and every device updated
    RefundedUndelivered,  // nothing paid, nothing delivered, full residual swept
    Violation,            // any mixed state (paid-but-undelivered or the reverse)
};

std::string_view outcome_text(Outcome o);

// What the driver expects a run with this adversary to classify as.
Outcome expected_outcome(Adversary a);

struct SessionReport {
    std::string device;  // role label, e.g. "device0"
    std::string node;    // role label of the serving node
    bool claim_submitted = false;
    bool claim_accepted = false;
    std::string claim_error;  // stable token when not accepted
    ledger::Amount paid = 0;
    bool delivered = false;  // installed plaintext bit-exact to the vendor's binary
};

struct RunReport {
    ScenarioConfig config;
    Outcome outcome = Outcome::Violation;
    ledger::ContractId contract = 0;
    Bytes update_id;
    ledger::Amount funds = 0;       // escrow at publish: devices * incentive
    ledger::Amount paid_total = 0;  // sum of accepted claim payouts
    ledger::Amount refund = 0;      // vendor sweep after the deadline
    bool refund_matches_residual = false;  // refund == funds - paid_total
    bool conservation_ok = false;          // ledger circulation == minted
    std::vector<SessionReport> sessions;
    std::vector<std::string> trace;       // ordered actor-message log
    std::vector<std::string> ledger_log;  // line-delimited ledger records
    double elapsed_ms = 0;                // wall clock; never part of canonical bytes

    // Deterministic under a fixed configuration: excludes all timing.
    std::string canonical_text() const;
    Bytes canonical_bytes() const;
    // Human report: canonical text plus an informational timing footer.
    std::string to_text() const;
};

// Drives one full run. Throws std::invalid_argument with a field-named usage
// message when the configuration fails validation.
RunReport run_scenario(const ScenarioConfig& cfg);

struct SuiteCell {
    Adversary adversary = Adversary::Honest;
    std::uint64_t seed = 0;
    Outcome outcome = Outcome::Violation;
    bool expectation_met = false;
    bool refund_matches_residual = false;
    bool conservation_ok = false;
};

struct SuiteReport {
    std::vector<SuiteCell> cells;  // adversary-major, seed-minor order
    bool all_expected = false;     // every cell classified as expected
    bool mixed_outcomes = false;   // some adversary produced inconsistent classes
    std::string to_text() const;
};

// The adversarial matrix: every adversary in kAllAdversaries, seeds
// base.seed .. base.seed + seeds_per_adversary - 1. Node counts are adjusted
// per adversary where the script needs an extra registered node.
SuiteReport run_suite(const ScenarioConfig& base, std::size_t seeds_per_adversary);

// Timing columns for one primitive; negative entries mean "not applicable".
struct BenchColumns {
    double setup_ms = -1;
    double keygen_ms = -1;
    double sign_ms = -1;    // sign or encrypt
    double verify_ms = -1;  // verify or decrypt
    double extract_ms = -1;
};

struct SignTiming {
    std::size_t attrs = 0;
    double mean_ms = 0;
};

struct BenchReport {
    std::size_t iterations = 0;
    std::vector<SignTiming> sign;  // mean device-side signing time per |W|
    BenchColumns daps;
    BenchColumns ledger_sig;
    BenchColumns elgamal;

    // Measured rows plus fixed laptop reference figures, which are reported
    // for comparison only and never asserted anywhere.
    std::string to_text() const;
};

// Mean timings over `iterations` runs per attribute count (device-side
// signing only; the outsourced half is prepared once per count). Requires
// each count >= 1; parameters are sized to fit the largest count.
BenchReport bench_sign(std::span<const std::size_t> attr_counts, std::size_t iterations);

}  // namespace pod::protocol
