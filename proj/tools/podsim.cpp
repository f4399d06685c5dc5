// podsim: deterministic end-to-end driver for the delivery protocol.
//
//   podsim run          one scenario, report to stdout (canonical copy via --out)
//   podsim suite        adversarial matrix across seeds
//   podsim bench        signing/primitive timing tables
//   podsim keygen-demo  key material walk-through plus a re-verified vector file
//
// Exit codes: 0 on success / expected outcome, 1 when a run's outcome differs
// from the scenario expectation, 2 on usage errors, 3 on internal failures.
// Failure reasons are single machine-readable lines on stderr.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pod/oabs/oabs.hpp"
#include "pod/policy/policy.hpp"
#include "pod/protocol/scenario.hpp"

namespace {

using pod::Bytes;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string hex(std::span<const std::uint8_t> b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * b.size());
    for (std::uint8_t v : b) {
        out.push_back(digits[v >> 4]);
        out.push_back(digits[v & 0xf]);
    }
    return out;
}

std::optional<Bytes> unhex(std::string_view s) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (s.size() % 2) return std::nullopt;
    Bytes out;
    out.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); i += 2) {
        int hi = nibble(s[i]), lo = nibble(s[i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("cannot write file '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct ConfigFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string adversary;
    std::vector<std::string> sets;
};

void add_config_flags(CLI::App* sub, ConfigFlags& flags) {
    sub->add_option("--config", flags.config_path, "scenario config file (key=value lines)");
    sub->add_option("--seed", flags.seed, "override the scenario seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    sub->add_option("--adversary", flags.adversary,
                    "honest | node-skips-delta2 | device-withholds-gamma | unregistered-node | "
                    "late-claim");
    sub->add_option("--set", flags.sets, "extra key=value override (repeatable)");
}

pod::protocol::ScenarioConfig build_config(const ConfigFlags& flags) {
    pod::protocol::ScenarioConfig cfg;
    if (!flags.config_path.empty()) {
        auto loaded = pod::protocol::load_config_file(flags.config_path);
        if (!loaded) throw UsageError(loaded.error());
        cfg = loaded.value();
    }
    if (flags.seed_set) cfg.seed = flags.seed;
    if (!flags.adversary.empty()) {
        if (auto err = pod::protocol::apply_override(cfg, "adversary", flags.adversary)) {
            throw UsageError(*err);
        }
    }
    for (const std::string& kv : flags.sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        if (auto err = pod::protocol::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1))) {
            throw UsageError(*err);
        }
    }
    if (auto err = pod::protocol::validate_config(cfg)) throw UsageError(*err);
    return cfg;
}

int cmd_run(const ConfigFlags& flags, const std::string& out_path) {
    pod::protocol::ScenarioConfig cfg = build_config(flags);
    pod::protocol::RunReport rep = pod::protocol::run_scenario(cfg);
    std::cout << rep.to_text();
    if (!out_path.empty()) write_file(out_path, rep.canonical_text());
    pod::protocol::Outcome expected = pod::protocol::expected_outcome(cfg.adversary);
    if (rep.outcome != expected) {
        std::cerr << "error: outcome-mismatch expected=" << pod::protocol::outcome_text(expected)
                  << " actual=" << pod::protocol::outcome_text(rep.outcome) << "\n";
        return 1;
    }
    return 0;
}

int cmd_suite(const ConfigFlags& flags, std::size_t seeds, const std::string& out_path) {
    if (seeds == 0) throw UsageError("seeds: at least one seed per adversary is required");
    pod::protocol::ScenarioConfig base = build_config(flags);
    pod::protocol::SuiteReport suite = pod::protocol::run_suite(base, seeds);
    std::cout << suite.to_text();
    if (!out_path.empty()) write_file(out_path, suite.to_text());
    if (!suite.all_expected || suite.mixed_outcomes) {
        std::cerr << "error: suite-mismatch all-expected=" << (suite.all_expected ? "yes" : "no")
                  << " mixed-outcomes=" << (suite.mixed_outcomes ? "present" : "none") << "\n";
        return 1;
    }
    return 0;
}

int cmd_bench(std::vector<std::size_t> counts, std::size_t iterations,
              const std::string& out_path) {
    if (counts.empty()) counts = {10, 20, 50};
    for (std::size_t c : counts) {
        if (c == 0) throw UsageError("counts: attribute counts must be positive");
    }
    if (iterations < 30) {
        throw UsageError("iterations: at least 30 iterations are required for a stable mean");
    }
    pod::protocol::BenchReport rep = pod::protocol::bench_sign(counts, iterations);
    std::cout << rep.to_text();
    if (!out_path.empty()) write_file(out_path, rep.to_text());
    return 0;
}

// Renders an LSSS entry; formula compilation only ever produces -1, 0, 1.
std::string lsss_entry(const pod::algebra::Scalar& v) {
    using pod::algebra::Scalar;
    if (v == Scalar::zero()) return "0";
    if (v == Scalar::one()) return "1";
    if (v == -Scalar::one()) return "-1";
    return "?";
}

constexpr std::string_view kVectorHeader = "pod-vectors v1";

std::string render_vectors(const std::string& policy_text,
                           const pod::policy::AttributeSet& w,
                           const pod::oabs::PublicParams& params,
                           const pod::oabs::KeyPair& keys, const Bytes& message,
                           const pod::oabs::Signature& sig) {
    std::ostringstream o;
    o << kVectorHeader << "\n";
    o << "policy " << policy_text << "\n";
    o << "attributes " << hex(w.canonical_bytes()) << "\n";
    o << "params " << hex(params.to_bytes()) << "\n";
    o << "outsourcing-key " << hex(keys.outsourcing.to_bytes()) << "\n";
    o << "device-key " << hex(keys.device.to_bytes()) << "\n";
    o << "message " << hex(message) << "\n";
    o << "signature " << hex(sig.to_bytes()) << "\n";
    return o.str();
}

// Parses a vector file back and re-runs verification from the decoded bytes
// alone (nothing from the in-memory objects is reused).
bool reverify_vectors(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::map<std::string, std::string> fields;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kVectorHeader) return false;
            header_seen = true;
            continue;
        }
        std::size_t space = line.find(' ');
        if (space == std::string::npos) return false;
        fields[line.substr(0, space)] = line.substr(space + 1);
    }
    for (const char* key : {"attributes", "params", "outsourcing-key", "device-key", "message",
                            "signature"}) {
        if (!fields.count(key)) return false;
    }
    auto attrs_bytes = unhex(fields["attributes"]);
    auto params_bytes = unhex(fields["params"]);
    auto message = unhex(fields["message"]);
    auto sig_bytes = unhex(fields["signature"]);
    auto okey_bytes = unhex(fields["outsourcing-key"]);
    auto dkey_bytes = unhex(fields["device-key"]);
    if (!attrs_bytes || !params_bytes || !message || !sig_bytes || !okey_bytes || !dkey_bytes) {
        return false;
    }
    auto w = pod::policy::AttributeSet::from_canonical_bytes(*attrs_bytes);
    auto params = pod::oabs::PublicParams::from_bytes(*params_bytes);
    auto sig = pod::oabs::Signature::from_bytes(*sig_bytes);
    auto okey = pod::oabs::OutsourcingKey::from_bytes(*okey_bytes);
    auto dkey = pod::oabs::DeviceKey::from_bytes(*dkey_bytes);
    if (!w || !params || !sig || !okey || !dkey) return false;
    return pod::oabs::verify(*params, *message, *w, *sig);
}

int cmd_keygen_demo(const std::string& policy_text, std::uint64_t seed,
                    const std::string& out_path) {
    auto formula = pod::policy::parse_formula(policy_text);
    if (!formula) throw UsageError("policy: " + formula.error());
    pod::policy::AccessStructure structure = pod::policy::lsss_from_formula(formula.value());

    std::cout << "keygen-demo seed=" << seed << "\n";
    std::cout << "policy \"" << policy_text << "\"\n";
    std::cout << "lsss rows=" << structure.row_count() << " cols=" << structure.cols << "\n";
    for (std::size_t i = 0; i < structure.row_count(); ++i) {
        std::cout << "  row " << i << " attr=" << structure.row_labels[i] << " vector=(";
        for (std::size_t k = 0; k < structure.cols; ++k) {
            std::cout << (k ? "," : "") << lsss_entry(structure.rows[i][k]);
        }
        std::cout << ")\n";
    }

    std::vector<std::string> labels;
    for (const std::string& label : structure.row_labels) {
        if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
            labels.push_back(label);
        }
    }
    pod::algebra::Drbg rng(seed);
    auto w = pod::policy::random_satisfying_subset(rng, formula.value(), labels);
    if (!w) throw std::runtime_error("no satisfying attribute subset found");

    auto srv = pod::oabs::setup(rng, labels.size() + 2, 256);
    auto keys = pod::oabs::keygen(srv.params, srv.msk, formula.value(), rng);
    Bytes message = rng.bytes(32);
    auto sig = pod::oabs::sign_full(srv.params, keys, *w, message, rng);
    if (!sig) {
        throw std::runtime_error("signing failed: " +
                                 std::string(pod::oabs::error_text(sig.error())));
    }

    auto check = [](const char* what, bool ok) {
        std::cout << "round-trip " << what << (ok ? " ok" : " FAILED") << "\n";
        if (!ok) throw std::runtime_error(std::string("round-trip failed for ") + what);
    };
    Bytes params_bytes = srv.params.to_bytes();
    auto params_back = pod::oabs::PublicParams::from_bytes(params_bytes);
    check("params", params_back && params_back->to_bytes() == params_bytes);
    Bytes okey_bytes = keys.outsourcing.to_bytes();
    auto okey_back = pod::oabs::OutsourcingKey::from_bytes(okey_bytes);
    check("outsourcing-key", okey_back && okey_back->to_bytes() == okey_bytes);
    Bytes dkey_bytes = keys.device.to_bytes();
    auto dkey_back = pod::oabs::DeviceKey::from_bytes(dkey_bytes);
    check("device-key", dkey_back && dkey_back->to_bytes() == dkey_bytes);
    Bytes sig_bytes = sig.value().to_bytes();
    auto sig_back = pod::oabs::Signature::from_bytes(sig_bytes);
    check("signature", sig_back && sig_back->to_bytes() == sig_bytes);

    std::cout << "sizes params=" << params_bytes.size() << " outsourcing-key=" << okey_bytes.size()
              << " device-key=" << dkey_bytes.size() << " signature=" << sig_bytes.size() << "\n";
    bool verified = pod::oabs::verify(srv.params, message, *w, sig.value());
    std::cout << "verify " << (verified ? "ok" : "FAILED") << "\n";
    if (!verified) throw std::runtime_error("fresh signature failed to verify");

    std::string vectors = render_vectors(policy_text, *w, srv.params, keys, message, sig.value());
    if (!out_path.empty()) {
        write_file(out_path, vectors);
        bool again = reverify_vectors(read_file(out_path));
        std::cout << "vector file " << out_path << " re-verifies " << (again ? "ok" : "FAILED")
                  << "\n";
        if (!again) throw std::runtime_error("vector file failed re-verification");
    } else {
        std::cout << vectors;
        std::cout << "vectors re-verify " << (reverify_vectors(vectors) ? "ok" : "FAILED") << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"proof-of-delivery protocol simulator"};
    app.require_subcommand(1);

    ConfigFlags run_flags;
    std::string run_out;
    CLI::App* run = app.add_subcommand("run", "drive one scenario end to end");
    add_config_flags(run, run_flags);
    run->add_option("--out", run_out, "write the canonical report to this file");

    ConfigFlags suite_flags;
    std::string suite_out;
    std::size_t suite_seeds = 5;
    CLI::App* suite = app.add_subcommand("suite", "adversarial matrix across seeds");
    add_config_flags(suite, suite_flags);
    suite->add_option("--seeds", suite_seeds, "seeds per adversary (default 5)");
    suite->add_option("--out", suite_out, "write the suite report to this file");

    std::vector<std::size_t> bench_counts;
    std::size_t bench_iterations = 30;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "timing tables (signing and primitives)");
    bench->add_option("--counts", bench_counts, "attribute counts (default 10 20 50)");
    bench->add_option("--iterations", bench_iterations, "iterations per mean (at least 30)");
    bench->add_option("--out", bench_out, "write the timing table to this file");

    std::string demo_policy = "A AND B";
    std::uint64_t demo_seed = 1;
    std::string demo_out;
    CLI::App* demo = app.add_subcommand("keygen-demo", "print key material and test vectors");
    demo->add_option("--policy", demo_policy, "monotone policy formula (default \"A AND B\")");
    demo->add_option("--seed", demo_seed, "generator seed (default 1)");
    demo->add_option("--out", demo_out, "write the vector file here (re-verified after writing)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_flags, run_out);
        if (suite->parsed()) return cmd_suite(suite_flags, suite_seeds, suite_out);
        if (bench->parsed()) return cmd_bench(bench_counts, bench_iterations, bench_out);
        if (demo->parsed()) return cmd_keygen_demo(demo_policy, demo_seed, demo_out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
