#include "pod/protocol/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pod/daps/daps.hpp"
#include "pod/oabs/oabs.hpp"
#include "pod/pcrypto/pcrypto.hpp"
#include "pod/policy/policy.hpp"

namespace pod::protocol {

namespace {

using Clock = std::chrono::steady_clock;

std::string strf(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string strf(const char* fmt, ...) {
    va_list args;
    va_start(args, fmt);
    va_list copy;
    va_copy(copy, args);
    int need = std::vsnprintf(nullptr, 0, fmt, copy);
    va_end(copy);
    std::string out(need > 0 ? static_cast<std::size_t>(need) : 0, '\0');
    if (need > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, args);
    va_end(args);
    return out;
}

std::string hex(std::span<const std::uint8_t> b, std::size_t max_bytes = SIZE_MAX) {
    static const char* digits = "0123456789abcdef";
    std::size_t n = std::min(b.size(), max_bytes);
    std::string out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(digits[b[i] >> 4]);
        out.push_back(digits[b[i] & 0xf]);
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_amount(std::string_view s, ledger::Amount& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool is_label(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                  c == '_' || c == '.' || c == ':' || c == '/' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back(sep);
        out += parts[i];
    }
    return out;
}

// One key=value assignment. `policies_replaced` makes the first `policy` key
// of a config file drop the built-in default before appending.
std::optional<std::string> set_key(ScenarioConfig& cfg, std::string_view key,
                                   std::string_view value, bool& policies_replaced) {
    auto size_field = [&](std::string_view name, std::size_t& out) -> std::optional<std::string> {
        std::uint64_t v = 0;
        if (!parse_u64(value, v)) {
            return strf("invalid value for '%.*s'", int(name.size()), name.data());
        }
        out = static_cast<std::size_t>(v);
        return std::nullopt;
    };
    if (key == "seed") {
        std::uint64_t v = 0;
        if (!parse_u64(value, v)) return "invalid value for 'seed'";
        cfg.seed = v;
        return std::nullopt;
    }
    if (key == "vendors") return size_field(key, cfg.vendors);
    if (key == "nodes") return size_field(key, cfg.nodes);
    if (key == "gateways") return size_field(key, cfg.gateways);
    if (key == "devices") return size_field(key, cfg.devices);
    if (key == "n") return size_field(key, cfg.n);
    if (key == "l") return size_field(key, cfg.l);
    if (key == "payload") return size_field(key, cfg.payload_size);
    if (key == "deadline") {
        std::uint64_t v = 0;
        if (!parse_u64(value, v)) return "invalid value for 'deadline'";
        cfg.deadline = v;
        return std::nullopt;
    }
    if (key == "incentive") {
        ledger::Amount v = 0;
        if (!parse_amount(value, v)) return "invalid value for 'incentive'";
        cfg.incentive = v;
        return std::nullopt;
    }
    if (key == "adversary") {
        auto a = parse_adversary(value);
        if (!a) {
            return strf("invalid value for 'adversary' (one of: honest, node-skips-delta2, "
                        "device-withholds-gamma, unregistered-node, late-claim)");
        }
        cfg.adversary = *a;
        return std::nullopt;
    }
    if (key == "policy") {
        std::string text(trim(value));
        if (text.empty()) return "invalid value for 'policy' (empty policy text)";
        if (!policies_replaced) {
            cfg.policies.clear();
            policies_replaced = true;
        }
        cfg.policies.push_back(std::move(text));
        return std::nullopt;
    }
    if (key == "attributes") {
        std::vector<std::string> labels;
        std::string_view rest = value;
        while (!rest.empty()) {
            std::size_t comma = rest.find(',');
            std::string_view part = trim(rest.substr(0, comma));
            if (!part.empty()) labels.emplace_back(part);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (labels.empty()) return "invalid value for 'attributes' (no labels)";
        cfg.attributes = std::move(labels);
        return std::nullopt;
    }
    return strf("unknown key '%.*s'", int(key.size()), key.data());
}

std::string policy_for(const ScenarioConfig& cfg, std::size_t device_index) {
    return cfg.policies.size() == 1 ? cfg.policies[0] : cfg.policies[device_index];
}

template <class F>
double mean_ms(std::size_t iterations, F&& op) {
    op();  // warm caches and fault in code before the measured runs
    auto t0 = Clock::now();
    for (std::size_t i = 0; i < iterations; ++i) op();
    auto dt = std::chrono::duration<double, std::milli>(Clock::now() - t0);
    return dt.count() / static_cast<double>(iterations);
}

std::string bench_col(double ms) {
    return ms < 0 ? std::string("-") : strf("%.3f", ms);
}

}  // namespace

std::string_view adversary_token(Adversary a) {
    switch (a) {
        case Adversary::Honest: return "honest";
        case Adversary::NodeSkipsDelta2: return "node-skips-delta2";
        case Adversary::DeviceWithholdsGamma: return "device-withholds-gamma";
        case Adversary::UnregisteredNode: return "unregistered-node";
        case Adversary::LateClaim: return "late-claim";
    }
    return "?";
}

std::optional<Adversary> parse_adversary(std::string_view token) {
    for (Adversary a : kAllAdversaries) {
        if (token == adversary_token(a)) return a;
    }
    return std::nullopt;
}

std::string_view outcome_text(Outcome o) {
    switch (o) {
        case Outcome::PaidDelivered: return "paid+delivered";
        case Outcome::RefundedUndelivered: return "refunded+undelivered";
        case Outcome::Violation: return "violation";
    }
    return "?";
}

Outcome expected_outcome(Adversary a) {
    return a == Adversary::Honest ? Outcome::PaidDelivered : Outcome::RefundedUndelivered;
}

std::optional<std::string> validate_config(const ScenarioConfig& cfg) {
    if (cfg.vendors != 1) return "vendors: exactly one vendor is supported";
    if (cfg.gateways != 1) return "gateways: exactly one gateway is supported";
    if (cfg.devices == 0) return "devices: at least one device is required";
    if (cfg.nodes < cfg.devices) return "nodes: need at least one transmission node per device";
    if (cfg.adversary == Adversary::UnregisteredNode && cfg.nodes < cfg.devices + 1) {
        return "nodes: unregistered-node runs need one extra registered node";
    }
    if (cfg.n < 2) return "n: attribute capacity must be at least 2";
    if (cfg.l == 0) return "l: digest length must be at least 1 bit";
    if (cfg.incentive < 1) return "incentive: must be a positive amount";
    if (cfg.payload_size == 0) return "payload: update payload must be at least 1 byte";
    if (cfg.payload_size > (std::size_t{1} << 26)) {
        return "payload: update payload exceeds 67108864 bytes";
    }
    if (cfg.attributes.empty()) return "attributes: at least one attribute label is required";
    for (const std::string& label : cfg.attributes) {
        if (!is_label(label)) return strf("attributes: invalid label '%s'", label.c_str());
    }
    AttributeSet w = AttributeSet::from_labels(cfg.attributes);
    if (w.size() + 2 > cfg.n) return "attributes: set exceeds capacity (need |W| + 2 <= n)";
    if (cfg.policies.empty()) return "policy: at least one policy is required";
    if (cfg.policies.size() != 1 && cfg.policies.size() != cfg.devices) {
        return "policy: provide one policy or one per device";
    }
    for (std::size_t j = 0; j < cfg.devices; ++j) {
        const std::string& text = policy_for(cfg, j);
        auto formula = policy::parse_formula(text);
        if (!formula) return strf("policy: %s", formula.error().c_str());
        if (!policy::satisfies(policy::lsss_from_formula(formula.value()), w)) {
            return strf("attributes: set does not satisfy the policy for device%zu", j);
        }
    }
    return std::nullopt;
}

Result<ScenarioConfig, std::string> parse_config_text(std::string_view text) {
    ScenarioConfig cfg;
    bool policies_replaced = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            return Result<ScenarioConfig, std::string>::err(
                strf("line %zu: expected key=value", line_no));
        }
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (auto err = set_key(cfg, key, value, policies_replaced)) {
            return Result<ScenarioConfig, std::string>::err(
                strf("line %zu: %s", line_no, err->c_str()));
        }
    }
    return cfg;
}

Result<ScenarioConfig, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return Result<ScenarioConfig, std::string>::err(
            strf("cannot open config file '%s'", path.c_str()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::optional<std::string> apply_override(ScenarioConfig& cfg, std::string_view key,
                                          std::string_view value) {
    bool replace_policies = false;  // an override always replaces the policy list
    return set_key(cfg, trim(key), trim(value), replace_policies);
}

RunReport run_scenario(const ScenarioConfig& cfg) {
    if (auto err = validate_config(cfg)) throw std::invalid_argument(*err);
    auto t0 = Clock::now();

    RunReport rep;
    rep.config = cfg;

    algebra::Drbg root(cfg.seed);
    algebra::Drbg vendor_rng = root.fork("vendor");
    algebra::Drbg gateway_rng = root.fork("gateway");
    algebra::Drbg runner_rng = root.fork("runner");

    Vendor vendor("vendor", cfg.n, cfg.l, vendor_rng);
    rep.trace.push_back(strf("setup vendor n=%zu l=%zu", cfg.n, cfg.l));

    std::vector<TransmissionNode> nodes;
    std::vector<algebra::Drbg> node_rngs;
    nodes.reserve(cfg.nodes);
    node_rngs.reserve(cfg.nodes);
    for (std::size_t i = 0; i < cfg.nodes; ++i) {
        std::string label = strf("node%zu", i);
        node_rngs.push_back(root.fork(label));
        nodes.emplace_back(label, node_rngs.back());
    }
    Gateway gateway("gateway", gateway_rng);

    std::vector<Device> devices;
    std::vector<algebra::Drbg> device_rngs;
    devices.reserve(cfg.devices);
    device_rngs.reserve(cfg.devices);
    for (std::size_t j = 0; j < cfg.devices; ++j) {
        std::string label = strf("device%zu", j);
        devices.emplace_back(label, vendor.ledger_pk());
        device_rngs.push_back(root.fork(label));
        std::string text = policy_for(cfg, j);
        auto formula = policy::parse_formula(text);
        auto keys = vendor.issue_device_key(label, formula.value(), vendor_rng);
        if (!keys) throw std::runtime_error("key issue failed: " + keys.error());
        std::size_t rows = keys.value().outsourcing.structure.row_count();
        devices.back().provision(std::move(keys.value()));
        gateway.register_device(label);
        rep.trace.push_back(strf("keygen %s rows=%zu policy=\"%s\"", label.c_str(), rows,
                                 text.c_str()));
    }

    // Under the unregistered-node script the serving nodes stay off the
    // register; the spare tail keeps the contract's key list non-empty.
    std::size_t first_registered =
        cfg.adversary == Adversary::UnregisteredNode ? cfg.devices : 0;
    for (std::size_t i = first_registered; i < cfg.nodes; ++i) {
        vendor.register_node(nodes[i].delivery_pk());
        rep.trace.push_back(strf("register node%zu", i));
    }

    ledger::LedgerSim sim(vendor.params());
    rep.funds = static_cast<ledger::Amount>(cfg.devices) * cfg.incentive;
    sim.mint(vendor.ledger_pk(), rep.funds);
    rep.trace.push_back(strf("mint vendor amount=%lld", static_cast<long long>(rep.funds)));

    Bytes firmware = runner_rng.bytes(cfg.payload_size);
    AttributeSet w = AttributeSet::from_labels(cfg.attributes);
    auto published = vendor.publish(sim, firmware, cfg.deadline, cfg.devices, w, cfg.incentive,
                                    vendor_rng);
    if (!published) throw std::runtime_error("publish failed: " + published.error());
    rep.contract = published.value().contract;
    rep.update_id = published.value().update_id;
    rep.trace.push_back(strf("publish contract=%llu update=%s slots=%zu x=%lld deadline=%llu",
                             static_cast<unsigned long long>(rep.contract),
                             hex(rep.update_id).c_str(), cfg.devices,
                             static_cast<long long>(cfg.incentive),
                             static_cast<unsigned long long>(cfg.deadline)));

    // Session setup: device j is served by node j throughout.
    for (std::size_t j = 0; j < cfg.devices; ++j) {
        TransmissionNode& nd = nodes[j];
        Device& dev = devices[j];
        SessionReport sr;
        sr.device = dev.id();
        sr.node = nd.name();

        auto bundle = vendor.query(nd.delivery_pk(), rep.update_id, vendor_rng);
        if (!bundle) throw std::runtime_error("query failed: " + bundle.error());
        rep.trace.push_back(strf("query %s ok", nd.name().c_str()));

        auto fetched = nd.fetch(bundle.value(), vendor.ledger_pk());
        if (!fetched) throw std::runtime_error("fetch failed: " + fetched.error());
        rep.trace.push_back(strf("fetch %s bytes=%zu", nd.name().c_str(),
                                 fetched.value().size()));

        auto challenge = gateway.notify(nd.delivery_pk(), rep.update_id, dev.id(), gateway_rng);
        if (!challenge) throw std::runtime_error("notify failed: " + challenge.error());
        rep.trace.push_back(strf("notify %s challenge=%s", dev.id().c_str(),
                                 hex(challenge.value(), 8).c_str()));

        daps::DapsSignature delta1 = nd.sign_challenge(rep.update_id, challenge.value());
        auto forwarded = gateway.accept_sign1(*nd.bundle(rep.update_id), delta1);
        if (!forwarded) throw std::runtime_error("sign1 failed: " + forwarded.error());
        rep.trace.push_back(strf("sign1 %s accepted", nd.name().c_str()));

        auto offer = dev.accept_offer(forwarded.value());
        if (!offer) throw std::runtime_error("offer failed: " + offer.error());

        if (cfg.adversary == Adversary::DeviceWithholdsGamma) {
            rep.trace.push_back(strf("sign2 %s withholds delivery proof", dev.id().c_str()));
        } else {
            gateway.hold_outsourcing_key(dev.id(), dev.outsourcing_key());
            auto partial = gateway.outsource_sign(vendor.params(), dev.id(), w, gateway_rng);
            if (!partial) throw std::runtime_error("outsource failed: " + partial.error());
            auto gamma = dev.complete_signature(vendor.params(), partial.value(), w,
                                                device_rngs[j]);
            if (!gamma) throw std::runtime_error("sign2 failed: " + gamma.error());
            nd.accept_gamma(rep.update_id, gamma.value());
            rep.trace.push_back(strf("sign2 %s gamma -> %s", dev.id().c_str(),
                                     nd.name().c_str()));
        }
        rep.sessions.push_back(std::move(sr));
    }

    if (cfg.adversary == Adversary::LateClaim) {
        while (sim.height() <= cfg.deadline) sim.advance_epoch();
        rep.trace.push_back(strf("advance height=%llu (past deadline)",
                                 static_cast<unsigned long long>(sim.height())));
    }

    for (std::size_t j = 0; j < cfg.devices; ++j) {
        TransmissionNode& nd = nodes[j];
        SessionReport& sr = rep.sessions[j];
        std::size_t log_before = sim.log().size();
        auto receipt = nd.claim(sim, rep.contract, rep.update_id, node_rngs[j],
                                cfg.adversary != Adversary::NodeSkipsDelta2);
        sr.claim_submitted = sim.log().size() > log_before;
        if (receipt) {
            sr.claim_accepted = true;
            sr.paid = receipt.value().paid;
            rep.paid_total += sr.paid;
            rep.trace.push_back(strf("claim %s accepted paid=%lld", nd.name().c_str(),
                                     static_cast<long long>(sr.paid)));
        } else {
            sr.claim_error = receipt.error();
            rep.trace.push_back(strf("claim %s %s=%s", nd.name().c_str(),
                                     sr.claim_submitted ? "rejected" : "withheld",
                                     sr.claim_error.c_str()));
        }
    }

    for (const Gateway::Extraction& ex : gateway.watch(sim)) {
        auto it = std::find_if(devices.begin(), devices.end(),
                               [&](const Device& d) { return d.id() == ex.device_id; });
        if (it == devices.end()) continue;
        rep.trace.push_back(strf("extract %s delivery secret recovered", ex.device_id.c_str()));
        auto installed = it->install(ex.sk);
        if (installed) {
            rep.trace.push_back(strf("install %s ok digest=%s", ex.device_id.c_str(),
                                     hex(it->firmware_digest(), 8).c_str()));
        } else {
            rep.trace.push_back(strf("install %s failed=%s", ex.device_id.c_str(),
                                     installed.error().c_str()));
        }
    }
    for (std::size_t j = 0; j < cfg.devices; ++j) {
        rep.sessions[j].delivered = devices[j].updated() && devices[j].firmware() == firmware;
    }

    while (sim.height() <= cfg.deadline) sim.advance_epoch();
    rep.trace.push_back(strf("advance height=%llu",
                             static_cast<unsigned long long>(sim.height())));
    auto swept = vendor.withdraw(sim, rep.contract, vendor_rng);
    if (swept) {
        rep.refund = swept.value();
        rep.trace.push_back(strf("withdraw vendor refund=%lld",
                                 static_cast<long long>(rep.refund)));
    } else {
        rep.trace.push_back(strf("withdraw vendor failed=%s", swept.error().c_str()));
    }

    rep.refund_matches_residual = rep.refund == rep.funds - rep.paid_total;
    rep.conservation_ok = sim.total_in_circulation() == sim.minted_total();
    bool all_paid = true, none_paid = true, all_delivered = true, none_delivered = true;
    for (const SessionReport& sr : rep.sessions) {
        if (sr.claim_accepted && sr.paid == cfg.incentive) none_paid = false;
        else all_paid = false;
        if (sr.delivered) none_delivered = false;
        else all_delivered = false;
    }
    if (all_paid && all_delivered && rep.refund == 0 && rep.refund_matches_residual &&
        rep.conservation_ok) {
        rep.outcome = Outcome::PaidDelivered;
    } else if (none_paid && none_delivered && rep.refund == rep.funds && rep.conservation_ok) {
        rep.outcome = Outcome::RefundedUndelivered;
    } else {
        rep.outcome = Outcome::Violation;
    }
    rep.ledger_log = sim.log();
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return rep;
}

std::string RunReport::canonical_text() const {
    std::ostringstream o;
    o << "run seed=" << config.seed << " adversary=" << adversary_token(config.adversary)
      << "\n";
    o << "roles vendors=" << config.vendors << " nodes=" << config.nodes
      << " gateways=" << config.gateways << " devices=" << config.devices << "\n";
    o << "params n=" << config.n << " l=" << config.l << " incentive=" << config.incentive
      << " deadline=" << config.deadline << " payload=" << config.payload_size << "\n";
    for (std::size_t j = 0; j < config.devices; ++j) {
        o << "policy device" << j << " \"" << policy_for(config, j) << "\"\n";
    }
    o << "attributes " << join(config.attributes, ',') << "\n";
    o << "contract id=" << contract << " funds=" << funds << " update=" << hex(update_id)
      << "\n";
    for (const SessionReport& s : sessions) {
        o << "session " << s.device << " " << s.node << " claim=";
        if (s.claim_accepted) {
            o << "accepted";
        } else if (s.claim_submitted) {
            o << "rejected:" << s.claim_error;
        } else {
            o << "withheld:" << s.claim_error;
        }
        o << " paid=" << s.paid << " delivered=" << (s.delivered ? "yes" : "no") << "\n";
    }
    o << "withdraw refund=" << refund
      << " residual=" << (refund_matches_residual ? "ok" : "MISMATCH") << "\n";
    o << "totals paid=" << paid_total << " conservation=" << (conservation_ok ? "ok" : "BROKEN")
      << "\n";
    o << "outcome " << outcome_text(outcome) << "\n";
    o << "trace " << trace.size() << " lines\n";
    for (const std::string& line : trace) o << "  " << line << "\n";
    o << "ledger " << ledger_log.size() << " records\n";
    for (const std::string& line : ledger_log) o << "  " << line << "\n";
    return o.str();
}

Bytes RunReport::canonical_bytes() const {
    std::string text = canonical_text();
    return Bytes(text.begin(), text.end());
}

std::string RunReport::to_text() const {
    return canonical_text() +
           strf("timing run_ms=%.3f (informational; excluded from canonical bytes)\n",
                elapsed_ms);
}

SuiteReport run_suite(const ScenarioConfig& base, std::size_t seeds_per_adversary) {
    SuiteReport suite;
    suite.all_expected = true;
    for (Adversary a : kAllAdversaries) {
        std::optional<Outcome> cls;
        for (std::size_t k = 0; k < seeds_per_adversary; ++k) {
            ScenarioConfig cfg = base;
            cfg.adversary = a;
            cfg.seed = base.seed + k;
            if (a == Adversary::UnregisteredNode && cfg.nodes < cfg.devices + 1) {
                cfg.nodes = cfg.devices + 1;
            }
            RunReport rep = run_scenario(cfg);
            SuiteCell cell;
            cell.adversary = a;
            cell.seed = cfg.seed;
            cell.outcome = rep.outcome;
            cell.expectation_met = rep.outcome == expected_outcome(a);
            cell.refund_matches_residual = rep.refund_matches_residual;
            cell.conservation_ok = rep.conservation_ok;
            suite.cells.push_back(cell);
            if (!cell.expectation_met) suite.all_expected = false;
            if (rep.outcome == Outcome::Violation) suite.mixed_outcomes = true;
            if (!cls) cls = rep.outcome;
            else if (*cls != rep.outcome) suite.mixed_outcomes = true;
        }
    }
    return suite;
}

std::string SuiteReport::to_text() const {
    std::ostringstream o;
    std::size_t per = kAllAdversaries.size() ? cells.size() / kAllAdversaries.size() : 0;
    o << "suite adversaries=" << kAllAdversaries.size() << " seeds-per-adversary=" << per
      << "\n";
    for (const SuiteCell& c : cells) {
        o << "cell adversary=" << adversary_token(c.adversary) << " seed=" << c.seed
          << " outcome=" << outcome_text(c.outcome)
          << " expected=" << (c.expectation_met ? "yes" : "NO")
          << " residual=" << (c.refund_matches_residual ? "ok" : "MISMATCH")
          << " conservation=" << (c.conservation_ok ? "ok" : "BROKEN") << "\n";
    }
    o << "summary all-expected=" << (all_expected ? "yes" : "NO")
      << " mixed-outcomes=" << (mixed_outcomes ? "PRESENT" : "none") << "\n";
    return o.str();
}

BenchReport bench_sign(std::span<const std::size_t> attr_counts, std::size_t iterations) {
    BenchReport rep;
    rep.iterations = std::max<std::size_t>(1, iterations);

    algebra::Drbg rng(0xB3EC11);
    std::size_t max_count = 1;
    for (std::size_t c : attr_counts) max_count = std::max(max_count, c);

    if (!attr_counts.empty()) {
        auto srv = oabs::setup(rng, max_count + 2, 256);
        auto formula = policy::parse_formula("fw");
        auto keys = oabs::keygen(srv.params, srv.msk, formula.value(), rng);
        for (std::size_t count : attr_counts) {
            std::vector<std::string> labels = {"fw"};
            for (std::size_t i = 1; i < count; ++i) labels.push_back(strf("extra%zu", i));
            AttributeSet w = AttributeSet::from_labels(labels);
            auto partial = oabs::sign_out(srv.params, keys.outsourcing, w, rng);
            if (!partial) throw std::runtime_error("bench: outsourced half failed");
            Bytes message = rng.bytes(32);
            double ms = mean_ms(rep.iterations, [&] {
                auto sig = oabs::sign(srv.params, keys.device, partial.value(), w, message, rng);
                if (!sig) throw std::runtime_error("bench: signing failed");
            });
            rep.sign.push_back({count, ms});
        }
    }

    {
        rep.daps.keygen_ms = mean_ms(rep.iterations, [&] { (void)daps::daps_kgen(rng); });
        daps::DapsKeypair kp = daps::daps_kgen(rng);
        daps::DapsAddress addr = daps::DapsAddress::session(kp.pk, rng.bytes(32));
        Bytes p1 = rng.bytes(32), p2 = rng.bytes(32);
        daps::DapsSignature s1 = daps::daps_sign(kp.sk, addr, p1);
        daps::DapsSignature s2 = daps::daps_sign(kp.sk, addr, p2);
        rep.daps.sign_ms = mean_ms(rep.iterations, [&] { (void)daps::daps_sign(kp.sk, addr, p1); });
        rep.daps.verify_ms =
            mean_ms(rep.iterations, [&] { (void)daps::daps_verify(kp.pk, addr, p1, s1); });
        rep.daps.extract_ms = mean_ms(rep.iterations, [&] {
            auto sk = daps::daps_extract(kp.pk, addr, p1, s1, p2, s2);
            if (!sk) throw std::runtime_error("bench: extraction failed");
        });
    }

    {
        rep.ledger_sig.keygen_ms =
            mean_ms(rep.iterations, [&] { (void)pcrypto::ledger_keygen(rng); });
        pcrypto::LedgerKeypair kp = pcrypto::ledger_keygen(rng);
        Bytes message = rng.bytes(32);
        pcrypto::LedgerSignature sig = pcrypto::ledger_sign(kp.SK, message, rng);
        rep.ledger_sig.sign_ms =
            mean_ms(rep.iterations, [&] { (void)pcrypto::ledger_sign(kp.SK, message, rng); });
        rep.ledger_sig.verify_ms = mean_ms(
            rep.iterations, [&] { (void)pcrypto::ledger_verify(kp.PK, message, sig); });
    }

    {
        pcrypto::LedgerKeypair kp = pcrypto::ledger_keygen(rng);
        Bytes body = rng.bytes(1024);
        rep.elgamal.keygen_ms =
            mean_ms(rep.iterations, [&] { (void)pcrypto::ledger_keygen(rng); });
        pcrypto::HybridCiphertext c = pcrypto::encrypt(kp.PK, body, rng);
        rep.elgamal.sign_ms =
            mean_ms(rep.iterations, [&] { (void)pcrypto::encrypt(kp.PK, body, rng); });
        rep.elgamal.verify_ms = mean_ms(rep.iterations, [&] {
            auto plain = pcrypto::decrypt(kp.SK, c);
            if (!plain) throw std::runtime_error("bench: decryption failed");
        });
    }

    return rep;
}

std::string BenchReport::to_text() const {
    std::ostringstream o;
    o << "benchmark iterations=" << iterations << " single-threaded\n";
    o << "device-side signing (mean ms per signature):\n";
    for (const SignTiming& row : sign) {
        o << strf("  |W|=%-4zu %10.3f\n", row.attrs, row.mean_ms);
    }
    o << "reference: signing with 50 attributes took about 155 ms on the baseline laptop\n";
    o << "           (reported for comparison, never asserted)\n";
    o << "primitive operations (mean ms):\n";
    o << strf("  %-12s %8s %8s %9s %9s %8s\n", "scheme", "setup", "keygen", "sign/enc",
              "ver/dec", "extract");
    auto row = [&](const char* name, const BenchColumns& c) {
        o << strf("  %-12s %8s %8s %9s %9s %8s\n", name, bench_col(c.setup_ms).c_str(),
                  bench_col(c.keygen_ms).c_str(), bench_col(c.sign_ms).c_str(),
                  bench_col(c.verify_ms).c_str(), bench_col(c.extract_ms).c_str());
    };
    row("daps", daps);
    row("ledger-sig", ledger_sig);
    row("elgamal", elgamal);
    o << "baseline laptop reference (ms; reported for comparison, never asserted):\n";
    o << strf("  %-12s %8s %8s %9s %9s %8s\n", "daps", "7", "13", "15", "31", "61");
    o << strf("  %-12s %8s %8s %9s %9s %8s\n", "ecdsa", "6", "2", "4", "10", "-");
    o << strf("  %-12s %8s %8s %9s %9s %8s\n", "elgamal", "6", "2", "11", "3", "-");
    return o.str();
}

}  // namespace pod::protocol
