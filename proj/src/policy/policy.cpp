#include "pod/policy/policy.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pod::policy {

using algebra::hash_to_attribute;
using algebra::theta_attribute;

AccessFormula AccessFormula::attr(std::string_view label) {
    AccessFormula f;
    f.kind = Kind::Attribute;
    f.label = std::string(label);
    f.attribute = hash_to_attribute(label);
    return f;
}

AccessFormula AccessFormula::attr_scalar(const Scalar& value, std::string label) {
    AccessFormula f;
    f.kind = Kind::Attribute;
    f.label = std::move(label);
    f.attribute = value;
    return f;
}

AccessFormula AccessFormula::gate(Kind k, AccessFormula lhs, AccessFormula rhs) {
    AccessFormula f;
    f.kind = k;
    f.children.push_back(std::move(lhs));
    f.children.push_back(std::move(rhs));
    return f;
}

std::string formula_to_string(const AccessFormula& f) {
    switch (f.kind) {
        case AccessFormula::Kind::Attribute:
            return f.label.empty() ? "<attr>" : f.label;
        case AccessFormula::Kind::And:
            return "(" + formula_to_string(f.children[0]) + " AND " +
                   formula_to_string(f.children[1]) + ")";
        case AccessFormula::Kind::Or:
            return "(" + formula_to_string(f.children[0]) + " OR " +
                   formula_to_string(f.children[1]) + ")";
    }
    return "";
}

namespace {

struct Parser {
    std::string_view text{};
    std::size_t pos = 0;
    std::string error;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool label_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
               c == '/' || c == '-';
    }

    std::string peek_word() {
        skip_ws();
        std::size_t end = pos;
        while (end < text.size() && label_char(text[end])) ++end;
        return std::string(text.substr(pos, end - pos));
    }

    bool fail(std::string msg) {
        if (error.empty()) error = msg + " at position " + std::to_string(pos);
        return false;
    }

    bool parse_expr(AccessFormula& out) {
        AccessFormula lhs;
        if (!parse_term(lhs)) return false;
        for (;;) {
            std::string w = peek_word();
            if (w != "OR") break;
            pos += 2;
            AccessFormula rhs;
            if (!parse_term(rhs)) return false;
            lhs = AccessFormula::gate(AccessFormula::Kind::Or, std::move(lhs), std::move(rhs));
        }
        out = std::move(lhs);
        return true;
    }

    bool parse_term(AccessFormula& out) {
        AccessFormula lhs;
        if (!parse_factor(lhs)) return false;
        for (;;) {
            std::string w = peek_word();
            if (w != "AND") break;
            pos += 3;
            AccessFormula rhs;
            if (!parse_factor(rhs)) return false;
            lhs = AccessFormula::gate(AccessFormula::Kind::And, std::move(lhs), std::move(rhs));
        }
        out = std::move(lhs);
        return true;
    }

    bool parse_factor(AccessFormula& out) {
        skip_ws();
        if (pos >= text.size()) return fail("unexpected end of policy");
        if (text[pos] == '(') {
            ++pos;
            if (!parse_expr(out)) return false;
            skip_ws();
            if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
            ++pos;
            return true;
        }
        std::string w = peek_word();
        if (w.empty()) return fail("expected attribute label");
        if (w == "AND" || w == "OR") return fail("keyword in attribute position");
        pos += w.size();
        out = AccessFormula::attr(w);
        return true;
    }
};

}  // namespace

Result<AccessFormula, std::string> parse_formula(std::string_view text) {
    Parser p;
    p.text = text;
    AccessFormula f;
    if (!p.parse_expr(f)) return Result<AccessFormula, std::string>::err(p.error);
    p.skip_ws();
    if (p.pos != text.size())
        return Result<AccessFormula, std::string>::err("trailing input at position " +
                                                       std::to_string(p.pos));
    return Result<AccessFormula, std::string>::ok(std::move(f));
}

Result<AttributeSet, std::string> AttributeSet::from_scalars(std::vector<Scalar> values) {
    std::sort(values.begin(), values.end(),
              [](const Scalar& a, const Scalar& b) { return a.cmp(b) < 0; });
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (const auto& v : values) {
        if (v.is_zero())
            return Result<AttributeSet, std::string>::err("attribute value zero is reserved");
        if (v == theta_attribute())
            return Result<AttributeSet, std::string>::err(
                "attribute value collides with the default attribute");
    }
    AttributeSet w;
    w.values_ = std::move(values);
    return Result<AttributeSet, std::string>::ok(std::move(w));
}

AttributeSet AttributeSet::from_labels(std::span<const std::string> labels) {
    std::vector<Scalar> vals;
    vals.reserve(labels.size());
    for (const auto& l : labels) vals.push_back(hash_to_attribute(l));
    auto r = from_scalars(std::move(vals));
    // hash_to_attribute never emits 0 or theta
    return r.value();
}

bool AttributeSet::contains(const Scalar& a) const {
    for (const auto& v : values_)
        if (v == a) return true;
    return false;
}

Bytes AttributeSet::canonical_bytes() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(values_.size()));
    for (const auto& v : values_) w.raw(v.to_bytes());
    return w.take();
}

std::optional<AttributeSet> AttributeSet::from_canonical_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    std::uint32_t n = r.u32();
    std::vector<Scalar> vals;
    vals.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        auto raw = r.raw(32);
        if (!r.ok()) return std::nullopt;
        auto s = Scalar::from_bytes(raw);
        if (!s) return std::nullopt;
        vals.push_back(*s);
    }
    if (!r.finish()) return std::nullopt;
    auto res = from_scalars(std::move(vals));
    if (!res) return std::nullopt;
    // canonical form must be byte-stable
    Bytes again = res.value().canonical_bytes();
    if (again.size() != b.size() || !std::equal(again.begin(), again.end(), b.begin()))
        return std::nullopt;
    return res.value();
}

bool eval_formula(const AccessFormula& f, const AttributeSet& w) {
    switch (f.kind) {
        case AccessFormula::Kind::Attribute:
            return w.contains(f.attribute);
        case AccessFormula::Kind::And:
            return eval_formula(f.children[0], w) && eval_formula(f.children[1], w);
        case AccessFormula::Kind::Or:
            return eval_formula(f.children[0], w) || eval_formula(f.children[1], w);
    }
    return false;
}

Bytes AccessStructure::to_bytes() const {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(rows.size()));
    w.u32(static_cast<std::uint32_t>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        w.raw(row_attrs[i].to_bytes());
        w.block(row_labels[i]);
        for (const auto& e : rows[i]) w.raw(e.to_bytes());
    }
    return w.take();
}

std::optional<AccessStructure> AccessStructure::from_bytes(std::span<const std::uint8_t> b) {
    ByteReader r(b);
    std::uint32_t nrows = r.u32();
    std::uint32_t ncols = r.u32();
    if (!r.ok() || nrows == 0 || ncols == 0 || nrows > 4096 || ncols > 4096) return std::nullopt;
    AccessStructure a;
    a.cols = ncols;
    for (std::uint32_t i = 0; i < nrows; ++i) {
        auto attr_raw = r.raw(32);
        if (!r.ok()) return std::nullopt;
        auto attr = Scalar::from_bytes(attr_raw);
        if (!attr) return std::nullopt;
        auto label = r.block();
        std::vector<Scalar> row;
        row.reserve(ncols);
        for (std::uint32_t j = 0; j < ncols; ++j) {
            auto raw = r.raw(32);
            if (!r.ok()) return std::nullopt;
            auto s = Scalar::from_bytes(raw);
            if (!s) return std::nullopt;
            row.push_back(*s);
        }
        a.rows.push_back(std::move(row));
        a.row_attrs.push_back(*attr);
        a.row_labels.emplace_back(label.begin(), label.end());
    }
    if (!r.finish()) return std::nullopt;
    return a;
}

namespace {

void assign_vectors(const AccessFormula& f, std::vector<Scalar> vec, std::size_t& counter,
                    AccessStructure& out) {
    switch (f.kind) {
        case AccessFormula::Kind::Attribute: {
            out.rows.push_back(std::move(vec));
            out.row_attrs.push_back(f.attribute);
            out.row_labels.push_back(f.label);
            return;
        }
        case AccessFormula::Kind::Or: {
            assign_vectors(f.children[0], vec, counter, out);
            assign_vectors(f.children[1], std::move(vec), counter, out);
            return;
        }
        case AccessFormula::Kind::And: {
            std::vector<Scalar> left = std::move(vec);
            left.resize(counter, Scalar::zero());
            left.push_back(Scalar::one());
            std::vector<Scalar> right(counter, Scalar::zero());
            right.push_back(-Scalar::one());
            ++counter;
            assign_vectors(f.children[0], std::move(left), counter, out);
            assign_vectors(f.children[1], std::move(right), counter, out);
            return;
        }
    }
}

}  // namespace

AccessStructure lsss_from_formula(const AccessFormula& f) {
    AccessStructure a;
    std::size_t counter = 1;
    assign_vectors(f, {Scalar::one()}, counter, a);
    a.cols = counter;
    for (auto& row : a.rows) row.resize(counter, Scalar::zero());
    return a;
}

std::optional<std::map<std::size_t, Scalar>> reconstruction_coefficients(
    const AccessStructure& a, const AttributeSet& w) {
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (w.contains(a.row_attrs[i])) usable.push_back(i);
    if (usable.empty()) return std::nullopt;

    // Solve sum_k x_k * M[usable_k] = e1: one equation per matrix column.
    const std::size_t m = a.cols;          // equations
    const std::size_t n = usable.size();   // unknowns
    std::vector<std::vector<Scalar>> aug(m, std::vector<Scalar>(n + 1, Scalar::zero()));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < m; ++j) aug[j][k] = a.rows[usable[k]][j];
    aug[0][n] = Scalar::one();  // e1

    std::vector<std::size_t> pivot_of_col(n, SIZE_MAX);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t pr = SIZE_MAX;
        for (std::size_t rr = rank; rr < m; ++rr)
            if (!aug[rr][col].is_zero()) {
                pr = rr;
                break;
            }
        if (pr == SIZE_MAX) continue;
        std::swap(aug[rank], aug[pr]);
        Scalar inv = aug[rank][col].inverse();
        for (std::size_t j = col; j <= n; ++j) aug[rank][j] *= inv;
        for (std::size_t rr = 0; rr < m; ++rr) {
            if (rr == rank || aug[rr][col].is_zero()) continue;
            Scalar factor = aug[rr][col];
            for (std::size_t j = col; j <= n; ++j) aug[rr][j] -= factor * aug[rank][j];
        }
        pivot_of_col[col] = rank;
        ++rank;
    }

    // Inconsistent system: a zero coefficient row with nonzero rhs.
    for (std::size_t rr = rank; rr < m; ++rr)
        if (!aug[rr][n].is_zero()) return std::nullopt;

    std::map<std::size_t, Scalar> coeffs;
    for (std::size_t col = 0; col < n; ++col) {
        Scalar v = Scalar::zero();
        if (pivot_of_col[col] != SIZE_MAX) v = aug[pivot_of_col[col]][n];  // free vars = 0
        if (!v.is_zero()) coeffs[usable[col]] = v;
    }
    // All-zero witness only happens for e1 = 0, which it is not.
    return coeffs;
}

std::optional<std::vector<Scalar>> vanishing_coefficients(const AttributeSet& w,
                                                          const Scalar& theta, std::size_t n) {
    if (w.size() + 2 > n) return std::nullopt;  // capacity (equality permitted)
    std::vector<Scalar> coeffs = {Scalar::one()};  // polynomial "1"
    auto mul_root = [&coeffs](const Scalar& root) {
        // multiply by (X - root)
        coeffs.push_back(Scalar::zero());
        for (std::size_t i = coeffs.size(); i-- > 1;)
            coeffs[i] = coeffs[i - 1] - root * coeffs[i];
        coeffs[0] = (-root) * coeffs[0];
    };
    for (const auto& a : w.values()) mul_root(a);
    mul_root(theta);
    coeffs.resize(n, Scalar::zero());
    return coeffs;
}

AccessFormula random_formula(Drbg& rng, std::span<const std::string> labels,
                             std::size_t max_gates) {
    // Start from a random leaf and keep attaching random gates.
    auto leaf = [&] {
        return AccessFormula::attr(labels[rng.uniform(labels.size())]);
    };
    AccessFormula f = leaf();
    std::size_t gates = max_gates == 0 ? 0 : rng.uniform(max_gates + 1);
    for (std::size_t i = 0; i < gates; ++i) {
        auto kind =
            rng.uniform(2) == 0 ? AccessFormula::Kind::And : AccessFormula::Kind::Or;
        if (rng.uniform(2) == 0)
            f = AccessFormula::gate(kind, leaf(), std::move(f));
        else
            f = AccessFormula::gate(kind, std::move(f), leaf());
    }
    return f;
}

std::optional<AttributeSet> random_satisfying_subset(Drbg& rng, const AccessFormula& f,
                                                     std::span<const std::string> labels) {
    if (labels.size() > 20) throw std::invalid_argument("universe too large for enumeration");
    std::vector<std::uint64_t> sat;
    for (std::uint64_t mask = 0; mask < (1ULL << labels.size()); ++mask) {
        std::vector<std::string> subset;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if ((mask >> i) & 1) subset.push_back(labels[i]);
        AttributeSet w = AttributeSet::from_labels(subset);
        if (eval_formula(f, w)) sat.push_back(mask);
    }
    if (sat.empty()) return std::nullopt;
    std::uint64_t mask = sat[rng.uniform(sat.size())];
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if ((mask >> i) & 1) subset.push_back(labels[i]);
    return AttributeSet::from_labels(subset);
}

}  // namespace pod::policy
