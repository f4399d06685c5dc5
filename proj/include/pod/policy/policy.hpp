#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pod/algebra/group.hpp"
#include "pod/result.hpp"

// Monotone access policies for the attribute-based signature scheme.
// A boolean formula over attribute labels (AND/OR, no negation) is compiled
// into a linear secret-sharing structure (M, rho): a matrix over Z_r whose
// rows are labelled with attributes. A set W of attributes satisfies the
// policy iff the unit vector e1 lies in the span of the rows labelled by W;
// the witness coefficients are exactly what the signer needs.

namespace pod::policy {

using algebra::Drbg;
using algebra::Scalar;

struct AccessFormula {
    enum class Kind { Attribute, And, Or };

    Kind kind = Kind::Attribute;
    std::string label;      // attribute label (Kind::Attribute)
    Scalar attribute;       // hash_to_attribute(label)
    std::vector<AccessFormula> children;  // two entries for gates

    static AccessFormula attr(std::string_view label);
    static AccessFormula attr_scalar(const Scalar& value, std::string label = "");
    static AccessFormula gate(Kind k, AccessFormula lhs, AccessFormula rhs);
};

std::string formula_to_string(const AccessFormula& f);

// Grammar: expr := term ("OR" term)*, term := factor ("AND" factor)*,
// factor := label | "(" expr ")". Labels match [A-Za-z0-9_.:/-]+ and the
// keywords are case-sensitive.
Result<AccessFormula, std::string> parse_formula(std::string_view text);

// Canonical attribute set: sorted ascending, distinct, no zero, no theta.
class AttributeSet {
public:
    AttributeSet() = default;

    // Validates the invariant; rejects zero and the reserved default value.
    static Result<AttributeSet, std::string> from_scalars(std::vector<Scalar> values);
    // hash_to_attribute can only produce valid values, so this cannot fail.
    static AttributeSet from_labels(std::span<const std::string> labels);

    const std::vector<Scalar>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    bool contains(const Scalar& a) const;
    bool operator==(const AttributeSet& o) const { return values_ == o.values_; }
    bool operator!=(const AttributeSet& o) const { return !(values_ == o.values_); }

    // u32 count followed by 32-byte scalars, ascending (hash/ledger input).
    Bytes canonical_bytes() const;
    static std::optional<AttributeSet> from_canonical_bytes(std::span<const std::uint8_t> b);

private:
    std::vector<Scalar> values_;  // sorted ascending
};

// Semantic evaluation of the formula against an attribute set.
bool eval_formula(const AccessFormula& f, const AttributeSet& w);

struct AccessStructure {
    std::vector<std::vector<Scalar>> rows;  // each of length cols
    std::vector<Scalar> row_attrs;          // rho(i), parallel to rows
    std::vector<std::string> row_labels;    // display only
    std::size_t cols = 0;

    std::size_t row_count() const { return rows.size(); }

    Bytes to_bytes() const;
    static std::optional<AccessStructure> from_bytes(std::span<const std::uint8_t> b);
};

// Monotone-formula-to-LSSS compilation. The root starts with vector (1); an
// AND gate extends one child with ...||1 and gives the other (0,...,0)||-1,
// growing the width by one; an OR gate copies its vector to both children.
// Leaves become matrix rows, zero-padded to the final width.
// "A AND B" compiles to rows (1,1) and (0,-1).
AccessStructure lsss_from_formula(const AccessFormula& f);

// Coefficients w_i with sum_i w_i * M_i = (1,0,...,0), supported on rows
// whose attribute lies in w. Empty optional iff w does not satisfy the
// policy. Keys are row indices.
std::optional<std::map<std::size_t, Scalar>> reconstruction_coefficients(
    const AccessStructure& a, const AttributeSet& w);

inline bool satisfies(const AccessStructure& a, const AttributeSet& w) {
    return reconstruction_coefficients(a, w).has_value();
}

// Coefficients c_1..c_n (returned as index x-1 <-> c_x) of
// P(X) = prod_{w in W union {theta}} (X - w) = sum_x c_x X^{x-1},
// zero-padded to n. Empty optional iff |W| + 2 > n (capacity; equality OK).
std::optional<std::vector<Scalar>> vanishing_coefficients(const AttributeSet& w,
                                                          const Scalar& theta, std::size_t n);

// Random monotone formula over the given labels (simulation/benchmark use).
AccessFormula random_formula(Drbg& rng, std::span<const std::string> labels,
                             std::size_t max_gates);

// A uniformly chosen attribute subset that satisfies the formula, if one
// exists among the 2^k subsets of `labels` (k kept small by callers).
std::optional<AttributeSet> random_satisfying_subset(Drbg& rng, const AccessFormula& f,
                                                     std::span<const std::string> labels);

}  // namespace pod::policy
