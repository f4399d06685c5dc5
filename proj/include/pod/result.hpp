#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace pod {

// Minimal expected-like result for operations with typed, branchable failure
// modes (signing under an unsatisfied policy, key extraction, ledger
// rejections, ...). Precondition violations that indicate caller bugs throw
// std::invalid_argument instead.
template <class T, class E>
class Result {
public:
    Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}
    Result(E error) : v_(std::in_place_index<1>, std::move(error)) {}

    static Result ok(T value) { return Result(std::move(value)); }
    static Result err(E error) { return Result(std::move(error)); }

    bool has_value() const { return v_.index() == 0; }
    explicit operator bool() const { return has_value(); }

    T& value() {
        assert(has_value());
        return std::get<0>(v_);
    }
    const T& value() const {
        assert(has_value());
        return std::get<0>(v_);
    }

    const E& error() const {
        assert(!has_value());
        return std::get<1>(v_);
    }

    T value_or(T fallback) const { return has_value() ? std::get<0>(v_) : std::move(fallback); }

private:
    std::variant<T, E> v_;
};

}  // namespace pod
