#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include "pinv/ir.hpp"

namespace pinv {

/// Minimum of the empty set. It compares above every program value.
inline constexpr std::int64_t kEmptyMin = std::numeric_limits<std::int64_t>::max() / 4;

/// Runtime value of any sort: integers, locations and tids share `num`.
struct Value {
    enum class Kind { Num, Bool, Set };
    Kind kind = Kind::Num;
    std::int64_t num = 0;
    bool flag = false;
    std::set<std::int64_t> elems;

    static Value number(std::int64_t v) { return Value{Kind::Num, v, false, {}}; }
    static Value boolean(bool b) { return Value{Kind::Bool, 0, b, {}}; }
    static Value set(std::set<std::int64_t> s) { return Value{Kind::Set, 0, false, std::move(s)}; }

    bool operator==(const Value&) const = default;
    std::string str() const;
};

/// Resolves concrete program variables to values; throws when unknown.
using Lookup = std::function<Value(const VarRef&)>;

/// Evaluates a closed expression (no tid variables, no array updates).
Value evaluate(const Expr& e, const Lookup& lookup);
bool holds(const Formula& f, const Lookup& lookup);

/// Concrete variable key as used in countermodels: `avail`, `pc[1]`, `ticket'[0]`.
std::string varKey(const VarRef& v);

} // namespace pinv
