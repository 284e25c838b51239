#include "pinv/eval.hpp"

#include <algorithm>
#include <sstream>

#include "pinv/errors.hpp"

namespace pinv {

std::string Value::str() const
{
    switch (kind) {
    case Kind::Num: return num == kEmptyMin ? std::string("+inf") : std::to_string(num);
    case Kind::Bool: return flag ? "true" : "false";
    case Kind::Set: {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (auto v : elems) {
            if (!first) os << ",";
            os << v;
            first = false;
        }
        os << "}";
        return os.str();
    }
    }
    return "?";
}

std::string varKey(const VarRef& v)
{
    std::string s = v.name;
    if (v.primed) s += "'";
    if (v.kind == VarKind::LocalConcrete) s += "[" + std::to_string(v.thread) + "]";
    if (v.kind == VarKind::LocalIndexed) s += "(" + v.tidVar + ")";
    return s;
}

namespace {

std::int64_t num(const Value& v)
{
    if (v.kind != Value::Kind::Num) throw SortError("expected a number, got " + v.str());
    return v.num;
}

const std::set<std::int64_t>& elems(const Value& v)
{
    if (v.kind != Value::Kind::Set) throw SortError("expected a set, got " + v.str());
    return v.elems;
}

bool flag(const Value& v)
{
    if (v.kind != Value::Kind::Bool) throw SortError("expected a boolean, got " + v.str());
    return v.flag;
}

} // namespace

Value evaluate(const Expr& e, const Lookup& lookup)
{
    switch (e->op) {
    case Op::BoolLit: return Value::boolean(e->value != 0);
    case Op::IntLit:
    case Op::LocLit:
    case Op::TidConst: return Value::number(e->value);
    case Op::TidVar: throw Error("cannot evaluate free tid variable '" + e->name + "'");
    case Op::Var:
        if (e->var.kind == VarKind::LocalIndexed)
            throw Error("cannot evaluate parametrized read '" + varKey(e->var) + "'");
        return lookup(e->var);
    case Op::Add: return Value::number(num(evaluate(e->args[0], lookup)) + num(evaluate(e->args[1], lookup)));
    case Op::Sub: return Value::number(num(evaluate(e->args[0], lookup)) - num(evaluate(e->args[1], lookup)));
    case Op::EmptySet: return Value::set({});
    case Op::Singleton: return Value::set({num(evaluate(e->args[0], lookup))});
    case Op::Union: {
        auto a = elems(evaluate(e->args[0], lookup));
        const auto b = evaluate(e->args[1], lookup);
        a.insert(elems(b).begin(), elems(b).end());
        return Value::set(std::move(a));
    }
    case Op::SetDiff: {
        auto a = elems(evaluate(e->args[0], lookup));
        const auto b = evaluate(e->args[1], lookup);
        for (auto v : elems(b)) a.erase(v);
        return Value::set(std::move(a));
    }
    case Op::SetMin: {
        const auto s = evaluate(e->args[0], lookup);
        return Value::number(elems(s).empty() ? kEmptyMin : *elems(s).begin());
    }
    case Op::Not: return Value::boolean(!flag(evaluate(e->args[0], lookup)));
    case Op::And:
        for (const auto& a : e->args)
            if (!flag(evaluate(a, lookup))) return Value::boolean(false);
        return Value::boolean(true);
    case Op::Or:
        for (const auto& a : e->args)
            if (flag(evaluate(a, lookup))) return Value::boolean(true);
        return Value::boolean(false);
    case Op::Implies:
        return Value::boolean(!flag(evaluate(e->args[0], lookup)) || flag(evaluate(e->args[1], lookup)));
    case Op::Eq: return Value::boolean(evaluate(e->args[0], lookup) == evaluate(e->args[1], lookup));
    case Op::Ne: return Value::boolean(!(evaluate(e->args[0], lookup) == evaluate(e->args[1], lookup)));
    case Op::Lt: return Value::boolean(num(evaluate(e->args[0], lookup)) < num(evaluate(e->args[1], lookup)));
    case Op::Le: return Value::boolean(num(evaluate(e->args[0], lookup)) <= num(evaluate(e->args[1], lookup)));
    case Op::Member: return Value::boolean(elems(evaluate(e->args[1], lookup)).contains(num(evaluate(e->args[0], lookup))));
    case Op::ArrayUpdate:
    case Op::ArrayFrame: throw Error("cannot evaluate array-form relation; concretize first");
    }
    throw Error("unhandled operator");
}

bool holds(const Formula& f, const Lookup& lookup) { return flag(evaluate(f, lookup)); }

} // namespace pinv
