#include <algorithm>
#include <cctype>
#include <functional>
#include <memory>
#include <set>
#include <sstream>

#include "pinv/errors.hpp"
#include "pinv/solve.hpp"

namespace pinv {

std::string smtSymbol(const VarRef& v)
{
    std::string s = v.name;
    if (v.kind == VarKind::LocalConcrete) s += "!" + std::to_string(v.thread);
    if (v.kind == VarKind::LocalIndexed) throw UnsupportedTheory("parametrized read '" + varKey(v) + "' in a concrete VC");
    if (v.primed) s += "!p";
    return s;
}

namespace {

constexpr std::string_view kSetSort = "(Array Int Bool)";
constexpr std::string_view kEmpty = "((as const (Array Int Bool)) false)";

std::string smtSort(Sort s)
{
    switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::SetInt: return std::string(kSetSort);
    default: return "Int";
    }
}

std::string intLiteral(std::int64_t v) { return v < 0 ? "(- " + std::to_string(-v) + ")" : std::to_string(v); }

class Emitter {
public:
    explicit Emitter(SmtScript& out) : out_(out) {}

    std::string term(const Expr& e)
    {
        switch (e->op) {
        case Op::BoolLit: return e->value ? "true" : "false";
        case Op::IntLit:
        case Op::LocLit:
        case Op::TidConst: return note(e, intLiteral(e->value));
        case Op::TidVar: throw UnsupportedTheory("free tid variable '" + e->name + "' in a concrete VC");
        case Op::Var: {
            const std::string s = smtSymbol(e->var);
            out_.symbols.emplace(s, e->var);
            return note(e, s);
        }
        case Op::Add: return note(e, "(+ " + term(e->args[0]) + " " + term(e->args[1]) + ")");
        case Op::Sub: return note(e, "(- " + term(e->args[0]) + " " + term(e->args[1]) + ")");
        case Op::EmptySet: return std::string(kEmpty);
        case Op::Singleton: return "(store " + std::string(kEmpty) + " " + term(e->args[0]) + " true)";
        case Op::Union: return "((_ map or) " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::SetDiff: return "((_ map and) " + term(e->args[0]) + " ((_ map not) " + term(e->args[1]) + "))";
        case Op::SetMin: {
            const std::string set = term(e->args[0]);
            auto it = std::find_if(mins_.begin(), mins_.end(), [&](const auto& m) { return m.second == set; });
            if (it == mins_.end()) {
                mins_.emplace_back("min!" + std::to_string(mins_.size()), set);
                it = std::prev(mins_.end());
            }
            return it->first;
        }
        case Op::Not: return "(not " + term(e->args[0]) + ")";
        case Op::And: return nary("and", e);
        case Op::Or: return nary("or", e);
        case Op::Implies: return "(=> " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Eq: return "(= " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Ne: return "(not (= " + term(e->args[0]) + " " + term(e->args[1]) + "))";
        case Op::Lt: return "(< " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Le: return "(<= " + term(e->args[0]) + " " + term(e->args[1]) + ")";
        case Op::Member: return "(select " + term(e->args[1]) + " " + term(e->args[0]) + ")";
        case Op::ArrayUpdate:
        case Op::ArrayFrame: throw UnsupportedTheory("array-form relation in a concrete VC");
        }
        throw UnsupportedTheory("unhandled operator");
    }

    /// (min constant, set term) in order of first occurrence.
    const std::vector<std::pair<std::string, std::string>>& mins() const { return mins_; }
    const std::vector<std::string>& intTerms() const { return intTerms_; }

private:
    std::string note(const Expr& e, std::string s)
    {
        if (e->sort == Sort::Int && seenInt_.insert(s).second) intTerms_.push_back(s);
        return s;
    }

    std::string nary(const char* op, const Expr& e)
    {
        std::string s = std::string("(") + op;
        for (const auto& a : e->args) s += " " + term(a);
        return s + ")";
    }

    SmtScript& out_;
    std::vector<std::pair<std::string, std::string>> mins_;
    std::vector<std::string> intTerms_;
    std::set<std::string> seenInt_;
};

} // namespace

SmtScript emitSmt(const Formula& hypothesis, const Formula& conclusion, const SmtOptions& opts)
{
    SmtScript out;
    Emitter em(out);
    const std::string hyp = em.term(hypothesis);
    const std::string concl = em.term(conclusion);

    std::ostringstream os;
    os << "(set-option :produce-models true)\n(set-logic ALL)\n";
    for (const auto& [sym, v] : out.symbols) os << "(declare-fun " << sym << " () " << smtSort(v.sort) << ")\n";
    for (const auto& [m, set] : em.mins()) os << "(declare-fun " << m << " () Int)\n";
    for (const auto& [sym, v] : out.symbols) {
        if (v.isPc()) os << "(assert (and (<= 1 " << sym << ") (<= " << sym << " " << opts.maxLocation << ")))\n";
    }
    os << "(assert " << hyp << ")\n";
    os << "(assert (not " << concl << "))\n";

    // min(S) for empty S lies above every integer term of the VC.
    const auto& mins = em.mins();
    for (const auto& [m, set] : mins) {
        const std::string empty = "(= " + set + " " + std::string(kEmpty) + ")";
        os << "(assert (=> (not " << empty << ") (select " << set << " " << m << ")))\n";
        for (const auto& t : em.intTerms()) {
            os << "(assert (=> (select " << set << " " << t << ") (<= " << m << " " << t << ")))\n";
            os << "(assert (=> " << empty << " (< " << t << " " << m << ")))\n";
        }
        for (const auto& [m2, set2] : mins) {
            if (m2 == m) continue;
            os << "(assert (=> (select " << set << " " << m2 << ") (<= " << m << " " << m2 << ")))\n";
            const std::string empty2 = "(= " + set2 + " " + std::string(kEmpty) + ")";
            os << "(assert (=> (and " << empty << " " << empty2 << ") (= " << m << " " << m2 << ")))\n";
            os << "(assert (=> (and " << empty << " (not " << empty2 << ")) (< " << m2 << " " << m << ")))\n";
        }
        if (opts.quantifiedMin)
            os << "(assert (forall ((x Int)) (=> (select " << set << " x) (<= " << m << " x))))\n";
    }
    os << "(check-sat)\n(get-model)\n";
    out.text = os.str();
    return out;
}

// ---- model parsing ------------------------------------------------------------

namespace {

struct SExpr {
    std::string atom;
    std::vector<SExpr> list;
    bool isAtom = true;
};

class SParser {
public:
    explicit SParser(std::string_view t) : t_(t) {}

    bool done()
    {
        skip();
        return i_ >= t_.size();
    }

    SExpr parse()
    {
        skip();
        if (i_ >= t_.size()) throw ProtocolError("unexpected end of solver output");
        if (t_[i_] == '(') {
            ++i_;
            SExpr e;
            e.isAtom = false;
            while (true) {
                skip();
                if (i_ >= t_.size()) throw ProtocolError("unbalanced parentheses in solver output");
                if (t_[i_] == ')') {
                    ++i_;
                    return e;
                }
                e.list.push_back(parse());
            }
        }
        if (t_[i_] == ')') throw ProtocolError("unexpected ')' in solver output");
        SExpr e;
        if (t_[i_] == '|') {
            const auto j = t_.find('|', i_ + 1);
            if (j == std::string_view::npos) throw ProtocolError("unterminated quoted symbol");
            e.atom = std::string(t_.substr(i_ + 1, j - i_ - 1));
            i_ = j + 1;
            return e;
        }
        if (t_[i_] == '"') {
            auto j = i_ + 1;
            while (j < t_.size() && !(t_[j] == '"' && (j + 1 >= t_.size() || t_[j + 1] != '"'))) j += t_[j] == '"' ? 2 : 1;
            e.atom = std::string(t_.substr(i_, j + 1 - i_));
            i_ = j + 1;
            return e;
        }
        const auto start = i_;
        while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' && t_[i_] != ')') ++i_;
        e.atom = std::string(t_.substr(start, i_ - start));
        return e;
    }

private:
    void skip()
    {
        while (i_ < t_.size()) {
            if (std::isspace(static_cast<unsigned char>(t_[i_]))) {
                ++i_;
            } else if (t_[i_] == ';') {
                while (i_ < t_.size() && t_[i_] != '\n') ++i_;
            } else {
                break;
            }
        }
    }

    std::string_view t_;
    std::size_t i_ = 0;
};

struct MVal;
using MValPtr = std::shared_ptr<const MVal>;

struct Closure {
    std::vector<std::string> params;
    const SExpr* body = nullptr;
    std::map<std::string, MValPtr> env;
};

struct MVal {
    enum class Kind { Int, Bool, Array, Func } kind = Kind::Int;
    std::int64_t i = 0;
    bool b = false;
    // Array: default plus explicit entries.
    bool dflt = false;
    std::map<std::int64_t, bool> entries;
    Closure fn;
};

MValPtr mkInt(std::int64_t v)
{
    auto m = std::make_shared<MVal>();
    m->kind = MVal::Kind::Int;
    m->i = v;
    return m;
}

MValPtr mkBool(bool v)
{
    auto m = std::make_shared<MVal>();
    m->kind = MVal::Kind::Bool;
    m->b = v;
    return m;
}

class ModelEvaluator {
public:
    ModelEvaluator(std::map<std::string, const SExpr*> defs, std::map<std::string, std::vector<std::string>> params,
                   std::vector<std::int64_t> candidates)
        : defs_(std::move(defs)), params_(std::move(params)), candidates_(std::move(candidates))
    {
    }

    MValPtr constant(const std::string& name)
    {
        if (auto it = cache_.find(name); it != cache_.end()) return it->second;
        auto it = defs_.find(name);
        if (it == defs_.end()) throw ProtocolError("model has no value for '" + name + "'");
        MValPtr v;
        if (!params_[name].empty()) {
            auto m = std::make_shared<MVal>();
            m->kind = MVal::Kind::Func;
            m->fn.params = params_[name];
            m->fn.body = it->second;
            v = m;
        } else {
            v = eval(*it->second, {});
        }
        cache_[name] = v;
        return v;
    }

    std::int64_t asInt(const MValPtr& v) const
    {
        if (v->kind != MVal::Kind::Int) throw ProtocolError("expected an integer in model");
        return v->i;
    }

    bool asBool(const MValPtr& v) const
    {
        if (v->kind != MVal::Kind::Bool) throw ProtocolError("expected a boolean in model");
        return v->b;
    }

    bool select(const MValPtr& arr, std::int64_t x)
    {
        if (arr->kind == MVal::Kind::Array) {
            auto it = arr->entries.find(x);
            return it == arr->entries.end() ? arr->dflt : it->second;
        }
        if (arr->kind == MVal::Kind::Func) {
            auto env = arr->fn.env;
            if (arr->fn.params.size() != 1) throw ProtocolError("array function of wrong arity");
            env[arr->fn.params[0]] = mkInt(x);
            return asBool(eval(*arr->fn.body, env));
        }
        throw ProtocolError("select on a non-array model value");
    }

    /// Finite reading of a set; `cofinite` is set when it contains every
    /// large integer.
    std::set<std::int64_t> members(const MValPtr& arr, bool& cofinite)
    {
        std::set<std::int64_t> out;
        std::set<std::int64_t> probe(candidates_.begin(), candidates_.end());
        if (arr->kind == MVal::Kind::Array)
            for (const auto& [k, v] : arr->entries) probe.insert(k);
        for (auto x : probe)
            if (select(arr, x)) out.insert(x);
        const std::int64_t far = 1'000'000'007;
        if (select(arr, far) || select(arr, -far)) cofinite = true;
        return out;
    }

    MValPtr eval(const SExpr& e, const std::map<std::string, MValPtr>& env)
    {
        if (e.isAtom) {
            const auto& a = e.atom;
            if (a == "true") return mkBool(true);
            if (a == "false") return mkBool(false);
            if (!a.empty() && std::isdigit(static_cast<unsigned char>(a[0]))) {
                try {
                    return mkInt(std::stoll(a));
                } catch (const std::exception&) {
                    throw ProtocolError("integer '" + a + "' out of range");
                }
            }
            if (auto it = env.find(a); it != env.end()) return it->second;
            return constant(a);
        }
        if (e.list.empty()) throw ProtocolError("empty application in model");
        const SExpr& head = e.list[0];
        if (!head.isAtom) {
            // ((as const T) v) and ((_ map f) a b)
            if (head.list.size() == 3 && head.list[0].isAtom && head.list[0].atom == "as" && head.list[1].isAtom &&
                head.list[1].atom == "const") {
                auto m = std::make_shared<MVal>();
                m->kind = MVal::Kind::Array;
                m->dflt = asBool(eval(e.list.at(1), env));
                return m;
            }
            if (head.list.size() == 3 && head.list[0].isAtom && head.list[0].atom == "_" && head.list[1].isAtom &&
                head.list[1].atom == "map") {
                return mapArrays(head.list[2].isAtom ? head.list[2].atom : "", e, env);
            }
            throw ProtocolError("unsupported model construct");
        }
        const std::string& op = head.atom;
        auto arg = [&](std::size_t i) { return eval(e.list.at(i), env); };
        if (op == "-") {
            if (e.list.size() == 2) return mkInt(-asInt(arg(1)));
            std::int64_t v = asInt(arg(1));
            for (std::size_t i = 2; i < e.list.size(); ++i) v -= asInt(arg(i));
            return mkInt(v);
        }
        if (op == "+" || op == "*") {
            std::int64_t v = op == "+" ? 0 : 1;
            for (std::size_t i = 1; i < e.list.size(); ++i) v = op == "+" ? v + asInt(arg(i)) : v * asInt(arg(i));
            return mkInt(v);
        }
        if (op == "ite") return asBool(arg(1)) ? arg(2) : arg(3);
        if (op == "not") return mkBool(!asBool(arg(1)));
        if (op == "and" || op == "or") {
            const bool isAnd = op == "and";
            for (std::size_t i = 1; i < e.list.size(); ++i)
                if (asBool(arg(i)) != isAnd) return mkBool(!isAnd);
            return mkBool(isAnd);
        }
        if (op == "=>") return mkBool(!asBool(arg(1)) || asBool(arg(2)));
        if (op == "=") {
            auto a = arg(1), b = arg(2);
            if (a->kind == MVal::Kind::Bool) return mkBool(a->b == asBool(b));
            if (a->kind == MVal::Kind::Int) return mkBool(a->i == asInt(b));
            throw ProtocolError("array equality in model");
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            const auto a = asInt(arg(1)), b = asInt(arg(2));
            if (op == "<") return mkBool(a < b);
            if (op == "<=") return mkBool(a <= b);
            if (op == ">") return mkBool(a > b);
            return mkBool(a >= b);
        }
        if (op == "store") {
            auto base = arg(1);
            auto m = std::make_shared<MVal>();
            m->kind = MVal::Kind::Array;
            if (base->kind == MVal::Kind::Array) {
                *m = *base;
            } else {
                // Materialize a functional array over the probe points.
                m->dflt = select(base, 1'000'000'007);
                for (auto x : candidates_) m->entries[x] = select(base, x);
            }
            m->entries[asInt(arg(2))] = asBool(arg(3));
            return m;
        }
        if (op == "select") return mkBool(select(arg(1), asInt(arg(2))));
        if (op == "lambda") {
            auto m = std::make_shared<MVal>();
            m->kind = MVal::Kind::Func;
            for (const auto& p : e.list.at(1).list) m->fn.params.push_back(p.list.at(0).atom);
            m->fn.body = &e.list.at(2);
            m->fn.env = env;
            return m;
        }
        if (op == "let") {
            auto inner = env;
            for (const auto& b : e.list.at(1).list) inner[b.list.at(0).atom] = eval(b.list.at(1), env);
            return eval(e.list.at(2), inner);
        }
        if (op == "_" && e.list.size() == 3 && e.list[1].isAtom && e.list[1].atom == "as-array") {
            return constant(e.list[2].atom);
        }
        if (op == "as" && e.list.size() == 3) return arg(1);
        // Application of a model-defined function.
        auto fnIt = defs_.find(op);
        if (fnIt != defs_.end() && !params_[op].empty()) {
            std::map<std::string, MValPtr> inner;
            const auto& ps = params_[op];
            for (std::size_t i = 0; i < ps.size(); ++i) inner[ps[i]] = arg(i + 1);
            return eval(*fnIt->second, inner);
        }
        throw ProtocolError("unsupported model operator '" + op + "'");
    }

private:
    MValPtr mapArrays(const std::string& fn, const SExpr& e, const std::map<std::string, MValPtr>& env)
    {
        std::vector<MValPtr> args;
        for (std::size_t i = 1; i < e.list.size(); ++i) args.push_back(eval(e.list[i], env));
        auto apply = [&](const std::vector<bool>& xs) {
            if (fn == "not") return !xs.at(0);
            if (fn == "and") return std::all_of(xs.begin(), xs.end(), [](bool b) { return b; });
            if (fn == "or") return std::any_of(xs.begin(), xs.end(), [](bool b) { return b; });
            throw ProtocolError("unsupported mapped function '" + fn + "'");
        };
        std::set<std::int64_t> keys(candidates_.begin(), candidates_.end());
        std::vector<bool> dflts;
        for (const auto& a : args) {
            if (a->kind == MVal::Kind::Array) {
                for (const auto& [k, v] : a->entries) keys.insert(k);
                dflts.push_back(a->dflt);
            } else {
                dflts.push_back(select(a, 1'000'000'007));
            }
        }
        auto m = std::make_shared<MVal>();
        m->kind = MVal::Kind::Array;
        m->dflt = apply(dflts);
        for (auto k : keys) {
            std::vector<bool> xs;
            for (const auto& a : args) xs.push_back(select(a, k));
            m->entries[k] = apply(xs);
        }
        return m;
    }

    std::map<std::string, const SExpr*> defs_;
    std::map<std::string, std::vector<std::string>> params_;
    std::vector<std::int64_t> candidates_;
    std::map<std::string, MValPtr> cache_;
};

void collectInts(const SExpr& e, std::vector<std::int64_t>& out)
{
    if (e.isAtom) {
        if (!e.atom.empty() && std::all_of(e.atom.begin(), e.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
            try {
                const auto v = std::stoll(e.atom);
                out.push_back(v);
                out.push_back(-v);
            } catch (const std::exception&) {
            }
        }
        return;
    }
    for (const auto& c : e.list) collectInts(c, out);
}

Value defaultValue(Sort s)
{
    switch (s) {
    case Sort::Bool: return Value::boolean(false);
    case Sort::SetInt: return Value::set({});
    default: return Value::number(0);
    }
}

} // namespace

CounterModel parseModel(std::string_view text, const std::map<std::string, VarRef>& symbols,
                        const std::vector<std::int64_t>& candidates)
{
    SParser ps(text);
    if (ps.done()) throw ProtocolError("empty model");
    const SExpr root = ps.parse();
    if (root.isAtom) throw ProtocolError("model is not a list");
    std::map<std::string, const SExpr*> defs;
    std::map<std::string, std::vector<std::string>> params;
    for (const auto& d : root.list) {
        if (d.isAtom) {
            if (d.atom == "model") continue;
            throw ProtocolError("unexpected atom '" + d.atom + "' in model");
        }
        if (d.list.size() < 5 || !d.list[0].isAtom || d.list[0].atom != "define-fun") {
            if (!d.list.empty() && d.list[0].isAtom && d.list[0].atom == "error")
                throw ProtocolError("solver error while printing model");
            continue;
        }
        const std::string name = d.list[1].atom;
        defs[name] = &d.list[4];
        for (const auto& p : d.list[2].list) params[name].push_back(p.list.at(0).atom);
    }
    std::vector<std::int64_t> cands = candidates;
    collectInts(root, cands);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    ModelEvaluator ev(defs, params, cands);
    CounterModel cm;
    for (const auto& [sym, var] : symbols) {
        const std::string key = varKey(var);
        if (!defs.contains(sym)) {
            cm.assignments[key] = defaultValue(var.sort);
            continue;
        }
        const MValPtr v = ev.constant(sym);
        switch (var.sort) {
        case Sort::Bool: cm.assignments[key] = Value::boolean(ev.asBool(v)); break;
        case Sort::SetInt: {
            bool cofinite = false;
            auto elems = ev.members(v, cofinite);
            cm.approximate = cm.approximate || cofinite;
            cm.assignments[key] = Value::set(std::move(elems));
            break;
        }
        default: cm.assignments[key] = Value::number(ev.asInt(v)); break;
        }
    }
    return cm;
}

bool modelFalsifies(const CounterModel& m, const Formula& hypothesis, const Formula& conclusion)
{
    const Lookup lookup = [&](const VarRef& v) {
        auto it = m.assignments.find(varKey(v));
        return it == m.assignments.end() ? defaultValue(v.sort) : it->second;
    };
    try {
        return holds(hypothesis, lookup) && !holds(conclusion, lookup);
    } catch (const Error&) {
        return false;
    }
}

} // namespace pinv
