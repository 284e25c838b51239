#include <chrono>
#include <map>

#include "pinv/solve.hpp"

namespace pinv {

namespace {

enum class Tri { False, True, Unknown };

Tri triNot(Tri t) { return t == Tri::True ? Tri::False : t == Tri::False ? Tri::True : Tri::Unknown; }

/// Program-counter values and literals; everything else makes an atom opaque.
bool interpretable(const Expr& e)
{
    switch (e->op) {
    case Op::LocLit:
    case Op::TidConst:
    case Op::IntLit:
    case Op::BoolLit: return true;
    case Op::Var: return e->var.isPc() && e->var.kind == VarKind::LocalConcrete;
    default: return false;
    }
}

class PositionSearch {
public:
    PositionSearch(const Formula& f, int maxLocation, std::size_t budget)
        : f_(f), maxLoc_(maxLocation), budget_(budget)
    {
        collect(f_);
    }

    /// True when no falsifying assignment exists.
    std::optional<bool> valid()
    {
        pcVal_.assign(pcs_.size(), 0);
        atomVal_.assign(atoms_.size(), Tri::Unknown);
        const auto r = search(0);
        if (exhausted_) return std::nullopt;
        return r;
    }

private:
    void collect(const Expr& e)
    {
        if (isAtomicFormula(e) && e->op != Op::BoolLit) {
            atomInfo(e);
            return;
        }
        for (const auto& a : e->args) collect(a);
    }

    struct AtomRef {
        bool interpreted = false;
        std::size_t opaque = 0;
        bool negated = false;
    };

    const AtomRef& atomInfo(const Expr& e)
    {
        auto it = atomCache_.find(e.get());
        if (it != atomCache_.end()) return it->second;
        AtomRef ref;
        const bool cmp = e->op == Op::Eq || e->op == Op::Ne || e->op == Op::Lt || e->op == Op::Le;
        if (cmp && interpretable(e->args[0]) && interpretable(e->args[1])) {
            ref.interpreted = true;
            for (const auto& a : e->args)
                if (a->op == Op::Var) pcIndex(a->var);
        } else {
            std::string key;
            if (e->op == Op::Eq || e->op == Op::Ne) {
                std::string l = toString(e->args[0]), r = toString(e->args[1]);
                if (r < l) std::swap(l, r);
                key = "=" + l + "|" + r;
                ref.negated = e->op == Op::Ne;
            } else {
                key = toString(e);
            }
            auto [pos, fresh] = atomIds_.try_emplace(key, atoms_.size());
            if (fresh) atoms_.push_back(key);
            ref.opaque = pos->second;
        }
        return atomCache_.emplace(e.get(), ref).first->second;
    }

    std::size_t pcIndex(const VarRef& v)
    {
        auto [pos, fresh] = pcIds_.try_emplace(v, pcs_.size());
        if (fresh) pcs_.push_back(v);
        return pos->second;
    }

    std::optional<std::int64_t> value(const Expr& e) const
    {
        if (e->op != Op::Var) return e->value;
        const int v = pcVal_[pcIds_.at(e->var)];
        if (v == 0) return std::nullopt;
        return v;
    }

    Tri eval(const Expr& e) const
    {
        switch (e->op) {
        case Op::BoolLit: return e->value ? Tri::True : Tri::False;
        case Op::Not: return triNot(eval(e->args[0]));
        case Op::And: {
            Tri r = Tri::True;
            for (const auto& a : e->args) {
                const Tri t = eval(a);
                if (t == Tri::False) return Tri::False;
                if (t == Tri::Unknown) r = Tri::Unknown;
            }
            return r;
        }
        case Op::Or: {
            Tri r = Tri::False;
            for (const auto& a : e->args) {
                const Tri t = eval(a);
                if (t == Tri::True) return Tri::True;
                if (t == Tri::Unknown) r = Tri::Unknown;
            }
            return r;
        }
        case Op::Implies: {
            const Tri a = eval(e->args[0]);
            if (a == Tri::False) return Tri::True;
            const Tri b = eval(e->args[1]);
            if (b == Tri::True) return Tri::True;
            if (a == Tri::True) return b;
            return Tri::Unknown;
        }
        default: break;
        }
        const AtomRef& ref = atomCache_.at(e.get());
        if (!ref.interpreted) {
            const Tri t = atomVal_[ref.opaque];
            return ref.negated ? triNot(t) : t;
        }
        const auto l = value(e->args[0]);
        const auto r = value(e->args[1]);
        if (!l || !r) return Tri::Unknown;
        bool b = false;
        switch (e->op) {
        case Op::Eq: b = *l == *r; break;
        case Op::Ne: b = *l != *r; break;
        case Op::Lt: b = *l < *r; break;
        case Op::Le: b = *l <= *r; break;
        default: break;
        }
        return b ? Tri::True : Tri::False;
    }

    bool search(std::size_t depth)
    {
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return false;
        }
        const Tri t = eval(f_);
        if (t == Tri::True) return true;
        if (t == Tri::False) return false;
        if (depth < pcs_.size()) {
            for (int l = 1; l <= maxLoc_; ++l) {
                pcVal_[depth] = l;
                if (!search(depth + 1)) {
                    pcVal_[depth] = 0;
                    return false;
                }
            }
            pcVal_[depth] = 0;
            return true;
        }
        const std::size_t a = depth - pcs_.size();
        if (a >= atoms_.size()) return false;  // fully assigned yet undetermined: cannot happen
        for (Tri v : {Tri::False, Tri::True}) {
            atomVal_[a] = v;
            if (!search(depth + 1)) {
                atomVal_[a] = Tri::Unknown;
                return false;
            }
        }
        atomVal_[a] = Tri::Unknown;
        return true;
    }

    Formula f_;
    int maxLoc_;
    std::size_t budget_;
    std::size_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<VarRef> pcs_;
    std::map<VarRef, std::size_t> pcIds_;
    std::vector<std::string> atoms_;
    std::map<std::string, std::size_t> atomIds_;
    std::map<const Node*, AtomRef> atomCache_;
    std::vector<int> pcVal_;
    std::vector<Tri> atomVal_;
};

} // namespace

SolverVerdict positionDP(const Formula& hypothesis, const Formula& conclusion, int maxLocation, std::size_t budget)
{
    const auto start = std::chrono::steady_clock::now();
    PositionSearch s(mk::implies(hypothesis, conclusion), maxLocation, budget);
    const auto r = s.valid();
    SolverVerdict v;
    v.dpUsed = DpUsed::Position;
    v.status = r && *r ? Status::Valid : Status::Unknown;
    if (!r) v.diagnostic = "position search budget exhausted";
    v.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return v;
}

} // namespace pinv
