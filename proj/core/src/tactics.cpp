#include "pinv/tactics.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace pinv {

bool potentiallyOffending(const Transition& t, const Formula& candidate)
{
    const auto writes = t.writeSet();
    for (const auto& r : readSet(candidate))
        if (writes.contains(r)) return true;
    return false;
}

namespace {

bool annotationMatches(const Annotation& a, const PremiseContext& ctx)
{
    if (a.location && (!ctx.transition || *a.location != ctx.transition->location)) return false;
    const auto kind = premiseKind(ctx.premise);
    if (a.premise == PremiseClass::SameThread && kind != PremiseKind::SameThread) return false;
    if (a.premise == PremiseClass::FreshThread && kind != PremiseKind::FreshThread) return false;
    return true;
}

bool annotated(const SupportCandidate& s, const PremiseContext& ctx)
{
    if (s.annotations.empty()) return true;
    return std::any_of(s.annotations.begin(), s.annotations.end(),
                       [&](const Annotation& a) { return annotationMatches(a, ctx); });
}

} // namespace

std::vector<std::string> selectSupport(const PremiseContext& ctx, const std::vector<SupportCandidate>& supports,
                                       TacticMode mode)
{
    std::vector<std::string> out;
    if (premiseKind(ctx.premise) == PremiseKind::Initiation) return out;
    switch (mode) {
    case TacticMode::FullSupp:
        for (const auto& s : supports) out.push_back(s.formula->name);
        break;
    case TacticMode::Supp:
    case TacticMode::Lazy:
        for (const auto& s : supports)
            if (annotated(s, ctx)) out.push_back(s.formula->name);
        break;
    case TacticMode::Offend: {
        if (!ctx.transition || !ctx.candidate || !potentiallyOffending(*ctx.transition, ctx.candidate->body)) break;
        const auto writes = ctx.transition->writeSet();
        for (const auto& s : supports) {
            const auto reads = readSet(s.formula->body);
            if (std::any_of(reads.begin(), reads.end(), [&](const std::string& r) { return writes.contains(r); }))
                out.push_back(s.formula->name);
        }
        break;
    }
    }
    return out;
}

TacticHint parseTacticHint(const std::string& hint)
{
    TacticHint h;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        if (tok == "simpl") {
            h.simplify = true;
        } else if (auto m = parseTacticName(tok)) {
            h.mode = m;
        } else {
            h.unknownTokens.push_back(tok);
        }
        tok.clear();
    };
    for (char c : hint) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            tok += c;
        } else {
            flush();
        }
    }
    flush();
    return h;
}

// ---- simplification ---------------------------------------------------------

namespace {

bool isLit(const Expr& e)
{
    return e->op == Op::IntLit || e->op == Op::LocLit || e->op == Op::TidConst || e->op == Op::BoolLit;
}

bool isTrue(const Expr& e) { return e->op == Op::BoolLit && e->value == 1; }
bool isFalse(const Expr& e) { return e->op == Op::BoolLit && e->value == 0; }

bool isConcretePc(const Expr& e) { return e->op == Op::Var && e->var.isPc() && e->var.kind == VarKind::LocalConcrete; }

Expr rebuildWith(const Expr& e, std::vector<Expr> args)
{
    auto n = std::make_shared<Node>(*e);
    n->args = std::move(args);
    return n;
}

Expr replaceVar(const Expr& e, const VarRef& v, const Expr& by)
{
    if (e->op == Op::Var) return e->var == v ? by : e;
    if (e->args.empty()) return e;
    std::vector<Expr> args;
    bool changed = false;
    for (const auto& a : e->args) {
        args.push_back(replaceVar(a, v, by));
        changed = changed || args.back() != a;
    }
    return changed ? rebuildWith(e, std::move(args)) : e;
}

/// A propagatable fact: pc[a] = literal, or pc'[a] = pc[a].
std::optional<std::pair<VarRef, Expr>> pcFact(const Expr& f)
{
    if (f->op != Op::Eq) return std::nullopt;
    const auto& l = f->args[0];
    const auto& r = f->args[1];
    if (isConcretePc(l) && r->op == Op::LocLit) return std::make_pair(l->var, r);
    if (isConcretePc(r) && l->op == Op::LocLit) return std::make_pair(r->var, l);
    if (isConcretePc(l) && isConcretePc(r) && l->var.primed && !r->var.primed && l->var.thread == r->var.thread)
        return std::make_pair(l->var, r);
    return std::nullopt;
}

Expr simp(const Expr& e);

Expr simpAnd(std::vector<Expr> items)
{
    for (int round = 0; round < 8; ++round) {
        std::vector<Expr> flat;
        std::function<void(const Expr&)> add = [&](const Expr& x) {
            if (x->op == Op::And) {
                for (const auto& c : x->args) add(c);
            } else {
                flat.push_back(x);
            }
        };
        for (const auto& x : items) add(simp(x));

        std::vector<Expr> kept;
        std::set<std::string> seen;
        for (const auto& x : flat) {
            if (isFalse(x)) return mk::boolLit(false);
            if (isTrue(x)) continue;
            if (seen.insert(toString(x)).second) kept.push_back(x);
        }
        for (const auto& x : kept) {
            if (x->op == Op::Not && seen.contains(toString(x->args[0]))) return mk::boolLit(false);
        }

        // Substitute the first fact about each pc into every other conjunct.
        std::map<VarRef, std::size_t> factAt;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            if (auto f = pcFact(kept[i]); f && !factAt.contains(f->first)) factAt[f->first] = i;
        }
        bool changed = false;
        for (const auto& [v, idx] : factAt) {
            const Expr by = pcFact(kept[idx])->second;
            for (std::size_t i = 0; i < kept.size(); ++i) {
                if (i == idx) continue;
                Expr r = replaceVar(kept[i], v, by);
                if (r != kept[i]) {
                    kept[i] = r;
                    changed = true;
                }
            }
        }
        if (!changed) {
            if (kept.empty()) return mk::boolLit(true);
            if (kept.size() == 1) return kept.front();
            return mk::conj(std::move(kept));
        }
        items = std::move(kept);
    }
    return mk::conj(std::move(items));
}

Expr simpOr(const std::vector<Expr>& items)
{
    std::vector<Expr> flat;
    std::function<void(const Expr&)> add = [&](const Expr& x) {
        if (x->op == Op::Or) {
            for (const auto& c : x->args) add(c);
        } else {
            flat.push_back(x);
        }
    };
    for (const auto& x : items) add(simp(x));
    std::vector<Expr> kept;
    std::set<std::string> seen;
    for (const auto& x : flat) {
        if (isTrue(x)) return mk::boolLit(true);
        if (isFalse(x)) continue;
        if (seen.insert(toString(x)).second) kept.push_back(x);
    }
    for (const auto& x : kept)
        if (x->op == Op::Not && seen.contains(toString(x->args[0]))) return mk::boolLit(true);
    if (kept.empty()) return mk::boolLit(false);
    if (kept.size() == 1) return kept.front();
    return mk::disj(std::move(kept));
}

Expr simpImplies(const Expr& a0, const Expr& b0)
{
    Expr a = simp(a0);
    if (isFalse(a)) return mk::boolLit(true);
    Expr b = b0;
    std::vector<Expr> facts = a->op == Op::And ? a->args : std::vector<Expr>{a};
    for (const auto& f : facts) {
        if (auto fact = pcFact(f)) b = replaceVar(b, fact->first, fact->second);
    }
    b = simp(b);
    if (isTrue(b)) return b;
    if (isTrue(a)) return b;
    if (isFalse(b)) return simp(mk::neg(a));
    const std::string bs = toString(b);
    for (const auto& f : facts)
        if (toString(f) == bs) return mk::boolLit(true);
    return mk::implies(a, b);
}

Expr simpCompare(const Expr& e, const Expr& a, const Expr& b)
{
    const bool same = equal(a, b);
    const bool lits = isLit(a) && isLit(b);
    switch (e->op) {
    case Op::Eq:
        if (same) return mk::boolLit(true);
        if (lits) return mk::boolLit(a->value == b->value);
        break;
    case Op::Ne:
        if (same) return mk::boolLit(false);
        if (lits) return mk::boolLit(a->value != b->value);
        break;
    case Op::Lt:
        if (same) return mk::boolLit(false);
        if (lits) return mk::boolLit(a->value < b->value);
        break;
    case Op::Le:
        if (same) return mk::boolLit(true);
        if (lits) return mk::boolLit(a->value <= b->value);
        break;
    default: break;
    }
    // Keep literals on the right of equalities so facts are recognized.
    if ((e->op == Op::Eq || e->op == Op::Ne) && isLit(a) && !isLit(b)) return rebuildWith(e, {b, a});
    return rebuildWith(e, {a, b});
}

Expr simp(const Expr& e)
{
    switch (e->op) {
    case Op::And: return simpAnd(e->args);
    case Op::Or: return simpOr(e->args);
    case Op::Implies: return simpImplies(e->args[0], e->args[1]);
    case Op::Not: {
        Expr a = simp(e->args[0]);
        if (a->op == Op::BoolLit) return mk::boolLit(a->value == 0);
        if (a->op == Op::Not) return a->args[0];
        return mk::neg(a);
    }
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le: return simpCompare(e, simp(e->args[0]), simp(e->args[1]));
    case Op::Add:
    case Op::Sub: {
        Expr a = simp(e->args[0]);
        Expr b = simp(e->args[1]);
        if (a->op == Op::IntLit && b->op == Op::IntLit)
            return mk::intLit(e->op == Op::Add ? a->value + b->value : a->value - b->value);
        return rebuildWith(e, {a, b});
    }
    case Op::Member: {
        Expr x = simp(e->args[0]);
        Expr s = simp(e->args[1]);
        if (s->op == Op::EmptySet) return mk::boolLit(false);
        if (s->op == Op::Singleton) {
            if (equal(x, s->args[0])) return mk::boolLit(true);
            if (x->op == Op::IntLit && s->args[0]->op == Op::IntLit) return mk::boolLit(x->value == s->args[0]->value);
        }
        return rebuildWith(e, {x, s});
    }
    default:
        if (e->args.empty()) return e;
        {
            std::vector<Expr> args;
            for (const auto& a : e->args) args.push_back(simp(a));
            return rebuildWith(e, std::move(args));
        }
    }
}

} // namespace

Formula simplify(const Formula& f)
{
    Formula cur = f;
    std::string key = toString(cur);
    for (int i = 0; i < 16; ++i) {
        Formula next = simp(cur);
        std::string nkey = toString(next);
        if (nkey == key) return next;
        cur = std::move(next);
        key = std::move(nkey);
    }
    return cur;
}

SimplifiedVc simplifyVc(const Formula& hypothesis, const Formula& conclusion)
{
    Formula r = simplify(mk::implies(hypothesis, conclusion));
    SimplifiedVc out;
    if (isTrue(r)) {
        out.hypothesis = mk::boolLit(true);
        out.conclusion = r;
        out.triviallyValid = true;
    } else if (r->op == Op::Implies) {
        out.hypothesis = r->args[0];
        out.conclusion = r->args[1];
    } else {
        out.hypothesis = mk::boolLit(true);
        out.conclusion = r;
    }
    return out;
}

Formula normalizeOrder(const Formula& f)
{
    if (f->args.empty()) return f;
    std::vector<Expr> args;
    for (const auto& a : f->args) args.push_back(normalizeOrder(a));
    if (f->op == Op::And || f->op == Op::Or) {
        std::vector<std::pair<std::string, Expr>> keyed;
        for (auto& a : args) keyed.emplace_back(toString(a), a);
        std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        args.clear();
        for (auto& [k, a] : keyed) args.push_back(a);
    }
    return rebuildWith(f, std::move(args));
}

} // namespace pinv
