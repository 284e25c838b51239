#include "pinv/ir.hpp"

#include <algorithm>
#include <sstream>

#include "pinv/errors.hpp"

namespace pinv {

std::string_view sortName(Sort s)
{
    switch (s) {
    case Sort::Bool: return "bool";
    case Sort::Int: return "int";
    case Sort::Loc: return "loc";
    case Sort::Tid: return "tid";
    case Sort::SetInt: return "set";
    }
    return "?";
}

bool isComparison(Op op)
{
    return op == Op::Eq || op == Op::Ne || op == Op::Lt || op == Op::Le;
}

bool isAtomicFormula(const Expr& e)
{
    switch (e->op) {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
        return false;
    default:
        return e->sort == Sort::Bool;
    }
}

namespace {

Expr make(Op op, Sort sort, std::vector<Expr> args = {})
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->sort = sort;
    n->args = std::move(args);
    return n;
}

void expectSort(const Expr& e, Sort s, std::string_view what)
{
    if (e->sort != s) {
        throw SortError(std::string(what) + ": expected " + std::string(sortName(s)) + ", got " +
                        std::string(sortName(e->sort)) + " in '" + toString(e) + "'");
    }
}

Expr coerceLiteral(const Expr& lit, Sort target)
{
    if (lit->op != Op::IntLit) return lit;
    if (target == Sort::Loc) return mk::locLit(lit->value);
    if (target == Sort::Tid) return mk::tidConst(static_cast<int>(lit->value));
    return lit;
}

} // namespace

namespace mk {

Expr boolLit(bool b)
{
    auto n = std::make_shared<Node>();
    n->op = Op::BoolLit;
    n->sort = Sort::Bool;
    n->value = b ? 1 : 0;
    return n;
}

Expr intLit(std::int64_t v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::IntLit;
    n->sort = Sort::Int;
    n->value = v;
    return n;
}

Expr locLit(std::int64_t v)
{
    auto n = std::make_shared<Node>();
    n->op = Op::LocLit;
    n->sort = Sort::Loc;
    n->value = v;
    return n;
}

Expr tidVar(std::string name)
{
    auto n = std::make_shared<Node>();
    n->op = Op::TidVar;
    n->sort = Sort::Tid;
    n->name = std::move(name);
    return n;
}

Expr tidConst(int id)
{
    auto n = std::make_shared<Node>();
    n->op = Op::TidConst;
    n->sort = Sort::Tid;
    n->value = id;
    return n;
}

Expr var(VarRef ref)
{
    if (ref.isPc()) ref.sort = Sort::Loc;
    if (ref.kind == VarKind::LocalIndexed && ref.tidVar.empty())
        throw SortError("indexed local '" + ref.name + "' without tid variable");
    if (ref.kind == VarKind::LocalConcrete && ref.thread < 0)
        throw SortError("concrete local '" + ref.name + "' without thread id");
    auto n = std::make_shared<Node>();
    n->op = Op::Var;
    n->sort = ref.sort;
    n->var = std::move(ref);
    return n;
}

Expr global(std::string name, Sort sort, bool primed)
{
    return var(VarRef{std::move(name), VarKind::Global, {}, -1, primed, sort});
}

Expr local(std::string name, Sort sort, std::string tid, bool primed)
{
    return var(VarRef{std::move(name), VarKind::LocalIndexed, std::move(tid), -1, primed, sort});
}

Expr localAt(std::string name, Sort sort, int thread, bool primed)
{
    return var(VarRef{std::move(name), VarKind::LocalConcrete, {}, thread, primed, sort});
}

Expr pc(std::string tid, bool primed)
{
    return local(std::string(kPc), Sort::Loc, std::move(tid), primed);
}

Expr pcAt(int thread, bool primed)
{
    return localAt(std::string(kPc), Sort::Loc, thread, primed);
}

Expr add(Expr a, Expr b)
{
    expectSort(a, Sort::Int, "+");
    expectSort(b, Sort::Int, "+");
    return make(Op::Add, Sort::Int, {std::move(a), std::move(b)});
}

Expr sub(Expr a, Expr b)
{
    expectSort(a, Sort::Int, "-");
    expectSort(b, Sort::Int, "-");
    return make(Op::Sub, Sort::Int, {std::move(a), std::move(b)});
}

Expr emptySet() { return make(Op::EmptySet, Sort::SetInt); }

Expr singleton(Expr e)
{
    expectSort(e, Sort::Int, "{.}");
    return make(Op::Singleton, Sort::SetInt, {std::move(e)});
}

Expr unite(Expr a, Expr b)
{
    expectSort(a, Sort::SetInt, "union");
    expectSort(b, Sort::SetInt, "union");
    return make(Op::Union, Sort::SetInt, {std::move(a), std::move(b)});
}

Expr setDiff(Expr a, Expr b)
{
    expectSort(a, Sort::SetInt, "setdiff");
    expectSort(b, Sort::SetInt, "setdiff");
    return make(Op::SetDiff, Sort::SetInt, {std::move(a), std::move(b)});
}

Expr setMin(Expr s)
{
    expectSort(s, Sort::SetInt, "min");
    return make(Op::SetMin, Sort::Int, {std::move(s)});
}

Formula neg(Formula f)
{
    expectSort(f, Sort::Bool, "!");
    return make(Op::Not, Sort::Bool, {std::move(f)});
}

Formula conj(std::vector<Formula> fs)
{
    if (fs.empty()) return boolLit(true);
    if (fs.size() == 1) return fs.front();
    for (const auto& f : fs) expectSort(f, Sort::Bool, "&&");
    return make(Op::And, Sort::Bool, std::move(fs));
}

Formula disj(std::vector<Formula> fs)
{
    if (fs.empty()) return boolLit(false);
    if (fs.size() == 1) return fs.front();
    for (const auto& f : fs) expectSort(f, Sort::Bool, "||");
    return make(Op::Or, Sort::Bool, std::move(fs));
}

Formula implies(Formula a, Formula b)
{
    expectSort(a, Sort::Bool, "->");
    expectSort(b, Sort::Bool, "->");
    return make(Op::Implies, Sort::Bool, {std::move(a), std::move(b)});
}

Formula cmp(Op op, Expr a, Expr b)
{
    a = coerceLiteral(a, b->sort);
    b = coerceLiteral(b, a->sort);
    if (a->sort != b->sort) {
        throw SortError("comparison between " + std::string(sortName(a->sort)) + " and " +
                        std::string(sortName(b->sort)) + ": '" + toString(a) + "' vs '" +
                        toString(b) + "'");
    }
    if (op == Op::Lt || op == Op::Le) {
        // Ordered comparison on tids is representable so the symmetry gate can
        // report it; the rules refuse such programs.
        if (a->sort != Sort::Int && a->sort != Sort::Tid)
            throw SortError("ordering on sort " + std::string(sortName(a->sort)));
    } else if (op != Op::Eq && op != Op::Ne) {
        throw SortError("not a comparison operator");
    }
    return make(op, Sort::Bool, {std::move(a), std::move(b)});
}

Formula eq(Expr a, Expr b) { return cmp(Op::Eq, std::move(a), std::move(b)); }
Formula ne(Expr a, Expr b) { return cmp(Op::Ne, std::move(a), std::move(b)); }
Formula lt(Expr a, Expr b) { return cmp(Op::Lt, std::move(a), std::move(b)); }
Formula le(Expr a, Expr b) { return cmp(Op::Le, std::move(a), std::move(b)); }

Formula member(Expr e, Expr set)
{
    expectSort(e, Sort::Int, "in");
    expectSort(set, Sort::SetInt, "in");
    return make(Op::Member, Sort::Bool, {std::move(e), std::move(set)});
}

Formula arrayUpdate(VarRef target, Expr index, Expr value)
{
    if (target.kind == VarKind::Global) throw SortError("array update on global '" + target.name + "'");
    if (target.isPc()) target.sort = Sort::Loc;
    expectSort(index, Sort::Tid, "array index");
    value = coerceLiteral(value, target.sort);
    expectSort(value, target.sort, "array update");
    auto n = std::make_shared<Node>();
    n->op = Op::ArrayUpdate;
    n->sort = Sort::Bool;
    target.primed = false;
    target.tidVar.clear();
    target.thread = -1;
    n->var = std::move(target);
    n->args = {std::move(index), std::move(value)};
    return n;
}

Formula arrayFrame(VarRef target)
{
    if (target.kind == VarKind::Global) throw SortError("array frame on global '" + target.name + "'");
    if (target.isPc()) target.sort = Sort::Loc;
    auto n = std::make_shared<Node>();
    n->op = Op::ArrayFrame;
    n->sort = Sort::Bool;
    target.primed = false;
    target.tidVar.clear();
    target.thread = -1;
    n->var = std::move(target);
    return n;
}

Formula conjFlat(std::vector<Formula> fs)
{
    std::vector<Formula> out;
    for (auto& f : fs) {
        if (f->op == Op::BoolLit && f->value == 1) continue;
        if (f->op == Op::And) {
            for (const auto& g : conjuncts(f)) out.push_back(g);
        } else {
            out.push_back(std::move(f));
        }
    }
    return conj(std::move(out));
}

} // namespace mk

std::vector<Formula> conjuncts(const Formula& f)
{
    std::vector<Formula> out;
    if (f->op == Op::And) {
        for (const auto& a : f->args) {
            auto sub = conjuncts(a);
            out.insert(out.end(), sub.begin(), sub.end());
        }
    } else if (!(f->op == Op::BoolLit && f->value == 1)) {
        out.push_back(f);
    }
    return out;
}

namespace {

std::string varToString(const VarRef& v, std::string_view own)
{
    std::string s = v.name;
    if (v.primed) s += "'";
    switch (v.kind) {
    case VarKind::Global: break;
    case VarKind::LocalIndexed:
        if (v.tidVar != own) s += "(" + v.tidVar + ")";
        break;
    case VarKind::LocalConcrete: s += "[" + std::to_string(v.thread) + "]"; break;
    }
    return s;
}

bool needsParensInArith(const Expr& e) { return e->op == Op::Add || e->op == Op::Sub; }

void print(std::ostream& os, const Expr& e, std::string_view own);

void printFormulaChild(std::ostream& os, const Expr& e, std::string_view own)
{
    if (isAtomicFormula(e) || e->op == Op::Not) {
        print(os, e, own);
    } else {
        os << "(";
        print(os, e, own);
        os << ")";
    }
}

void printArithChild(std::ostream& os, const Expr& e, std::string_view own)
{
    if (needsParensInArith(e)) os << "(";
    print(os, e, own);
    if (needsParensInArith(e)) os << ")";
}

void print(std::ostream& os, const Expr& e, std::string_view own)
{
    switch (e->op) {
    case Op::BoolLit: os << (e->value ? "true" : "false"); break;
    case Op::IntLit:
    case Op::LocLit:
    case Op::TidConst: os << e->value; break;
    case Op::TidVar: os << e->name; break;
    case Op::Var: os << varToString(e->var, own); break;
    case Op::Add:
    case Op::Sub:
        printArithChild(os, e->args[0], own);
        os << (e->op == Op::Add ? " + " : " - ");
        printArithChild(os, e->args[1], own);
        break;
    case Op::EmptySet: os << "emptyset"; break;
    case Op::Singleton:
        os << "{";
        print(os, e->args[0], own);
        os << "}";
        break;
    case Op::Union:
    case Op::SetDiff:
        os << (e->op == Op::Union ? "union(" : "setdiff(");
        print(os, e->args[0], own);
        os << ", ";
        print(os, e->args[1], own);
        os << ")";
        break;
    case Op::SetMin:
        os << "min(";
        print(os, e->args[0], own);
        os << ")";
        break;
    case Op::Not:
        os << "!";
        if (isAtomicFormula(e->args[0]) && !isComparison(e->args[0]->op) &&
            e->args[0]->op != Op::Member) {
            print(os, e->args[0], own);
        } else {
            os << "(";
            print(os, e->args[0], own);
            os << ")";
        }
        break;
    case Op::And:
    case Op::Or: {
        const char* sep = e->op == Op::And ? " && " : " || ";
        for (std::size_t i = 0; i < e->args.size(); ++i) {
            if (i) os << sep;
            printFormulaChild(os, e->args[i], own);
        }
        break;
    }
    case Op::Implies:
        printFormulaChild(os, e->args[0], own);
        os << " -> ";
        printFormulaChild(os, e->args[1], own);
        break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le: {
        static constexpr const char* names[] = {" = ", " != ", " < ", " <= "};
        print(os, e->args[0], own);
        os << names[static_cast<int>(e->op) - static_cast<int>(Op::Eq)];
        print(os, e->args[1], own);
        break;
    }
    case Op::Member:
        print(os, e->args[0], own);
        os << " in ";
        print(os, e->args[1], own);
        break;
    case Op::ArrayUpdate:
        os << e->var.name << "' = " << e->var.name << "{";
        print(os, e->args[0], own);
        os << " <- ";
        print(os, e->args[1], own);
        os << "}";
        break;
    case Op::ArrayFrame: os << e->var.name << "' = " << e->var.name; break;
    }
}

} // namespace

std::string toString(const Expr& e, std::string_view ownThread)
{
    std::ostringstream os;
    print(os, e, ownThread);
    return os.str();
}

bool equal(const Expr& a, const Expr& b)
{
    if (a == b) return true;
    if (a->op != b->op || a->sort != b->sort || a->value != b->value || a->name != b->name ||
        a->var != b->var || a->args.size() != b->args.size())
        return false;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    return true;
}

void checkSorts(const Expr& e)
{
    for (const auto& a : e->args) checkSorts(a);
    // Rebuilding through the builders re-runs their sort checks.
    switch (e->op) {
    case Op::BoolLit:
    case Op::IntLit:
    case Op::LocLit:
    case Op::TidVar:
    case Op::TidConst:
    case Op::EmptySet:
        return;
    case Op::Var: mk::var(e->var); return;
    case Op::Add: mk::add(e->args[0], e->args[1]); return;
    case Op::Sub: mk::sub(e->args[0], e->args[1]); return;
    case Op::Singleton: mk::singleton(e->args[0]); return;
    case Op::Union: mk::unite(e->args[0], e->args[1]); return;
    case Op::SetDiff: mk::setDiff(e->args[0], e->args[1]); return;
    case Op::SetMin: mk::setMin(e->args[0]); return;
    case Op::Not: mk::neg(e->args[0]); return;
    case Op::And:
    case Op::Or:
        for (const auto& a : e->args)
            if (a->sort != Sort::Bool) throw SortError("non-formula under connective");
        return;
    case Op::Implies: mk::implies(e->args[0], e->args[1]); return;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le: {
        if (e->args[0]->sort != e->args[1]->sort) throw SortError("ill-sorted comparison '" + toString(e) + "'");
        mk::cmp(e->op, e->args[0], e->args[1]);
        return;
    }
    case Op::Member: mk::member(e->args[0], e->args[1]); return;
    case Op::ArrayUpdate: mk::arrayUpdate(e->var, e->args[0], e->args[1]); return;
    case Op::ArrayFrame: mk::arrayFrame(e->var); return;
    }
}

bool wellSorted(const Expr& e)
{
    try {
        checkSorts(e);
        return true;
    } catch (const SortError&) {
        return false;
    }
}

namespace {

void collectTids(const Expr& e, std::set<std::string>& out)
{
    if (e->op == Op::TidVar) out.insert(e->name);
    if (e->op == Op::Var && e->var.kind == VarKind::LocalIndexed) out.insert(e->var.tidVar);
    for (const auto& a : e->args) collectTids(a, out);
}

void collectReads(const Expr& e, std::set<std::string>& out)
{
    if (e->op == Op::Var || e->op == Op::ArrayUpdate || e->op == Op::ArrayFrame) out.insert(e->var.name);
    for (const auto& a : e->args) collectReads(a, out);
}

Expr rebuild(const Expr& e, std::vector<Expr> args)
{
    auto n = std::make_shared<Node>(*e);
    n->args = std::move(args);
    return n;
}

template <typename Fn>
Expr mapChildren(const Expr& e, Fn&& fn)
{
    if (e->args.empty()) return e;
    std::vector<Expr> args;
    args.reserve(e->args.size());
    bool changed = false;
    for (const auto& a : e->args) {
        args.push_back(fn(a));
        changed = changed || args.back() != a;
    }
    return changed ? rebuild(e, std::move(args)) : e;
}

} // namespace

std::set<std::string> freeTids(const Formula& f)
{
    std::set<std::string> out;
    collectTids(f, out);
    return out;
}

std::set<std::string> readSet(const Expr& f)
{
    std::set<std::string> out;
    collectReads(f, out);
    return out;
}

Formula prime(const Formula& f)
{
    if (f->op == Op::Var) {
        if (f->var.primed) return f;
        VarRef v = f->var;
        v.primed = true;
        return mk::var(std::move(v));
    }
    return mapChildren(f, [](const Expr& a) { return prime(a); });
}

Substitution Substitution::swap(const std::string& a, const std::string& b)
{
    Substitution s;
    s.mapping[a] = mk::tidVar(b);
    s.mapping[b] = mk::tidVar(a);
    return s;
}

Substitution Substitution::concrete(const std::map<std::string, int>& assignment,
                                    std::optional<int> instanceSize)
{
    Substitution s;
    for (const auto& [k, a] : assignment) s.mapping[k] = mk::tidConst(a);
    s.instanceSize = instanceSize;
    return s;
}

namespace {

Expr substIndex(const std::string& tid, const Substitution& s)
{
    auto it = s.mapping.find(tid);
    if (it == s.mapping.end()) return mk::tidVar(tid);
    return it->second;
}

VarRef indexVar(VarRef v, const Expr& idx)
{
    if (idx->op == Op::TidConst) {
        v.kind = VarKind::LocalConcrete;
        v.thread = static_cast<int>(idx->value);
        v.tidVar.clear();
    } else {
        v.kind = VarKind::LocalIndexed;
        v.tidVar = idx->name;
        v.thread = -1;
    }
    return v;
}

Formula subst(const Formula& f, const Substitution& s)
{
    switch (f->op) {
    case Op::TidVar: return substIndex(f->name, s);
    case Op::Var:
        if (f->var.kind == VarKind::LocalIndexed && s.mapping.contains(f->var.tidVar))
            return mk::var(indexVar(f->var, substIndex(f->var.tidVar, s)));
        return f;
    case Op::ArrayUpdate: {
        Expr idx = subst(f->args[0], s);
        Expr val = subst(f->args[1], s);
        if (idx->op == Op::TidConst && s.instanceSize) {
            const int a = static_cast<int>(idx->value);
            std::vector<Formula> parts;
            VarRef w = f->var;
            w.kind = VarKind::LocalConcrete;
            w.thread = a;
            w.primed = true;
            parts.push_back(mk::eq(mk::var(w), val));
            for (int b = 0; b < *s.instanceSize; ++b) {
                if (b == a) continue;
                VarRef post = f->var, pre = f->var;
                post.kind = pre.kind = VarKind::LocalConcrete;
                post.thread = pre.thread = b;
                post.primed = true;
                parts.push_back(mk::eq(mk::var(post), mk::var(pre)));
            }
            return mk::conj(std::move(parts));
        }
        return mk::arrayUpdate(f->var, idx, val);
    }
    case Op::ArrayFrame: {
        if (!s.instanceSize) return f;
        std::vector<Formula> parts;
        for (int b = 0; b < *s.instanceSize; ++b) {
            VarRef post = f->var, pre = f->var;
            post.kind = pre.kind = VarKind::LocalConcrete;
            post.thread = pre.thread = b;
            post.primed = true;
            parts.push_back(mk::eq(mk::var(post), mk::var(pre)));
        }
        return mk::conj(std::move(parts));
    }
    default: return mapChildren(f, [&](const Expr& a) { return subst(a, s); });
    }
}

} // namespace

Formula applySubst(const Formula& f, const Substitution& s)
{
    for (const auto& [k, target] : s.mapping) {
        if (!target || target->sort != Sort::Tid || (target->op != Op::TidVar && target->op != Op::TidConst))
            throw SortError("substitution maps tid variable '" + k + "' to a non-tid value");
    }
    return subst(f, s);
}

Formula renameThreads(const Formula& f, std::span<const int> perm)
{
    auto map = [&](int a) {
        return a >= 0 && static_cast<std::size_t>(a) < perm.size() ? perm[static_cast<std::size_t>(a)] : a;
    };
    if (f->op == Op::TidConst) return mk::tidConst(map(static_cast<int>(f->value)));
    if (f->op == Op::Var && f->var.kind == VarKind::LocalConcrete) {
        VarRef v = f->var;
        v.thread = map(v.thread);
        return mk::var(std::move(v));
    }
    return mapChildren(f, [&](const Expr& a) { return renameThreads(a, perm); });
}

bool VarDecl::operator==(const VarDecl& o) const
{
    if (name != o.name || sort != o.sort || init.has_value() != o.init.has_value()) return false;
    return !init || equal(*init, *o.init);
}

bool Assignment::operator==(const Assignment& o) const
{
    return target == o.target && equal(value, o.value);
}

std::set<std::string> Transition::writeSet() const
{
    std::set<std::string> out{std::string(kPc)};
    for (const auto& a : effect) out.insert(a.target.name);
    return out;
}

bool Transition::operator==(const Transition& o) const
{
    return location == o.location && arm == o.arm && tidParam == o.tidParam && equal(guard, o.guard) &&
           effect == o.effect && nextLoc == o.nextLoc && preserved == o.preserved && label == o.label;
}

const VarDecl* ParamProgram::findGlobal(std::string_view n) const
{
    for (const auto& d : globals)
        if (d.name == n) return &d;
    return nullptr;
}

const VarDecl* ParamProgram::findLocal(std::string_view n) const
{
    for (const auto& d : locals)
        if (d.name == n) return &d;
    return nullptr;
}

int ParamProgram::armsAt(int location) const
{
    return static_cast<int>(std::count_if(transitions.begin(), transitions.end(),
                                          [&](const Transition& t) { return t.location == location; }));
}

bool ParamProgram::operator==(const ParamProgram& o) const
{
    return name == o.name && globals == o.globals && locals == o.locals && transitions == o.transitions &&
           equal(thetaGlobal, o.thetaGlobal) && equal(thetaLocal, o.thetaLocal) && maxLocation == o.maxLocation;
}

Formula presExpand(const ParamProgram& p, const std::set<std::string>& preserved,
                   std::span<const int> instanceThreads)
{
    std::set<std::string> whole;
    std::set<std::pair<std::string, int>> single;
    for (const auto& item : preserved) {
        auto br = item.find('[');
        if (br != std::string::npos && item.back() == ']') {
            std::string base = item.substr(0, br);
            int t = std::stoi(item.substr(br + 1, item.size() - br - 2));
            if (!p.findLocal(base)) throw UnknownVariable("unknown local variable '" + base + "' in pres");
            single.emplace(base, t);
        } else {
            if (!p.findGlobal(item) && !p.findLocal(item))
                throw UnknownVariable("unknown variable '" + item + "' in pres");
            whole.insert(item);
        }
    }
    std::vector<Formula> parts;
    for (const auto& g : p.globals)
        if (whole.contains(g.name)) parts.push_back(mk::eq(mk::global(g.name, g.sort, true), mk::global(g.name, g.sort)));
    for (int a : instanceThreads) {
        for (const auto& l : p.locals) {
            if (whole.contains(l.name) || single.contains({l.name, a}))
                parts.push_back(mk::eq(mk::localAt(l.name, l.sort, a, true), mk::localAt(l.name, l.sort, a)));
        }
    }
    return mk::conj(std::move(parts));
}

Formula buildInitial(const ParamProgram& p, std::span<const std::string> tids)
{
    std::vector<Formula> parts{p.thetaGlobal};
    for (const auto& k : tids) {
        Substitution s;
        s.mapping[std::string(kSelf)] = mk::tidVar(k);
        parts.push_back(applySubst(p.thetaLocal, s));
    }
    return mk::conjFlat(std::move(parts));
}

Formula transitionRelation(const ParamProgram& p, const Transition& t, const std::string& tidVar)
{
    Substitution self;
    self.mapping[t.tidParam] = mk::tidVar(tidVar);
    const Expr k = mk::tidVar(tidVar);

    std::vector<Formula> parts;
    parts.push_back(mk::eq(mk::pc(tidVar), mk::locLit(t.location)));
    parts.push_back(mk::arrayUpdate(VarRef{std::string(kPc), VarKind::LocalIndexed, tidVar, -1, false, Sort::Loc}, k,
                                    mk::locLit(t.nextLoc)));
    parts.push_back(applySubst(t.guard, self));
    for (const auto& a : t.effect) {
        Expr value = applySubst(a.value, self);
        if (a.target.kind == VarKind::Global) {
            VarRef post = a.target;
            post.primed = true;
            parts.push_back(mk::eq(mk::var(post), value));
        } else {
            parts.push_back(mk::arrayUpdate(a.target, k, value));
        }
    }
    for (const auto& g : p.globals)
        if (t.preserved.contains(g.name)) parts.push_back(mk::eq(mk::global(g.name, g.sort, true), mk::global(g.name, g.sort)));
    for (const auto& l : p.locals)
        if (t.preserved.contains(l.name))
            parts.push_back(mk::arrayFrame(VarRef{l.name, VarKind::LocalIndexed, tidVar, -1, false, l.sort}));
    return mk::conjFlat(std::move(parts));
}

namespace {

bool isFrameEquality(const Formula& f)
{
    if (f->op != Op::Eq) return false;
    const auto& l = f->args[0];
    const auto& r = f->args[1];
    if (l->op != Op::Var || r->op != Op::Var) return false;
    VarRef lv = l->var;
    if (!lv.primed || r->var.primed) return false;
    lv.primed = false;
    return lv == r->var;
}

} // namespace

Formula concreteTransition(const ParamProgram& p, const Transition& t, int thread, int instanceSize)
{
    const std::string k = "__acting";
    Formula rel = transitionRelation(p, t, k);
    Formula c = applySubst(rel, Substitution::concrete({{k, thread}}, instanceSize));
    auto parts = conjuncts(c);
    std::stable_partition(parts.begin(), parts.end(), [](const Formula& f) { return !isFrameEquality(f); });
    return mk::conj(std::move(parts));
}

} // namespace pinv
