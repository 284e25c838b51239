#include "pinv/frontend.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "pinv/errors.hpp"

namespace pinv {

using detail::Token;

bool NamedFormula::operator==(const NamedFormula& o) const
{
    return name == o.name && indexVars == o.indexVars && equal(body, o.body);
}

const NamedFormula* SpecFile::find(std::string_view name) const
{
    for (const auto& f : invariants)
        if (f.name == name) return &f;
    return nullptr;
}

const GraphNode* ProofGraph::find(std::string_view name) const
{
    for (const auto& n : nodes)
        if (n.name == name) return &n;
    return nullptr;
}

std::vector<std::string> ProofGraph::supportsOf(std::string_view node) const
{
    std::vector<std::string> out;
    for (const auto& [from, to] : edges)
        if (to == node) out.push_back(from);
    return out;
}

std::string readFile(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

const std::set<std::string, std::less<>> kReserved{
    "union", "setdiff", "min", "emptyset", "self", "in", "true", "false", "pc", "macro", "invariant",
    "program", "global", "procedure", "local", "begin", "end", "skip", "loop", "endloop", "goto",
    "await", "if", "then", "else", "when", "do", "int", "set", "bool"};

struct Scope {
    const ParamProgram* program = nullptr;
    std::vector<std::string> tids;
    const std::vector<LocationMacro>* macros = nullptr;
    bool programMode = false;

    bool isTid(std::string_view n) const
    {
        if (programMode && n == kSelf) return true;
        return std::find(tids.begin(), tids.end(), n) != tids.end();
    }

    const LocationMacro* macro(std::string_view n) const
    {
        if (!macros) return nullptr;
        for (const auto& m : *macros)
            if (m.name == n) return &m;
        return nullptr;
    }
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek(std::size_t ahead = 0) const
    {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool atEnd() const { return peek().kind == Token::Kind::End; }
    bool is(std::string_view text, std::size_t ahead = 0) const
    {
        const auto& t = peek(ahead);
        return t.kind != Token::Kind::End && t.text == text;
    }
    bool isIdent(std::size_t ahead = 0) const { return peek(ahead).kind == Token::Kind::Ident; }
    bool isInt(std::size_t ahead = 0) const { return peek(ahead).kind == Token::Kind::Int; }

    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    bool accept(std::string_view text)
    {
        if (is(text)) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& expected) const
    {
        const auto& t = peek();
        throw ParseError(t.line, t.col,
                         "expected " + expected + ", found " + (t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"));
    }

    void expect(std::string_view text)
    {
        if (!accept(text)) fail("'" + std::string(text) + "'");
    }

    std::string ident(const std::string& what = "identifier")
    {
        if (!isIdent()) fail(what);
        return next().text;
    }

    std::int64_t integer()
    {
        bool negative = accept("-");
        if (!isInt()) fail("integer");
        auto v = std::stoll(next().text);
        return negative ? -v : v;
    }

    std::size_t mark() const { return pos_; }
    void reset(std::size_t m) { pos_ = m; }

    // ---- formulas -------------------------------------------------------

    Formula formula(const Scope& sc) { return implication(sc); }

    Expr expr(const Scope& sc)
    {
        Expr lhs = term(sc);
        while (is("+") || is("-")) {
            const Token op = next();
            Expr rhs = term(sc);
            lhs = wrap(op, [&] { return op.text == "+" ? mk::add(lhs, rhs) : mk::sub(lhs, rhs); });
        }
        return lhs;
    }

    std::vector<int> locationSet()
    {
        std::vector<int> locs;
        expect("{");
        const int first = static_cast<int>(integer());
        if (accept("..")) {
            const int last = static_cast<int>(integer());
            for (int l = first; l <= last; ++l) locs.push_back(l);
        } else {
            locs.push_back(first);
            while (accept(",")) locs.push_back(static_cast<int>(integer()));
        }
        expect("}");
        return locs;
    }

private:
    template <typename Fn>
    Expr wrap(const Token& at, Fn&& fn)
    {
        try {
            return fn();
        } catch (const ParseError&) {
            throw;
        } catch (const SortError& e) {
            throw ParseError(at.line, at.col, e.what());
        }
    }

    Formula implication(const Scope& sc)
    {
        const Token at = peek();
        Formula lhs = disjunction(sc);
        if (accept("->")) {
            Formula rhs = implication(sc);
            return wrap(at, [&] { return mk::implies(lhs, rhs); });
        }
        return lhs;
    }

    Formula disjunction(const Scope& sc)
    {
        const Token at = peek();
        std::vector<Formula> parts{conjunction(sc)};
        while (accept("||")) parts.push_back(conjunction(sc));
        return wrap(at, [&] { return mk::disj(parts); });
    }

    Formula conjunction(const Scope& sc)
    {
        const Token at = peek();
        std::vector<Formula> parts{unary(sc)};
        while (accept("&&")) parts.push_back(unary(sc));
        return wrap(at, [&] { return mk::conj(parts); });
    }

    Formula unary(const Scope& sc)
    {
        const Token at = peek();
        if (accept("!")) {
            Formula f = unary(sc);
            return wrap(at, [&] { return mk::neg(f); });
        }
        return atom(sc);
    }

    static bool isRelop(const Token& t)
    {
        static const std::set<std::string, std::less<>> ops{"=", "!=", "<", "<=", ">", ">=", "in"};
        return t.kind != Token::Kind::End && ops.contains(t.text);
    }

    Formula atom(const Scope& sc)
    {
        const Token at = peek();
        if (is("(")) {
            const auto m = mark();
            try {
                next();
                Formula f = formula(sc);
                expect(")");
                if (!isRelop(peek())) {
                    if (f->sort != Sort::Bool) throw ParseError(at.line, at.col, "expected formula");
                    return f;
                }
            } catch (const ParseError&) {
            }
            reset(m);
        }
        if ((is("true") || is("false")) && !isRelop(peek(1))) {
            return mk::boolLit(next().text == "true");
        }
        if (isIdent() && is("(", 1)) {
            if (const auto* m = sc.macro(peek().text)) {
                next();
                expect("(");
                std::vector<std::string> args;
                if (!is(")")) {
                    args.push_back(ident("tid variable"));
                    while (accept(",")) args.push_back(ident("tid variable"));
                }
                expect(")");
                if (args.size() != 1)
                    throw ArityError("macro '" + m->name + "' expects 1 argument, got " + std::to_string(args.size()));
                if (!sc.isTid(args[0]))
                    throw ParseError(at.line, at.col, "'" + args[0] + "' is not a tid variable");
                std::vector<Formula> alts;
                for (int l : m->locations) alts.push_back(mk::eq(mk::pc(args[0]), mk::locLit(l)));
                return mk::disj(std::move(alts));
            }
        }
        Expr lhs = expr(sc);
        if (!isRelop(peek())) {
            if (lhs->sort == Sort::Bool) return lhs;
            fail("comparison operator");
        }
        const Token op = next();
        if (op.text == "in" && is("{") && lhs->sort == Sort::Loc) {
            // Location predicate pc(k) in {l1, ..., ln}.
            const auto m = mark();
            try {
                auto locs = locationSet();
                std::vector<Formula> alts;
                for (int l : locs) alts.push_back(mk::eq(lhs, mk::locLit(l)));
                return mk::disj(std::move(alts));
            } catch (const ParseError&) {
                reset(m);
            }
        }
        Expr rhs = expr(sc);
        return wrap(op, [&]() -> Formula {
            if (op.text == "=") return mk::eq(lhs, rhs);
            if (op.text == "!=") return mk::ne(lhs, rhs);
            if (op.text == "<") return mk::lt(lhs, rhs);
            if (op.text == "<=") return mk::le(lhs, rhs);
            if (op.text == ">") return mk::lt(rhs, lhs);
            if (op.text == ">=") return mk::le(rhs, lhs);
            return mk::member(lhs, rhs);
        });
    }

    Expr term(const Scope& sc)
    {
        const Token at = peek();
        if (isInt()) return mk::intLit(std::stoll(next().text));
        if (is("-") && isInt(1)) {
            next();
            return mk::intLit(-std::stoll(next().text));
        }
        if (accept("(")) {
            Expr e = expr(sc);
            expect(")");
            return e;
        }
        if (accept("emptyset")) return mk::emptySet();
        if (accept("true")) return mk::boolLit(true);
        if (accept("false")) return mk::boolLit(false);
        if (accept("{")) {
            Expr e = expr(sc);
            expect("}");
            return wrap(at, [&] { return mk::singleton(e); });
        }
        if (is("union") || is("setdiff")) {
            const bool isUnion = next().text == "union";
            expect("(");
            Expr a = expr(sc);
            expect(",");
            Expr b = expr(sc);
            expect(")");
            return wrap(at, [&] { return isUnion ? mk::unite(a, b) : mk::setDiff(a, b); });
        }
        if (is("min") && is("(", 1)) {
            next();
            next();
            Expr s = expr(sc);
            expect(")");
            return wrap(at, [&] { return mk::setMin(s); });
        }
        if (!isIdent()) fail("expression");
        const std::string name = next().text;
        if (name == kSelf) {
            if (!sc.programMode) throw ParseError(at.line, at.col, "'self' is only valid in programs");
            return mk::tidVar(name);
        }
        const bool primed = accept("'");
        if (!primed && sc.isTid(name) && !is("(") && !is("[")) return mk::tidVar(name);

        const ParamProgram& p = *sc.program;
        const VarDecl* local = p.findLocal(name);
        const VarDecl* glob = p.findGlobal(name);
        if (local) {
            if (accept("(")) {
                const Token kt = peek();
                const std::string k = ident("tid variable");
                expect(")");
                if (!sc.isTid(k)) throw ParseError(kt.line, kt.col, "'" + k + "' is not a tid variable");
                return mk::local(name, local->sort, k, primed);
            }
            if (accept("[")) {
                const auto a = integer();
                expect("]");
                return mk::localAt(name, local->sort, static_cast<int>(a), primed);
            }
            if (sc.programMode) return mk::local(name, local->sort, std::string(kSelf), primed);
            throw ParseError(at.line, at.col, "local variable '" + name + "' needs a thread index");
        }
        if (glob) return mk::global(name, glob->sort, primed);
        if (kReserved.contains(name)) throw ParseError(at.line, at.col, "expected expression, found '" + name + "'");
        throw UnknownVariable(std::to_string(at.line) + ":" + std::to_string(at.col) + ": unknown variable '" + name + "'");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

Sort parseType(Parser& ps)
{
    const Token t = ps.peek();
    const std::string name = ps.ident("type");
    if (name == "int") return Sort::Int;
    if (name == "set") return Sort::SetInt;
    if (name == "bool") return Sort::Bool;
    throw UnsupportedSort(std::to_string(t.line) + ":" + std::to_string(t.col) + ": unsupported sort '" + name + "'");
}

void checkFreshName(const ParamProgram& p, const Token& at, const std::string& name)
{
    if (kReserved.contains(name)) throw ParseError(at.line, at.col, "'" + name + "' is reserved");
    if (p.findGlobal(name) || p.findLocal(name)) throw ParseError(at.line, at.col, "duplicate declaration of '" + name + "'");
}

struct RawStatement {
    Token at;
    int location = 0;
    std::vector<Transition> arms;
    bool isLoop = false;
    bool isEndLoop = false;
};

std::vector<Assignment> parseAssignments(Parser& ps, const ParamProgram& p, const Scope& sc, bool braced)
{
    std::vector<Assignment> out;
    std::set<std::string> seen;
    auto one = [&] {
        const Token at = ps.peek();
        const std::string name = ps.ident("assignment target");
        if (name == kPc) throw ParseError(at.line, at.col, "pc is not assignable");
        VarRef target;
        if (const auto* g = p.findGlobal(name)) {
            target = VarRef{name, VarKind::Global, {}, -1, false, g->sort};
        } else if (const auto* l = p.findLocal(name)) {
            target = VarRef{name, VarKind::LocalIndexed, std::string(kSelf), -1, false, l->sort};
        } else {
            throw UnknownVariable(std::to_string(at.line) + ":" + std::to_string(at.col) + ": unknown variable '" + name + "'");
        }
        if (!seen.insert(name).second) throw ParseError(at.line, at.col, "'" + name + "' assigned twice in one block");
        ps.expect(":=");
        const Token vt = ps.peek();
        Expr value = target.sort == Sort::Bool ? ps.formula(sc) : ps.expr(sc);
        if (value->sort != target.sort) {
            throw ParseError(vt.line, vt.col,
                             "cannot assign " + std::string(sortName(value->sort)) + " to " + std::string(sortName(target.sort)) +
                                 " variable '" + name + "'");
        }
        out.push_back(Assignment{std::move(target), std::move(value)});
    };
    if (!braced) {
        one();
        return out;
    }
    ps.expect("{");
    one();
    while (ps.accept(";")) {
        if (ps.is("}")) break;
        one();
    }
    ps.expect("}");
    return out;
}

void declare(Parser& ps, ParamProgram& p, bool isGlobal, const Scope& sc)
{
    const Sort sort = parseType(ps);
    const Token at = ps.peek();
    const std::string name = ps.ident("variable name");
    checkFreshName(p, at, name);
    VarDecl d{name, sort, std::nullopt};
    if (ps.accept(":=")) {
        const Token vt = ps.peek();
        Expr init = sort == Sort::Bool ? ps.formula(sc) : ps.expr(sc);
        if (init->sort != sort) throw ParseError(vt.line, vt.col, "initializer of '" + name + "' has the wrong sort");
        d.init = init;
    }
    (isGlobal ? p.globals : p.locals).push_back(std::move(d));
}

bool startsDeclaration(const Parser& ps)
{
    return ps.isIdent() && ps.isIdent(1) && !ps.is("procedure") && !ps.is("begin") && !ps.is("local");
}

} // namespace

Formula parseFormula(std::string_view text, const ParamProgram& program, const std::vector<std::string>& tidVars,
                     const std::vector<LocationMacro>& macros)
{
    Parser ps(detail::tokenize(text));
    Scope sc{&program, tidVars, &macros, false};
    Formula f = ps.formula(sc);
    if (!ps.atEnd()) ps.fail("end of formula");
    return f;
}

ParamProgram parseProgram(const ProgramSource& src)
{
    Parser ps(detail::tokenize(src.text));
    ParamProgram p;
    p.locals.push_back(VarDecl{std::string(kPc), Sort::Loc, mk::locLit(1)});
    Scope sc{&p, {}, nullptr, true};

    ps.expect("program");
    p.name = ps.ident("program name");
    if (ps.accept("global")) {
        while (startsDeclaration(ps)) declare(ps, p, true, Scope{&p, {}, nullptr, false});
    }
    ps.expect("procedure");
    ps.expect("main");
    ps.expect("(");
    ps.expect(")");
    if (ps.accept("local")) {
        while (startsDeclaration(ps)) declare(ps, p, false, sc);
    }
    ps.expect("begin");

    std::vector<RawStatement> stmts;
    std::map<int, int> seenLoc;
    while (!ps.is("end")) {
        if (ps.atEnd()) ps.fail("'end'");
        RawStatement st;
        st.at = ps.peek();
        if (!ps.isInt()) ps.fail("statement location");
        st.location = static_cast<int>(ps.integer());
        if (seenLoc.contains(st.location))
            throw DuplicateLocation(std::to_string(st.at.line) + ":" + std::to_string(st.at.col) + ": location " +
                                    std::to_string(st.location) + " defined twice");
        seenLoc[st.location] = st.at.line;
        ps.expect(":");
        const int l = st.location;
        auto base = [&](Formula guard, std::vector<Assignment> eff, int next) {
            Transition t;
            t.location = l;
            t.guard = std::move(guard);
            t.effect = std::move(eff);
            t.nextLoc = next;
            return t;
        };
        const Token kw = ps.peek();
        if (ps.accept("skip")) {
            auto t = base(mk::boolLit(true), {}, l + 1);
            if (ps.isIdent() && !ps.is("end")) t.label = ps.next().text;
            st.arms.push_back(std::move(t));
        } else if (ps.accept("loop")) {
            st.isLoop = true;
            st.arms.push_back(base(mk::boolLit(true), {}, l + 1));
        } else if (ps.accept("endloop")) {
            st.isEndLoop = true;
            st.arms.push_back(base(mk::boolLit(true), {}, 0));
        } else if (ps.accept("goto")) {
            st.arms.push_back(base(mk::boolLit(true), {}, static_cast<int>(ps.integer())));
        } else if (ps.accept("await")) {
            st.arms.push_back(base(ps.formula(sc), {}, l + 1));
        } else if (ps.accept("if")) {
            Formula g = ps.accept("*") ? mk::boolLit(true) : ps.formula(sc);
            const bool nondet = g->op == Op::BoolLit;
            ps.expect("then");
            const int thenLoc = static_cast<int>(ps.integer());
            ps.expect("else");
            const int elseLoc = static_cast<int>(ps.integer());
            st.arms.push_back(base(g, {}, thenLoc));
            st.arms.push_back(base(nondet ? g : mk::neg(g), {}, elseLoc));
            st.arms.back().arm = 1;
        } else if (ps.accept("when")) {
            Formula g = ps.formula(sc);
            std::vector<Assignment> eff;
            if (ps.accept("do")) eff = parseAssignments(ps, p, sc, true);
            int next = l + 1;
            if (ps.accept("goto")) next = static_cast<int>(ps.integer());
            st.arms.push_back(base(g, std::move(eff), next));
        } else if (ps.is("{")) {
            st.arms.push_back(base(mk::boolLit(true), parseAssignments(ps, p, sc, true), l + 1));
        } else if (ps.isIdent() && ps.is(":=", 1)) {
            st.arms.push_back(base(mk::boolLit(true), parseAssignments(ps, p, sc, false), l + 1));
        } else {
            throw ParseError(kw.line, kw.col, "expected statement, found '" + kw.text + "'");
        }
        stmts.push_back(std::move(st));
    }
    const Token endTok = ps.peek();
    ps.expect("end");
    if (!ps.atEnd()) ps.fail("end of program");
    if (stmts.empty()) throw ParseError(endTok.line, endTok.col, "procedure body is empty");

    const int L = static_cast<int>(stmts.size());
    for (int i = 0; i < L; ++i) {
        if (stmts[static_cast<std::size_t>(i)].location != i + 1) {
            const auto& at = stmts[static_cast<std::size_t>(i)].at;
            throw ParseError(at.line, at.col, "locations must be numbered 1.." + std::to_string(L) + " in order");
        }
    }
    std::vector<int> loopStack;
    for (auto& st : stmts) {
        if (st.isLoop) loopStack.push_back(st.location);
        if (st.isEndLoop) {
            if (loopStack.empty()) throw ParseError(st.at.line, st.at.col, "endloop without loop");
            st.arms[0].nextLoc = loopStack.back();
            loopStack.pop_back();
        }
    }
    if (!loopStack.empty()) throw ParseError(endTok.line, endTok.col, "loop without endloop");

    std::set<std::string> allNames;
    for (const auto& g : p.globals) allNames.insert(g.name);
    for (const auto& v : p.locals)
        if (v.name != kPc) allNames.insert(v.name);
    for (auto& st : stmts) {
        for (auto& t : st.arms) {
            if (t.nextLoc < 1 || t.nextLoc > L)
                throw ParseError(st.at.line, st.at.col, "jump target " + std::to_string(t.nextLoc) + " outside 1.." + std::to_string(L));
            t.preserved = allNames;
            for (const auto& a : t.effect) t.preserved.erase(a.target.name);
            p.transitions.push_back(std::move(t));
        }
    }
    p.maxLocation = L;

    std::vector<Formula> tg, tl;
    for (const auto& g : p.globals)
        if (g.init) tg.push_back(mk::eq(mk::global(g.name, g.sort), *g.init));
    for (const auto& v : p.locals)
        if (v.init && v.name != kPc) tl.push_back(mk::eq(mk::local(v.name, v.sort, std::string(kSelf)), *v.init));
    tl.push_back(mk::eq(mk::pc(std::string(kSelf)), mk::locLit(1)));
    p.thetaGlobal = mk::conj(std::move(tg));
    p.thetaLocal = mk::conj(std::move(tl));
    return p;
}

SpecFile parseSpec(std::string_view text, const ParamProgram& program)
{
    Parser ps(detail::tokenize(text));
    SpecFile spec;
    while (!ps.atEnd()) {
        const Token at = ps.peek();
        if (ps.accept("macro")) {
            LocationMacro m;
            const Token nt = ps.peek();
            m.name = ps.ident("macro name");
            if (kReserved.contains(m.name)) throw ParseError(nt.line, nt.col, "'" + m.name + "' is reserved");
            ps.expect("(");
            m.tidParam = ps.ident("tid parameter");
            if (ps.is(",")) throw ArityError("macro '" + m.name + "' must take exactly one tid parameter");
            ps.expect(")");
            ps.expect(":=");
            const Token bt = ps.peek();
            if (!ps.accept("pc")) throw ParseError(bt.line, bt.col, "macro body must be a location predicate over pc");
            ps.expect("(");
            const std::string k = ps.ident("tid variable");
            ps.expect(")");
            if (k != m.tidParam) throw ParseError(bt.line, bt.col, "macro body must use its own parameter '" + m.tidParam + "'");
            if (ps.accept("=")) {
                m.locations.push_back(static_cast<int>(ps.integer()));
            } else {
                ps.expect("in");
                m.locations = ps.locationSet();
            }
            for (int l : m.locations)
                if (l < 1 || l > program.maxLocation)
                    throw ParseError(bt.line, bt.col, "location " + std::to_string(l) + " outside the program");
            for (const auto& other : spec.macros)
                if (other.name == m.name) throw ParseError(nt.line, nt.col, "duplicate macro '" + m.name + "'");
            spec.macros.push_back(std::move(m));
        } else if (ps.accept("invariant")) {
            NamedFormula f;
            const Token nt = ps.peek();
            f.name = ps.ident("invariant name");
            if (spec.find(f.name)) throw ParseError(nt.line, nt.col, "duplicate invariant '" + f.name + "'");
            if (ps.accept("(")) {
                if (!ps.is(")")) {
                    f.indexVars.push_back(ps.ident("tid variable"));
                    while (ps.accept(",")) f.indexVars.push_back(ps.ident("tid variable"));
                }
                ps.expect(")");
            }
            std::set<std::string> uniq(f.indexVars.begin(), f.indexVars.end());
            if (uniq.size() != f.indexVars.size()) throw ParseError(nt.line, nt.col, "repeated index variable in '" + f.name + "'");
            for (const auto& k : f.indexVars)
                if (program.findGlobal(k) || program.findLocal(k) || kReserved.contains(k))
                    throw ParseError(nt.line, nt.col, "index variable '" + k + "' clashes with a program name");
            ps.expect(":=");
            Scope sc{&program, f.indexVars, &spec.macros, false};
            f.body = ps.formula(sc);
            if (f.body->sort != Sort::Bool) throw ParseError(nt.line, nt.col, "invariant body is not a formula");
            if (freeTids(f.body) != uniq) {
                throw ArityError("invariant '" + f.name + "' declares " + std::to_string(f.indexVars.size()) +
                                 " index variables but its body uses " + std::to_string(freeTids(f.body).size()));
            }
            spec.invariants.push_back(std::move(f));
        } else {
            throw ParseError(at.line, at.col, "expected 'macro' or 'invariant', found '" + at.text + "'");
        }
    }
    return spec;
}

// ---- proof graphs ----------------------------------------------------------

namespace {

class GraphScanner {
public:
    explicit GraphScanner(std::string_view text) : text_(text) {}

    void skipWs()
    {
        while (i_ < text_.size()) {
            const char c = text_[i_];
            if (c == '#') {
                while (i_ < text_.size() && text_[i_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    bool atEnd()
    {
        skipWs();
        return i_ >= text_.size();
    }

    bool accept(std::string_view s)
    {
        skipWs();
        if (text_.substr(i_).starts_with(s)) {
            for (std::size_t k = 0; k < s.size(); ++k) bump();
            return true;
        }
        return false;
    }

    bool peekIs(char c)
    {
        skipWs();
        return i_ < text_.size() && text_[i_] == c;
    }

    bool peekDigit()
    {
        skipWs();
        return i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]));
    }

    [[noreturn]] void fail(const std::string& expected)
    {
        skipWs();
        std::string found = i_ < text_.size() ? std::string("'") + text_[i_] + "'" : "end of input";
        throw ParseError(line_, col_, "expected " + expected + ", found " + found);
    }

    void expect(std::string_view s)
    {
        if (!accept(s)) fail("'" + std::string(s) + "'");
    }

    std::string name()
    {
        skipWs();
        std::size_t j = i_;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        if (j == i_ || std::isdigit(static_cast<unsigned char>(text_[i_]))) fail("invariant name");
        std::string out(text_.substr(i_, j - i_));
        while (i_ < j) bump();
        return out;
    }

    int number()
    {
        skipWs();
        std::size_t j = i_;
        while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
        if (j == i_) fail("location");
        int v = std::stoi(std::string(text_.substr(i_, j - i_)));
        while (i_ < j) bump();
        return v;
    }

    /// Contents of a `{ ... }` hint with all whitespace removed.
    std::string hint()
    {
        expect("{");
        std::string out;
        while (i_ < text_.size() && text_[i_] != '}') {
            if (!std::isspace(static_cast<unsigned char>(text_[i_]))) out += text_[i_];
            bump();
        }
        if (i_ >= text_.size()) fail("'}'");
        bump();
        return out;
    }

    /// Position snapshot for one-token lookahead.
    std::tuple<std::size_t, int, int> save() const { return {i_, line_, col_}; }
    void restore(const std::tuple<std::size_t, int, int>& s) { std::tie(i_, line_, col_) = s; }

    int line() const { return line_; }
    int col() const { return col_; }

private:
    void bump()
    {
        if (text_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++i_;
    }

    std::string_view text_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

Annotation parseAnnotation(GraphScanner& sc)
{
    Annotation a;
    if (!sc.accept("*")) {
        if (!sc.peekDigit()) sc.fail("location or '*'");
        a.location = sc.number();
    }
    sc.expect(":");
    const auto snap = sc.save();
    if ((sc.accept("N") || sc.accept("E"))) {
        // Only a premise class when followed by ':'.
        const auto after = sc.save();
        sc.restore(snap);
        sc.skipWs();
        const bool isN = sc.accept("N");
        if (!isN) sc.accept("E");
        if (sc.accept(":")) {
            a.premise = isN ? PremiseClass::SameThread : PremiseClass::FreshThread;
        } else {
            (void)after;
            sc.restore(snap);
        }
    }
    a.supports.push_back(sc.name());
    while (sc.accept(",")) a.supports.push_back(sc.name());
    if (sc.peekIs('{')) a.tacticHint = sc.hint();
    return a;
}

} // namespace

ProofGraph parseProofGraph(std::string_view text)
{
    GraphScanner sc(text);
    ProofGraph g;
    std::vector<std::tuple<std::string, std::string, int, int>> refs;
    while (!sc.atEnd()) {
        sc.expect("->");
        GraphNode node;
        const int line = sc.line(), col = sc.col();
        node.name = sc.name();
        if (g.find(node.name)) throw ParseError(line, col, "duplicate node '" + node.name + "'");
        if (sc.accept("[")) {
            if (!sc.peekIs(']')) {
                node.annotations.push_back(parseAnnotation(sc));
                while (sc.accept(";")) {
                    if (sc.peekIs(']')) break;
                    node.annotations.push_back(parseAnnotation(sc));
                }
            }
            sc.expect("]");
        }
        if (sc.peekIs('{')) node.tacticHint = sc.hint();
        for (const auto& a : node.annotations)
            for (const auto& s : a.supports) refs.emplace_back(s, node.name, line, col);
        g.nodes.push_back(std::move(node));
    }
    for (const auto& [from, to, line, col] : refs) {
        if (!g.find(from))
            throw DanglingSupportName(std::to_string(line) + ":" + std::to_string(col) + ": support '" + from +
                                      "' of '" + to + "' is not a node");
        std::pair<std::string, std::string> e{from, to};
        if (std::find(g.edges.begin(), g.edges.end(), e) == g.edges.end()) g.edges.push_back(std::move(e));
    }
    return g;
}

// ---- printers ---------------------------------------------------------------

namespace {

std::string declString(const VarDecl& d, std::string_view own)
{
    std::string s = std::string(d.sort == Sort::Int ? "int" : d.sort == Sort::SetInt ? "set" : "bool") + " " + d.name;
    if (d.init) s += " := " + toString(*d.init, own);
    return s;
}

std::string assignmentsString(const std::vector<Assignment>& eff)
{
    std::string s;
    for (std::size_t i = 0; i < eff.size(); ++i) {
        if (i) s += "; ";
        s += eff[i].target.name + " := " + toString(eff[i].value, kSelf);
    }
    return s;
}

bool isTrue(const Formula& f) { return f->op == Op::BoolLit && f->value == 1; }

} // namespace

std::string printProgram(const ParamProgram& p)
{
    std::ostringstream os;
    os << "program " << p.name << "\n\n";
    if (!p.globals.empty()) {
        os << "global\n";
        for (const auto& g : p.globals) os << "  " << declString(g, {}) << "\n";
        os << "\n";
    }
    os << "procedure main()\n";
    bool anyLocal = false;
    for (const auto& l : p.locals) anyLocal = anyLocal || l.name != kPc;
    if (anyLocal) {
        os << "  local\n";
        for (const auto& l : p.locals)
            if (l.name != kPc) os << "    " << declString(l, kSelf) << "\n";
    }
    os << "  begin\n";
    for (int loc = 1; loc <= p.maxLocation; ++loc) {
        std::vector<const Transition*> arms;
        for (const auto& t : p.transitions)
            if (t.location == loc) arms.push_back(&t);
        os << "    " << loc << ": ";
        if (arms.size() == 1) {
            const Transition& t = *arms[0];
            const bool seq = t.nextLoc == loc + 1;
            if (t.effect.empty() && isTrue(t.guard)) {
                if (seq) {
                    os << "skip" << (t.label.empty() ? "" : " " + t.label);
                } else {
                    os << "goto " << t.nextLoc;
                }
            } else if (t.effect.empty() && seq) {
                os << "await " << toString(t.guard, kSelf);
            } else if (isTrue(t.guard) && seq) {
                if (t.effect.size() == 1) {
                    os << assignmentsString(t.effect);
                } else {
                    os << "{ " << assignmentsString(t.effect) << " }";
                }
            } else {
                os << "when " << toString(t.guard, kSelf);
                if (!t.effect.empty()) os << " do { " << assignmentsString(t.effect) << " }";
                if (!seq) os << " goto " << t.nextLoc;
            }
        } else if (arms.size() == 2 && arms[0]->effect.empty() && arms[1]->effect.empty()) {
            const Formula& g = arms[0]->guard;
            if (isTrue(g) && isTrue(arms[1]->guard)) {
                os << "if * then " << arms[0]->nextLoc << " else " << arms[1]->nextLoc;
            } else if (arms[1]->guard->op == Op::Not && equal(arms[1]->guard->args[0], g)) {
                os << "if " << toString(g, kSelf) << " then " << arms[0]->nextLoc << " else " << arms[1]->nextLoc;
            } else {
                throw Error("location " + std::to_string(loc) + " has branch arms that no statement form expresses");
            }
        } else {
            throw Error("location " + std::to_string(loc) + " has " + std::to_string(arms.size()) +
                        " transitions that no statement form expresses");
        }
        os << "\n";
    }
    os << "  end\n";
    return os.str();
}

std::string printSpec(const SpecFile& s)
{
    std::ostringstream os;
    for (const auto& m : s.macros) {
        os << "macro " << m.name << "(" << m.tidParam << ") := pc(" << m.tidParam << ") in {";
        for (std::size_t i = 0; i < m.locations.size(); ++i) os << (i ? ", " : "") << m.locations[i];
        os << "}\n";
    }
    for (const auto& f : s.invariants) {
        os << "invariant " << f.name;
        if (!f.indexVars.empty()) {
            os << "(";
            for (std::size_t i = 0; i < f.indexVars.size(); ++i) os << (i ? ", " : "") << f.indexVars[i];
            os << ")";
        }
        os << " := " << toString(f.body) << "\n";
    }
    return os.str();
}

std::string printProofGraph(const ProofGraph& g)
{
    std::ostringstream os;
    for (const auto& n : g.nodes) {
        os << "-> " << n.name;
        if (!n.annotations.empty()) {
            os << " [";
            for (std::size_t i = 0; i < n.annotations.size(); ++i) {
                const auto& a = n.annotations[i];
                if (i) os << ";\n" << std::string(n.name.size() + 5, ' ');
                os << (a.location ? std::to_string(*a.location) : "*") << ":";
                if (a.premise == PremiseClass::SameThread) os << "N:";
                if (a.premise == PremiseClass::FreshThread) os << "E:";
                for (std::size_t k = 0; k < a.supports.size(); ++k) os << (k ? ", " : "") << a.supports[k];
                if (a.tacticHint) os << " {" << *a.tacticHint << "}";
            }
            os << "]";
        }
        if (n.tacticHint) os << " {" << *n.tacticHint << "}";
        os << "\n";
    }
    return os.str();
}

// ---- symmetry gate ------------------------------------------------------------

namespace {

const Expr* findAsymmetry(const Expr& e, const Expr* enclosingAtom)
{
    const Expr* atom = isAtomicFormula(e) ? &e : enclosingAtom;
    if (e->op == Op::TidConst) return atom ? atom : &e;
    if (e->op == Op::Var && e->var.kind == VarKind::LocalConcrete) return atom ? atom : &e;
    if ((e->op == Op::Lt || e->op == Op::Le) && e->args[0]->sort == Sort::Tid) return &e;
    for (const auto& a : e->args)
        if (const Expr* w = findAsymmetry(a, atom)) return w;
    return nullptr;
}

} // namespace

SymmetryVerdict checkFullSymmetry(const ParamProgram& p, const std::vector<Formula>& formulas)
{
    auto check = [](const Expr& e, const std::string& where, std::string_view own) -> std::optional<SymmetryVerdict> {
        if (const Expr* w = findAsymmetry(e, nullptr)) return SymmetryVerdict{false, toString(*w, own), where};
        return std::nullopt;
    };
    if (auto v = check(p.thetaGlobal, "initial condition", {})) return *v;
    if (auto v = check(p.thetaLocal, "initial condition", kSelf)) return *v;
    for (const auto& t : p.transitions) {
        const std::string where = "location " + std::to_string(t.location);
        if (auto v = check(t.guard, "guard at " + where, kSelf)) return *v;
        for (const auto& a : t.effect)
            if (auto v = check(a.value, "effect at " + where, kSelf)) return *v;
    }
    for (std::size_t i = 0; i < formulas.size(); ++i)
        if (auto v = check(formulas[i], "formula #" + std::to_string(i + 1), {})) return *v;
    return {};
}

SymmetryVerdict checkFullSymmetry(const ParamProgram& p, const SpecFile& spec)
{
    std::vector<Formula> fs;
    for (const auto& f : spec.invariants) fs.push_back(f.body);
    auto v = checkFullSymmetry(p, fs);
    if (!v.symmetric && v.where.starts_with("formula #")) {
        const auto idx = std::stoul(v.where.substr(9)) - 1;
        v.where = "invariant " + spec.invariants[idx].name;
    }
    return v;
}

} // namespace pinv
