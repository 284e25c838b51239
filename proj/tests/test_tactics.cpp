#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "pinv/eval.hpp"
#include "pinv/tactics.hpp"

using namespace pinv;
using pinv::testing::FormulaGen;
using pinv::testing::loadProtocol;

namespace {

const char* kListFragment = R"(
-> fullPreserve
-> fullRegion
-> fullDisjoint
-> fullLock
-> fullNext [ 5:N:fullPreserve;
             34:N:fullRegion;
             34:E:fullRegion,fullDisjoint;
             35:E:fullLock,fullRegion ]
)";

struct Candidates {
    std::vector<NamedFormula> formulas;
    std::vector<SupportCandidate> list;
};

/// Supports of `node` with the annotations naming each of them.
Candidates candidatesFor(const ProofGraph& g, const std::string& node)
{
    Candidates c;
    const auto names = g.supportsOf(node);
    c.formulas.reserve(names.size());
    for (const auto& n : names) c.formulas.push_back(NamedFormula{n, {}, mk::boolLit(true)});
    for (const auto& f : c.formulas) {
        SupportCandidate s{&f, {}};
        for (const auto& a : g.find(node)->annotations)
            if (std::find(a.supports.begin(), a.supports.end(), f.name) != a.supports.end()) s.annotations.push_back(a);
        c.list.push_back(s);
    }
    return c;
}

std::vector<std::string> sorted(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

/// Independent read-set extraction: every program variable name below `e`.
void reads(const Expr& e, std::set<std::string>& out)
{
    if (e->op == Op::Var) out.insert(e->var.name);
    for (const auto& a : e->args) reads(a, out);
}

std::set<std::string> writes(const Transition& t)
{
    std::set<std::string> out{"pc"};
    for (const auto& a : t.effect) out.insert(a.target.name);
    return out;
}

bool intersects(const std::set<std::string>& a, const std::set<std::string>& b)
{
    return std::any_of(a.begin(), a.end(), [&](const std::string& x) { return b.contains(x); });
}

/// Random value for a concrete variable, stable per key within one valuation.
struct RandomValuation {
    std::mt19937_64& rng;
    int maxLoc;
    std::map<std::string, Value> cache;

    Value operator()(const VarRef& v)
    {
        const std::string key = varKey(v);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
        Value val;
        if (v.sort == Sort::Loc) {
            val = Value::number(1 + pick(maxLoc));
        } else if (v.sort == Sort::SetInt) {
            std::set<std::int64_t> s;
            for (int x = 0; x < 5; ++x)
                if (pick(2)) s.insert(x);
            val = Value::set(s);
        } else if (v.sort == Sort::Bool) {
            val = Value::boolean(pick(2));
        } else {
            val = Value::number(pick(5));
        }
        cache[key] = val;
        return val;
    }
};

} // namespace

TEST(SelectSupport, FullSuppUsesEverySupport)
{
    const ProofGraph g = parseProofGraph(kListFragment);
    const Candidates c = candidatesFor(g, "fullNext");
    Transition t;
    t.location = 12;
    PremiseContext ctx{Premise::S2, &t, nullptr};
    EXPECT_EQ(sorted(selectSupport(ctx, c.list, TacticMode::FullSupp)),
              sorted({"fullPreserve", "fullRegion", "fullDisjoint", "fullLock"}));
}

TEST(SelectSupport, SuppFollowsLocationAndPremiseClass)
{
    const ProofGraph g = parseProofGraph(kListFragment);
    const Candidates c = candidatesFor(g, "fullNext");
    Transition t;
    t.location = 34;
    EXPECT_EQ(selectSupport({Premise::G2, &t, nullptr}, c.list, TacticMode::Supp),
              std::vector<std::string>{"fullRegion"});
    EXPECT_EQ(sorted(selectSupport({Premise::G3, &t, nullptr}, c.list, TacticMode::Supp)),
              sorted({"fullRegion", "fullDisjoint"}));
    t.location = 5;
    EXPECT_EQ(selectSupport({Premise::G2, &t, nullptr}, c.list, TacticMode::Supp),
              std::vector<std::string>{"fullPreserve"});
    EXPECT_TRUE(selectSupport({Premise::G3, &t, nullptr}, c.list, TacticMode::Supp).empty());
    t.location = 99;
    EXPECT_TRUE(selectSupport({Premise::G2, &t, nullptr}, c.list, TacticMode::Supp).empty());
}

TEST(SelectSupport, InitiationNeverUsesSupport)
{
    const ProofGraph g = parseProofGraph(kListFragment);
    const Candidates c = candidatesFor(g, "fullNext");
    for (auto mode : {TacticMode::FullSupp, TacticMode::Supp, TacticMode::Offend, TacticMode::Lazy})
        EXPECT_TRUE(selectSupport({Premise::G1, nullptr, nullptr}, c.list, mode).empty());
}

TEST(SelectSupport, OffendMatchesReadWriteOracle)
{
    const auto proto = loadProtocol("critical_int_sect");
    std::vector<SupportCandidate> all;
    for (const auto& inv : proto.spec.invariants) all.push_back({&inv, {}});
    // A support that reads only globals.
    const NamedFormula globalOnly{"ticks", {}, mk::le(mk::global("setMin", Sort::Int), mk::global("tick", Sort::Int))};
    all.push_back({&globalOnly, {}});

    for (const auto& cand : proto.spec.invariants) {
        std::set<std::string> candReads;
        reads(cand.body, candReads);
        for (const auto& t : proto.program.transitions) {
            const auto w = writes(t);
            std::vector<std::string> expected;
            if (intersects(w, candReads)) {
                for (const auto& s : all) {
                    std::set<std::string> r;
                    reads(s.formula->body, r);
                    if (intersects(r, w)) expected.push_back(s.formula->name);
                }
            }
            EXPECT_EQ(potentiallyOffending(t, cand.body), intersects(w, candReads));
            EXPECT_EQ(sorted(selectSupport({Premise::S3, &t, &cand}, all, TacticMode::Offend)), sorted(expected))
                << cand.name << " at " << t.location;
        }
    }
}

TEST(SelectSupport, OffendDropsGlobalSupportOnPcOnlyStep)
{
    // tau1 writes only pc, so a support that reads only globals is dropped.
    const auto proto = loadProtocol("critical_int_sect");
    const NamedFormula globalOnly{"ticks", {}, mk::le(mk::global("setMin", Sort::Int), mk::global("tick", Sort::Int))};
    const NamedFormula& mutex = *proto.spec.find("mutex");
    const std::vector<SupportCandidate> sup{{&globalOnly, {}}, {proto.spec.find("notsame"), {}}};
    const auto chosen = selectSupport({Premise::S2, &proto.program.transitions[0], &mutex}, sup, TacticMode::Offend);
    EXPECT_EQ(chosen, std::vector<std::string>{"notsame"});
}

TEST(TacticHint, KnownAndUnknownTokens)
{
    const TacticHint h = parseTacticHint("pruning:reduce2|simpl");
    EXPECT_TRUE(h.simplify);
    EXPECT_FALSE(h.mode.has_value());
    EXPECT_EQ(h.unknownTokens, (std::vector<std::string>{"pruning", "reduce2"}));

    const TacticHint o = parseTacticHint("offend|simpl");
    EXPECT_EQ(o.mode, TacticMode::Offend);
    EXPECT_TRUE(o.unknownTokens.empty());
}

TEST(Simplify, LocationContradictionIsTriviallyValid)
{
    const Formula h = mk::conj({mk::eq(mk::pcAt(0), mk::locLit(3)), mk::eq(mk::pcAt(0), mk::locLit(5))});
    EXPECT_TRUE(simplifyVc(h, mk::eq(mk::global("x", Sort::Int), mk::intLit(7))).triviallyValid);
}

TEST(Simplify, SelfDistinctnessIsTriviallyValid)
{
    const Formula h = mk::conj({mk::ne(mk::tidConst(0), mk::tidConst(0)), mk::eq(mk::pcAt(1), mk::locLit(2))});
    EXPECT_TRUE(simplifyVc(h, mk::boolLit(false)).triviallyValid);
}

TEST(Simplify, PcFactPropagatesIntoConclusion)
{
    const Formula h = mk::eq(mk::pcAt(0), mk::locLit(4));
    const Formula c = mk::disj({mk::eq(mk::pcAt(0), mk::locLit(4)), mk::eq(mk::pcAt(1), mk::locLit(2))});
    EXPECT_TRUE(simplifyVc(h, c).triviallyValid);
}

TEST(Simplify, NonTrivialVcIsKept)
{
    const Formula h = mk::eq(mk::pcAt(0), mk::locLit(4));
    const Formula c = mk::eq(mk::pcAt(1), mk::locLit(2));
    EXPECT_FALSE(simplifyVc(h, c).triviallyValid);
}

TEST(Simplify, IdempotentOnRandomFormulas)
{
    const auto proto = loadProtocol("critical_sect");
    FormulaGen gen(proto.program, {"i", "j"}, 11);
    for (int c = 0; c < 400; ++c) {
        const Formula f = applySubst(gen.formula(4), Substitution::concrete({{"i", 0}, {"j", c % 2}}, 2));
        const Formula once = simplify(f);
        EXPECT_TRUE(equal(simplify(once), once)) << toString(f);
    }
}

TEST(Simplify, PreservesTruthOnRandomValuations)
{
    const auto proto = loadProtocol("critical_sect");
    FormulaGen gen(proto.program, {"i", "j"}, 23);
    std::mt19937_64 rng(5);
    for (int c = 0; c < 400; ++c) {
        const Formula f = applySubst(gen.formula(4), Substitution::concrete({{"i", 0}, {"j", c % 2}}, 2));
        const Formula s = simplify(f);
        for (int k = 0; k < 20; ++k) {
            RandomValuation val{rng, proto.program.maxLocation, {}};
            const Lookup look = [&](const VarRef& v) { return val(v); };
            ASSERT_EQ(holds(f, look), holds(s, look)) << toString(f) << "  vs  " << toString(s);
        }
    }
}

TEST(Simplify, TrivialVerdictImpliesValidity)
{
    // Whenever simplifyVc folds to true, no sampled valuation falsifies the VC.
    const auto proto = loadProtocol("critical_sect");
    FormulaGen gen(proto.program, {"i", "j"}, 31);
    std::mt19937_64 rng(9);
    int trivial = 0;
    for (int c = 0; c < 600; ++c) {
        const auto sub = Substitution::concrete({{"i", 0}, {"j", 1}}, 2);
        const Formula h = applySubst(mk::conj({gen.atom(), gen.atom(), gen.formula(2)}), sub);
        const Formula g = applySubst(gen.formula(2), sub);
        if (!simplifyVc(h, g).triviallyValid) continue;
        ++trivial;
        for (int k = 0; k < 30; ++k) {
            RandomValuation val{rng, proto.program.maxLocation, {}};
            const Lookup look = [&](const VarRef& v) { return val(v); };
            ASSERT_FALSE(holds(h, look) && !holds(g, look)) << toString(h) << " -> " << toString(g);
        }
    }
    EXPECT_GT(trivial, 0);
}

TEST(NormalizeOrder, ConjunctOrderDoesNotMatter)
{
    const Formula a = mk::eq(mk::pcAt(0), mk::locLit(1));
    const Formula b = mk::lt(mk::global("avail", Sort::Int), mk::intLit(3));
    EXPECT_TRUE(equal(normalizeOrder(mk::conj({a, b})), normalizeOrder(mk::conj({b, a}))));
    EXPECT_TRUE(equal(normalizeOrder(mk::disj({a, b})), normalizeOrder(mk::disj({b, a}))));
}
