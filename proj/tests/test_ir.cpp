#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pinv/errors.hpp"
#include "pinv/eval.hpp"
#include "pinv/ir.hpp"

using namespace pinv;
using pinv::testing::loadProtocol;

namespace {

const Transition& at(const ParamProgram& p, int loc)
{
    for (const auto& t : p.transitions)
        if (t.location == loc) return t;
    throw std::runtime_error("missing location");
}

std::set<std::string> conjunctStrings(const Formula& f)
{
    std::set<std::string> out;
    for (const auto& c : conjuncts(f)) out.insert(toString(c));
    return out;
}

} // namespace

TEST(Sorts, BuildersRejectIllSortedOperands)
{
    EXPECT_THROW(mk::add(mk::intLit(1), mk::emptySet()), SortError);
    EXPECT_THROW(mk::lt(mk::global("bag", Sort::SetInt), mk::intLit(1)), SortError);
    EXPECT_THROW(mk::neg(mk::intLit(3)), SortError);
    EXPECT_THROW(mk::setMin(mk::intLit(3)), SortError);
    EXPECT_EQ(mk::setMin(mk::emptySet())->sort, Sort::Int);
}

TEST(Sorts, LiteralsCoerceToLocations)
{
    const Formula f = mk::eq(mk::pc("i"), mk::intLit(4));
    EXPECT_EQ(f->args[1]->sort, Sort::Loc);
    EXPECT_TRUE(wellSorted(f));
}

TEST(FreeTids, MutexBodyHasBothIndices)
{
    const auto proto = loadProtocol("critical_sect");
    EXPECT_EQ(freeTids(proto.spec.find("mutex")->body), (std::set<std::string>{"i", "j"}));
}

TEST(FreeTids, GlobalOnlyFormulaIsZeroIndex)
{
    const Formula f = mk::lt(mk::intLit(0), mk::global("avail", Sort::Int));
    EXPECT_TRUE(freeTids(f).empty());
    EXPECT_EQ(indexOf(f), 0u);
}

TEST(FreeTids, RepeatedVariableCountsOnce)
{
    const Formula f = mk::conj({mk::eq(mk::pc("i"), mk::locLit(5)), mk::eq(mk::pc("i"), mk::locLit(6))});
    EXPECT_EQ(freeTids(f), (std::set<std::string>{"i"}));
}

TEST(ApplySubst, IndexedReadBecomesConcrete)
{
    const Formula p = mk::eq(mk::local("ticket", Sort::Int, "i"), mk::intLit(0));
    const Formula q = applySubst(p, Substitution::concrete({{"i", 0}}, std::nullopt));
    EXPECT_TRUE(equal(q, mk::eq(mk::localAt("ticket", Sort::Int, 0), mk::intLit(0))));
}

TEST(ApplySubst, IdentityLeavesFormulaUnchanged)
{
    const Formula p = mk::implies(mk::ne(mk::tidVar("i"), mk::tidVar("j")), mk::eq(mk::pc("i"), mk::pc("j")));
    EXPECT_TRUE(equal(applySubst(p, Substitution{}), p));
    Substitution id;
    id.mapping["i"] = mk::tidVar("i");
    EXPECT_TRUE(equal(applySubst(p, id), p));
}

TEST(ApplySubst, ArrayUpdateBaseCase)
{
    // pc' = pc{i <- 5} with i := 0 over two threads.
    const Formula upd = mk::arrayUpdate(VarRef{"pc", VarKind::LocalIndexed, "i", -1, false, Sort::Loc}, mk::tidVar("i"),
                                        mk::locLit(5));
    const Formula c = applySubst(upd, Substitution::concrete({{"i", 0}}, 2));
    const Formula expected = mk::conj({mk::eq(mk::pcAt(0, true), mk::locLit(5)), mk::eq(mk::pcAt(1, true), mk::pcAt(1))});
    EXPECT_EQ(conjunctStrings(c), conjunctStrings(expected));
}

TEST(ApplySubst, RejectsNonTidTargets)
{
    Substitution s;
    s.mapping["i"] = mk::intLit(0);
    EXPECT_THROW(applySubst(mk::eq(mk::pc("i"), mk::locLit(1)), s), SortError);
}

TEST(Pres, EmptyFrameIsTrue)
{
    const auto proto = loadProtocol("critical_sect");
    const std::vector<int> threads{0, 1};
    const Formula f = presExpand(proto.program, {}, threads);
    EXPECT_TRUE(holds(f, [](const VarRef&) -> Value { throw std::runtime_error("no variables expected"); }));
}

TEST(Pres, LocalUnrollsOverListedThreads)
{
    const auto proto = loadProtocol("critical_sect");
    const std::vector<int> threads{0, 1, 2};
    const Formula f = presExpand(proto.program, {"ticket"}, threads);
    std::set<std::string> expected;
    for (int a : threads)
        expected.insert(toString(mk::eq(mk::localAt("ticket", Sort::Int, a, true), mk::localAt("ticket", Sort::Int, a))));
    EXPECT_EQ(conjunctStrings(f), expected);
}

TEST(Pres, UnknownNameThrows)
{
    const auto proto = loadProtocol("critical_sect");
    const std::vector<int> threads{0};
    EXPECT_THROW(presExpand(proto.program, {"nosuch"}, threads), UnknownVariable);
}

TEST(Initial, SingleThreadMatchesHandWritten)
{
    const auto proto = loadProtocol("critical_sect");
    const std::vector<std::string> tids{"i"};
    const Formula init = buildInitial(proto.program, tids);
    const Formula expected = mk::conj({
        mk::eq(mk::global("avail", Sort::Int), mk::intLit(0)),
        mk::eq(mk::global("bag", Sort::SetInt), mk::emptySet()),
        mk::eq(mk::local("ticket", Sort::Int, "i"), mk::intLit(0)),
        mk::eq(mk::pc("i"), mk::locLit(1)),
    });
    EXPECT_EQ(conjunctStrings(init), conjunctStrings(expected));
    EXPECT_EQ(indexOf(init), 1u);
}

TEST(Initial, EmptyIndexSetIsGlobalPart)
{
    const auto proto = loadProtocol("critical_sect");
    const Formula init = buildInitial(proto.program, {});
    EXPECT_EQ(conjunctStrings(init), conjunctStrings(proto.program.thetaGlobal));
    EXPECT_EQ(indexOf(init), 0u);
}

TEST(Initial, IndexEqualsNumberOfThreads)
{
    const auto proto = loadProtocol("critical_int_sect");
    for (std::size_t n = 0; n <= 3; ++n) {
        std::vector<std::string> tids;
        for (std::size_t k = 0; k < n; ++k) tids.push_back("k" + std::to_string(k));
        EXPECT_EQ(indexOf(buildInitial(proto.program, tids)), n);
    }
}

TEST(Transitions, CriticalSectHasSevenPerThread)
{
    const auto proto = loadProtocol("critical_sect");
    EXPECT_EQ(proto.program.transitions.size(), 7u);
    EXPECT_EQ(proto.program.maxLocation, 7);
    for (int l = 1; l <= 7; ++l) EXPECT_EQ(proto.program.armsAt(l), 1);
}

TEST(Transitions, InstanceVariablesMatchHandWritten)
{
    // V = {avail, bag, ticket[0], ticket[1], pc[0], pc[1]}: every relation of
    // the two-thread instance mentions exactly these (primed or not).
    const auto proto = loadProtocol("critical_sect");
    std::set<std::string> vars;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        if (e->op == Op::Var) {
            VarRef v = e->var;
            v.primed = false;
            vars.insert(varKey(v));
        }
        for (const auto& a : e->args) walk(a);
    };
    int count = 0;
    for (int a = 0; a < 2; ++a)
        for (const auto& t : proto.program.transitions) {
            walk(concreteTransition(proto.program, t, a, 2));
            ++count;
        }
    EXPECT_EQ(count, 14);
    EXPECT_EQ(vars, (std::set<std::string>{"avail", "bag", "ticket[0]", "ticket[1]", "pc[0]", "pc[1]"}));
}

TEST(Transitions, PreservedCoversUnassignedVariables)
{
    const auto proto = loadProtocol("critical_sect");
    std::set<std::string> all;
    for (const auto& g : proto.program.globals) all.insert(g.name);
    for (const auto& l : proto.program.locals)
        if (l.name != "pc") all.insert(l.name);
    for (const auto& t : proto.program.transitions) {
        for (const auto& v : all) {
            const bool written = t.writeSet().contains(v);
            EXPECT_NE(written, t.preserved.contains(v)) << "location " << t.location << " variable " << v;
        }
    }
    EXPECT_EQ(at(proto.program, 3).preserved, std::set<std::string>{});
    EXPECT_EQ(at(proto.program, 6).preserved, (std::set<std::string>{"avail", "ticket"}));
}

TEST(Transitions, ConcreteRelationConstrainsOnlyItsThreadAndFrame)
{
    // Every primed variable of tau[a] is either written by the step or framed.
    const auto proto = loadProtocol("critical_int_sect");
    for (const auto& t : proto.program.transitions) {
        const Formula rel = concreteTransition(proto.program, t, 1, 3);
        std::set<std::string> constrained;
        for (const auto& c : conjuncts(rel))
            if (c->op == Op::Eq && c->args[0]->op == Op::Var && c->args[0]->var.primed)
                constrained.insert(varKey(c->args[0]->var));
        std::set<std::string> expected;
        for (const auto& g : proto.program.globals) expected.insert(g.name + "'");
        for (const auto& l : proto.program.locals)
            for (int a = 0; a < 3; ++a) expected.insert(l.name + "'[" + std::to_string(a) + "]");
        EXPECT_EQ(constrained, expected) << "location " << t.location;
    }
}

TEST(Prime, PrimesEveryProgramVariable)
{
    const Formula f = mk::lt(mk::local("ticket", Sort::Int, "i"), mk::global("avail", Sort::Int));
    const Formula g = prime(f);
    EXPECT_TRUE(g->args[0]->var.primed);
    EXPECT_TRUE(g->args[1]->var.primed);
    EXPECT_EQ(readSet(g), (std::set<std::string>{"avail", "ticket"}));
}

TEST(Eval, EmptyMinimumComparesAboveEverything)
{
    const Lookup none = [](const VarRef&) -> Value { throw std::runtime_error("unused"); };
    EXPECT_TRUE(holds(mk::lt(mk::intLit(1000000), mk::setMin(mk::emptySet())), none));
    EXPECT_EQ(evaluate(mk::setMin(mk::unite(mk::singleton(mk::intLit(3)), mk::singleton(mk::intLit(2)))), none).num, 2);
}

TEST(Eval, VarKeysUseBracketsForThreads)
{
    EXPECT_EQ(varKey(VarRef{"ticket", VarKind::LocalConcrete, {}, 1, true, Sort::Int}), "ticket'[1]");
    EXPECT_EQ(varKey(VarRef{"avail", VarKind::Global, {}, -1, false, Sort::Int}), "avail");
}
