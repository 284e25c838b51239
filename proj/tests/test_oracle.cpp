#include <gtest/gtest.h>

#include <array>
#include <deque>
#include <set>

#include "fixtures.hpp"
#include "pinv/errors.hpp"
#include "pinv/oracle.hpp"
#include "properties.hpp"

using namespace pinv;
using pinv::testing::loadProtocol;

namespace {

/// Hand-written reachability for CriticalIntSect, independent of the
/// program compiler and stepper: (tick, setMin, pc[0], ticket[0], ...).
std::size_t handReachable(int threads, int bound)
{
    using S = std::vector<int>;
    S init{0, 0};
    for (int a = 0; a < threads; ++a) init.insert(init.end(), {1, 0});
    std::set<S> seen{init};
    std::deque<S> queue{init};
    while (!queue.empty()) {
        const S s = queue.front();
        queue.pop_front();
        for (int a = 0; a < threads; ++a) {
            const std::size_t pc = 2 + 2 * static_cast<std::size_t>(a), tk = pc + 1;
            S n = s;
            switch (s[pc]) {
            case 1: n[pc] = 2; break;
            case 2: n[pc] = 3; break;
            case 3:
                if (s[0] + 1 >= bound) continue;
                n[tk] = s[0];
                n[0] = s[0] + 1;
                n[pc] = 4;
                break;
            case 4:
                if (s[tk] != s[1]) continue;
                n[pc] = 5;
                break;
            case 5: n[pc] = 6; break;
            case 6:
                if (s[1] + 1 >= bound) continue;
                n[1] = s[1] + 1;
                n[pc] = 7;
                break;
            default: n[pc] = 1; break;
            }
            if (seen.insert(n).second) queue.push_back(n);
        }
    }
    return seen.size();
}

CounterModel model(const std::map<std::string, std::int64_t>& values)
{
    CounterModel m;
    for (const auto& [k, v] : values) m.assignments[k] = Value::number(v);
    return m;
}

} // namespace

TEST(Oracle, ReachableCountsMatchHandWrittenModel)
{
    const auto proto = loadProtocol("critical_int_sect");
    for (int n : {1, 2, 3}) {
        for (int b : {3, 5}) {
            OracleConfig cfg;
            cfg.threads = n;
            cfg.intBound = b;
            const Exploration ex = explore(proto.program, cfg);
            EXPECT_EQ(ex.states.size(), handReachable(n, b)) << "N=" << n << " B=" << b;
            EXPECT_EQ(ex.initialCount, 1u);
            EXPECT_TRUE(ex.bounded);
        }
    }
}

TEST(Oracle, CorpusInvariantsHoldOnSmallInstances)
{
    for (const char* stem : {"critical_int_sect", "critical_sect"}) {
        const auto proto = loadProtocol(stem);
        for (int n : {2, 3}) {
            OracleConfig cfg;
            cfg.threads = n;
            cfg.intBound = 5;
            const Exploration ex = explore(proto.program, cfg);
            for (const auto& inv : proto.spec.invariants) {
                const auto r = checkInvariant(ex, inv);
                EXPECT_TRUE(r.holds) << stem << " " << inv.name << " N=" << n;
            }
        }
    }
}

TEST(Oracle, ViolationComesWithWitnessAndTrace)
{
    const auto proto = loadProtocol("critical_int_sect");
    const SpecFile bad = parseSpec("invariant nevercrit(i) := pc(i) != 5", proto.program);
    OracleConfig cfg;
    cfg.threads = 2;
    const Exploration ex = explore(proto.program, cfg);
    const auto r = checkInvariant(ex, bad.invariants[0]);
    ASSERT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    const auto trace = tracePrefix(ex, *r.witness);
    // Shortest path: tau1, tau2, tau3, tau4 of one thread.
    EXPECT_EQ(trace.size(), 4u);
    const auto values = stateValues(ex, *r.witness);
    const int a = r.assignment.at("i");
    EXPECT_EQ(values.at("pc[" + std::to_string(a) + "]"), Value::number(5));
}

TEST(Oracle, StateCapRaisesStateExplosion)
{
    const auto proto = loadProtocol("critical_sect");
    OracleConfig cfg;
    cfg.threads = 3;
    cfg.intBound = 5;
    cfg.maxStates = 50;
    EXPECT_THROW(explore(proto.program, cfg), StateExplosion);
}

TEST(Oracle, LayoutSwapExchangesThreadLocals)
{
    const auto proto = loadProtocol("critical_int_sect");
    const StateLayout layout(proto.program, 3);
    ConcreteState s(layout.size(), 0);
    s[*layout.slot("pc", 0)] = 4;
    s[*layout.slot("ticket", 0)] = 2;
    s[*layout.slot("pc", 2)] = 6;
    s[*layout.slot("tick", -1)] = 3;
    const ConcreteState t = layout.swap(s, 0, 2);
    EXPECT_EQ(t[*layout.slot("pc", 2)], 4);
    EXPECT_EQ(t[*layout.slot("ticket", 2)], 2);
    EXPECT_EQ(t[*layout.slot("pc", 0)], 6);
    EXPECT_EQ(t[*layout.slot("tick", -1)], 3);
    EXPECT_EQ(layout.swap(t, 0, 2), s);
}

TEST(Oracle, SwapInvolutionOnExploredStates)
{
    const auto r = pinv::testing::swapInvolution();
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_GT(r.cases, 0u);
}

TEST(Oracle, SymmetryHoldsEmpirically)
{
    for (const char* stem : {"critical_int_sect", "critical_sect"}) {
        const auto proto = loadProtocol(stem);
        OracleConfig cfg;
        cfg.threads = 3;
        cfg.intBound = 4;
        const Exploration ex = explore(proto.program, cfg);
        const SymmetryReport rep = checkSymmetry(proto.program, ex, proto.spec.invariants, 200);
        EXPECT_TRUE(rep.ok) << rep.counterexample;
        EXPECT_GT(rep.triplesChecked, 0u);
    }
}

TEST(Classify, TicketCounterModelsAreSpurious)
{
    // Thread 0 takes tau4 while thread 1 is critical.
    const auto proto = loadProtocol("critical_int_sect");
    OracleConfig cfg;
    cfg.threads = 2;
    cfg.intBound = 4;
    const Exploration ex = explore(proto.program, cfg);
    for (int otherTicket : {3, 1}) {
        const CounterModel m = model({{"pc[0]", 4},
                                      {"pc[1]", 5},
                                      {"setMin", 1},
                                      {"tick", 2},
                                      {"ticket[0]", 1},
                                      {"ticket[1]", otherTicket},
                                      {"pc'[0]", 5},
                                      {"pc'[1]", 5},
                                      {"setMin'", 1},
                                      {"tick'", 2},
                                      {"ticket'[0]", 1},
                                      {"ticket'[1]", otherTicket}});
        const ClassifyResult r = classifyCounterModel(m, proto.program, ex);
        EXPECT_EQ(r.verdict, Classification::Spurious) << "ticket(j) = " << otherTicket;
        EXPECT_FALSE(r.matchedState.has_value());
    }
}

TEST(Classify, ReachableScenarioIsRecognised)
{
    // Thread 1 holds ticket 0 at location 4 and enters; thread 0 idles.
    const auto proto = loadProtocol("critical_int_sect");
    OracleConfig cfg;
    cfg.threads = 2;
    cfg.intBound = 4;
    const Exploration ex = explore(proto.program, cfg);
    const CounterModel m = model({{"pc[0]", 1}, {"pc[1]", 4}, {"setMin", 0}, {"tick", 1}, {"ticket[0]", 0},
                                  {"ticket[1]", 0}, {"pc'[1]", 5}, {"pc'[0]", 1}});
    const ClassifyResult r = classifyCounterModel(m, proto.program, ex);
    EXPECT_EQ(r.verdict, Classification::Reachable);
    EXPECT_TRUE(r.stepMatches);
    ASSERT_TRUE(r.matchedState.has_value());
}

TEST(Classify, OutOfBoundValuesWarn)
{
    const auto proto = loadProtocol("critical_int_sect");
    OracleConfig cfg;
    cfg.threads = 2;
    cfg.intBound = 3;
    const Exploration ex = explore(proto.program, cfg);
    const CounterModel m = model({{"pc[0]", 4}, {"ticket[0]", 9}});
    const ClassifyResult r = classifyCounterModel(m, proto.program, ex);
    EXPECT_EQ(r.verdict, Classification::Spurious);
    ASSERT_FALSE(r.warnings.empty());
    EXPECT_NE(r.warnings[0].find("BoundTooSmall"), std::string::npos);
}
