#include <benchmark/benchmark.h>

#include <map>
#include <string>

#include "pinv/frontend.hpp"
#include "pinv/oracle.hpp"
#include "pinv/rules.hpp"
#include "pinv/solve.hpp"
#include "pinv/tactics.hpp"

using namespace pinv;

namespace {

struct Protocol {
    ParamProgram program;
    SpecFile spec;
    ProofGraph graph;
};

const Protocol& protocol(const std::string& stem)
{
    static std::map<std::string, Protocol> cache;
    auto it = cache.find(stem);
    if (it != cache.end()) return it->second;
    const std::string base = std::string(PINV_CORPUS_DIR) + "/" + stem;
    Protocol p;
    p.program = parseProgram({readFile(base + ".prg"), stem + ".prg"});
    p.spec = parseSpec(readFile(base + ".inv"), p.program);
    p.graph = parseProofGraph(readFile(base + ".graph"));
    return cache.emplace(stem, std::move(p)).first->second;
}

void BM_PInvMutex(benchmark::State& state)
{
    const Protocol& p = protocol("critical_sect");
    const NamedFormula* mutex = p.spec.find("mutex");
    for (auto _ : state) benchmark::DoNotOptimize(pInv(p.program, *mutex));
}
BENCHMARK(BM_PInvMutex);

void BM_GInvGraph(benchmark::State& state)
{
    const Protocol& p = protocol("critical_int_sect");
    std::size_t vcs = 0;
    for (auto _ : state) {
        const VcSet s = gInv(p.program, p.graph, p.spec);
        vcs = s.vcs.size();
        benchmark::DoNotOptimize(s);
    }
    state.counters["vcs"] = static_cast<double>(vcs);
}
BENCHMARK(BM_GInvGraph);

// Position DP over the simplified, non-trivial VCs of the graph proof.
void BM_PositionDp(benchmark::State& state)
{
    const Protocol& p = protocol("critical_int_sect");
    const VcSet s = gInv(p.program, p.graph, p.spec);
    std::vector<std::pair<Formula, Formula>> work;
    for (const auto& vc : s.vcs) {
        const auto simp = simplifyVc(vc.hypothesis(), vc.conclusion);
        if (!simp.triviallyValid) work.emplace_back(simp.hypothesis, simp.conclusion);
    }
    for (auto _ : state)
        for (const auto& [h, c] : work) benchmark::DoNotOptimize(positionDP(h, c, p.program.maxLocation));
    state.counters["vcs"] = static_cast<double>(work.size());
}
BENCHMARK(BM_PositionDp);

void BM_OracleExplore(benchmark::State& state)
{
    const Protocol& p = protocol("critical_int_sect");
    OracleConfig cfg;
    cfg.threads = static_cast<int>(state.range(0));
    cfg.intBound = static_cast<int>(state.range(1));
    std::size_t states = 0;
    for (auto _ : state) {
        const Exploration ex = explore(p.program, cfg);
        states = ex.states.size();
        benchmark::DoNotOptimize(ex);
    }
    state.counters["states"] = static_cast<double>(states);
}
BENCHMARK(BM_OracleExplore)->Args({2, 5})->Args({3, 5})->Args({3, 6});

} // namespace

BENCHMARK_MAIN();
