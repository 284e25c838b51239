#include "fixtures.hpp"

#ifndef PINV_CORPUS_DIR
#error "PINV_CORPUS_DIR must be defined"
#endif

namespace pinv::testing {

std::string corpusPath(const std::string& file) { return std::string(PINV_CORPUS_DIR) + "/" + file; }

Protocol loadProtocol(const std::string& stem)
{
    Protocol p;
    p.program = parseProgram({readFile(corpusPath(stem + ".prg")), stem + ".prg"});
    p.spec = parseSpec(readFile(corpusPath(stem + ".inv")), p.program);
    p.graph = parseProofGraph(readFile(corpusPath(stem + ".graph")));
    return p;
}

FormulaGen::FormulaGen(const ParamProgram& p, std::vector<std::string> tids, std::uint64_t seed)
    : program_(p), tids_(std::move(tids)), rng_(seed)
{
}

int FormulaGen::pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

std::string FormulaGen::tid() { return tids_[static_cast<std::size_t>(pick(static_cast<int>(tids_.size())))]; }

Expr FormulaGen::setTerm(int depth)
{
    const int c = depth <= 0 ? pick(2) : pick(5);
    switch (c) {
    case 0: return mk::global("bag", Sort::SetInt, pick(4) == 0);
    case 1: return mk::emptySet();
    case 2: return mk::singleton(intTerm(depth - 1));
    case 3: return mk::unite(setTerm(depth - 1), setTerm(depth - 1));
    default: return mk::setDiff(setTerm(depth - 1), setTerm(depth - 1));
    }
}

Expr FormulaGen::intTerm(int depth)
{
    const int c = depth <= 0 ? pick(3) : pick(6);
    switch (c) {
    case 0: return mk::intLit(pick(5));
    case 1: return mk::global("avail", Sort::Int, pick(4) == 0);
    case 2: return mk::local("ticket", Sort::Int, tid(), pick(4) == 0);
    case 3: return mk::add(intTerm(depth - 1), intTerm(depth - 1));
    case 4: return mk::sub(intTerm(depth - 1), mk::intLit(1));
    default: return mk::setMin(setTerm(depth - 1));
    }
}

Formula FormulaGen::atom()
{
    switch (pick(6)) {
    case 0: return mk::eq(mk::pc(tid(), pick(3) == 0), mk::locLit(1 + pick(program_.maxLocation)));
    case 1: return mk::ne(mk::tidVar(tid()), mk::tidVar(tid()));
    case 2: return mk::lt(intTerm(1), intTerm(1));
    case 3: return mk::eq(intTerm(1), intTerm(1));
    case 4: return mk::member(intTerm(1), setTerm(1));
    default: return mk::eq(mk::pc(tid()), mk::pc(tid()));
    }
}

Formula FormulaGen::formula(int depth)
{
    if (depth <= 0) return atom();
    switch (pick(5)) {
    case 0: return mk::neg(formula(depth - 1));
    case 1: return mk::conj({formula(depth - 1), formula(depth - 1)});
    case 2: return mk::disj({formula(depth - 1), formula(depth - 1)});
    case 3: return mk::implies(formula(depth - 1), formula(depth - 1));
    default: return atom();
    }
}

namespace {

Formula locationFormula(std::mt19937_64& rng, int threads, int maxLocation, int depth)
{
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto pcTerm = [&] { return mk::pcAt(pick(threads), pick(2) == 0); };
    if (depth <= 0 || pick(3) == 0) {
        switch (pick(4)) {
        case 0: return mk::eq(pcTerm(), mk::locLit(1 + pick(maxLocation)));
        case 1: return mk::ne(pcTerm(), mk::locLit(1 + pick(maxLocation)));
        case 2: return mk::eq(pcTerm(), pcTerm());
        default: return mk::boolLit(pick(2) == 0);
        }
    }
    switch (pick(4)) {
    case 0: return mk::neg(locationFormula(rng, threads, maxLocation, depth - 1));
    case 1:
        return mk::conj({locationFormula(rng, threads, maxLocation, depth - 1),
                         locationFormula(rng, threads, maxLocation, depth - 1)});
    case 2:
        return mk::disj({locationFormula(rng, threads, maxLocation, depth - 1),
                         locationFormula(rng, threads, maxLocation, depth - 1)});
    default:
        return mk::implies(locationFormula(rng, threads, maxLocation, depth - 1),
                           locationFormula(rng, threads, maxLocation, depth - 1));
    }
}

} // namespace

LocationVc randomLocationVc(std::mt19937_64& rng, int threads, int maxLocation)
{
    LocationVc vc;
    std::vector<Formula> hyp;
    const int n = 1 + std::uniform_int_distribution<int>(0, 3)(rng);
    for (int i = 0; i < n; ++i) hyp.push_back(locationFormula(rng, threads, maxLocation, 3));
    vc.hypothesis = mk::conj(std::move(hyp));
    vc.conclusion = locationFormula(rng, threads, maxLocation, 3);
    return vc;
}

} // namespace pinv::testing
