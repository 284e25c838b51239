#pragma once

// Shared helpers for the test suites: corpus loading and random formulas.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pinv/frontend.hpp"
#include "pinv/ir.hpp"

namespace pinv::testing {

std::string corpusPath(const std::string& file);

struct Protocol {
    ParamProgram program;
    SpecFile spec;
    ProofGraph graph;
};

/// Loads corpus/<stem>.prg, .inv and .graph.
Protocol loadProtocol(const std::string& stem);

/// Random well-sorted formulas over the CriticalSect vocabulary (avail, bag,
/// ticket, pc) with the given tid variables.
class FormulaGen {
public:
    FormulaGen(const ParamProgram& p, std::vector<std::string> tids, std::uint64_t seed);

    Formula formula(int depth);
    Expr intTerm(int depth);
    Expr setTerm(int depth);
    Formula atom();

private:
    std::string tid();
    int pick(int n);

    const ParamProgram& program_;
    std::vector<std::string> tids_;
    std::mt19937_64 rng_;
};

/// Random location-only implication over concrete program counters
/// pc[0..threads-1] and their primed copies.
struct LocationVc {
    Formula hypothesis;
    Formula conclusion;
};
LocationVc randomLocationVc(std::mt19937_64& rng, int threads, int maxLocation);

} // namespace pinv::testing
