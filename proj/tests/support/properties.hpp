#pragma once

// Property suites that need no SMT solver. Each returns a summary so that
// both the unit tests and the acceptance driver can report on it.

#include <cstdint>
#include <string>
#include <vector>

namespace pinv::testing {

struct PropertyResult {
    std::string name;
    bool ok = true;
    std::size_t cases = 0;
    std::string detail;  // first failure
};

/// swap(i,j) applied twice is the identity; concretizing then renaming
/// threads equals concretizing with the composed assignment; printing then
/// parsing yields the same formula.
PropertyResult substitutionRoundTrip(std::uint64_t seed, int cases);

/// pres(V \ {bag, pc[0]}) over CriticalSect[2] expands to exactly
/// avail'=avail, ticket'[0]=ticket[0], pc'[1]=pc[1], ticket'[1]=ticket[1].
PropertyResult presGolden();

/// The array form of tau3(k) with k := 0 over two threads expands to the
/// literal relation of tau3[0].
PropertyResult concretizationBaseCase();

/// On every explored state of CriticalSect[3] swapping two threads twice is
/// the identity and the swapped state is itself reachable.
PropertyResult swapInvolution();

/// The position DP never reports Valid for a VC the evaluator falsifies,
/// and (location-only input) reports Valid whenever the evaluator agrees.
PropertyResult positionDpSoundness(std::uint64_t seed, int cases);

std::vector<PropertyResult> runSolverFreeSuites();

} // namespace pinv::testing
