#pragma once

// The proof rules p-inv, sp-inv and g-inv, and concretization of their
// parametrized premises into finite sets of array-free VCs.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pinv/frontend.hpp"
#include "pinv/tactics.hpp"
#include "pinv/vc.hpp"

namespace pinv {

/// One premise before concretization.
struct ParametrizedPremise {
    std::string invariant;
    Rule rule = Rule::PInv;
    Premise premise = Premise::P1;
    std::optional<int> transitionLoc;
    int arm = 0;
    std::string actingVar;  // empty for initiation
    /// Formula variables followed by the fresh thread variable, if any.
    std::vector<std::string> tidVars;
    std::vector<std::string> supports;  // instance labels
    Formula hypothesis;                 // in array form
    Formula conclusion;
    std::size_t assignments = 0;  // m^m
    std::vector<std::string> vcIds;  // surviving concretizations
};

struct VcSet {
    std::vector<ParametrizedPremise> premises;
    std::vector<VerificationCondition> vcs;
    std::vector<std::string> warnings;
    /// S0 obligations: supports assumed proven.
    std::vector<std::string> obligations;
    std::size_t concretizationsBeforeDedup = 0;
};

struct RuleOptions {
    SupportTactic tactic;
};

VcSet pInv(const ParamProgram& p, const NamedFormula& phi, const RuleOptions& opts = {});

VcSet spInv(const ParamProgram& p, const NamedFormula& phi, const std::vector<const NamedFormula*>& supports,
            const RuleOptions& opts = {});

/// VCs for every node of `graph`, in node order.
VcSet gInv(const ParamProgram& p, const ProofGraph& graph, const SpecFile& specs, const RuleOptions& opts = {});

/// Concretizes a parametrized implication over `tidVars` with every
/// assignment tidVars -> [m]; returns one entry per assignment that survives
/// deduplication modulo thread renaming, with its assignment.
struct Concretization {
    std::map<std::string, int> assignment;
    Formula hypothesis;
    Formula conclusion;
};
std::vector<Concretization> concretize(const Formula& hypothesis, const Formula& conclusion,
                                       const std::vector<std::string>& tidVars);

/// A tid variable name not in `taken`.
std::string freshTidName(const std::set<std::string>& taken);

} // namespace pinv
