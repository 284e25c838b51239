#pragma once

// Verification conditions and the vocabulary shared by rules, tactics and
// the decision procedures.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinv/ir.hpp"

namespace pinv {

enum class Rule { PInv, SpInv, GInv };
enum class Premise { P1, P2, P3, S0, S1, S2, S3, G1, G2, G3 };
enum class TheoryClass { PositionOnly, IntAndSets, Unsupported };

std::string_view ruleName(Rule r);
std::string_view premiseName(Premise p);
std::string_view theoryClassName(TheoryClass c);

/// Premise family: initiation, consecution by a formula thread, or
/// consecution by a fresh thread.
enum class PremiseKind { Initiation, SameThread, FreshThread };
PremiseKind premiseKind(Premise p);

enum class TacticMode { FullSupp, Supp, Offend, Lazy };
std::string_view tacticName(TacticMode m);
std::optional<TacticMode> parseTacticName(std::string_view s);

struct SupportTactic {
    TacticMode mode = TacticMode::FullSupp;
    bool simplify = true;
};

struct Provenance {
    Rule rule = Rule::PInv;
    Premise premise = Premise::P1;
    std::optional<int> transitionLoc;
    int arm = 0;
    /// Concrete id of the stepping thread; -1 for initiation.
    int actingThread = -1;
    /// Tid variable -> concrete id.
    std::map<std::string, int> assignment;
    /// Support instances, e.g. "notsame(i,k)", parametrized over the premise's variables.
    std::vector<std::string> supports;
};

struct VerificationCondition {
    std::string id;
    std::string invariant;
    /// Support instances grouped per support invariant; the hypothesis is
    /// every batch followed by `core`.
    std::vector<std::vector<Formula>> supportBatches;
    /// Self-support, distinctness and the step (or initial condition).
    std::vector<Formula> core;
    Formula conclusion;
    Provenance provenance;
    TheoryClass theoryClass = TheoryClass::IntAndSets;
    bool trivial = false;
    /// Supports are added one batch at a time by the decision pipeline.
    bool lazy = false;
    int instanceSize = 0;

    /// Hypothesis with the first `batches` support batches (all when nullopt).
    Formula hypothesis(std::optional<std::size_t> batches = std::nullopt) const;
};

/// PositionOnly when every atom constrains program counters only.
TheoryClass classifyTheory(const Formula& hypothesis, const Formula& conclusion);

} // namespace pinv
