#pragma once

// Support selection strategies and formula simplification.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pinv/frontend.hpp"
#include "pinv/vc.hpp"

namespace pinv {

/// A support invariant available to a premise, with the annotations that
/// attach it to particular locations and premise classes.
struct SupportCandidate {
    const NamedFormula* formula = nullptr;
    /// Empty means "annotated everywhere".
    std::vector<Annotation> annotations;
};

struct PremiseContext {
    Premise premise = Premise::P2;
    const Transition* transition = nullptr;
    /// Candidate invariant being proved.
    const NamedFormula* candidate = nullptr;
};

/// Names of the supports to instantiate for one parametrized premise.
std::vector<std::string> selectSupport(const PremiseContext& ctx, const std::vector<SupportCandidate>& supports,
                                       TacticMode mode);

/// True when the step writes a variable the candidate reads.
bool potentiallyOffending(const Transition& t, const Formula& candidate);

/// Hint tokens of a proof-graph annotation, e.g. "pruning:reduce2|simpl".
struct TacticHint {
    std::optional<TacticMode> mode;
    bool simplify = false;
    std::vector<std::string> unknownTokens;
};
TacticHint parseTacticHint(const std::string& hint);

/// Constant folding, pc-literal propagation, flattening, duplicate removal and
/// contradiction detection. Idempotent; preserves validity.
Formula simplify(const Formula& f);

struct SimplifiedVc {
    Formula hypothesis;
    Formula conclusion;
    /// The implication folded to true.
    bool triviallyValid = false;
};
SimplifiedVc simplifyVc(const Formula& hypothesis, const Formula& conclusion);

/// Recursively sorts the operands of conjunctions and disjunctions; used to
/// compare VCs modulo conjunct order.
Formula normalizeOrder(const Formula& f);

} // namespace pinv
