#pragma once

// Decision procedures for concrete VCs: a position-based procedure for
// program-counter reasoning and an SMT-LIB2 backend driving an external
// solver process.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinv/eval.hpp"
#include "pinv/vc.hpp"

namespace pinv {

enum class Status { Valid, Invalid, Unknown, Timeout };
enum class DpUsed { Position, Smt };

std::string_view statusName(Status s);
std::string_view dpName(DpUsed d);

struct CounterModel {
    /// Keyed by concrete variable, e.g. "pc[1]", "ticket'[0]", "avail".
    std::map<std::string, Value> assignments;
    /// Some set in the solver's model was infinite; only candidate
    /// elements were kept.
    bool approximate = false;
    /// Hypothesis true and conclusion false under the built-in evaluator.
    bool rechecked = false;
};

struct SolverVerdict {
    Status status = Status::Unknown;
    std::optional<CounterModel> model;
    DpUsed dpUsed = DpUsed::Position;
    double elapsedMs = 0;
    std::string diagnostic;
    /// Support batches in the final attempt (lazy instantiation only).
    int lazyRounds = 0;
};

/// Valid when the implication holds for every program-counter valuation in
/// 1..maxLocation and every truth assignment to the remaining atoms;
/// Unknown otherwise, or when `budget` search nodes are exhausted.
SolverVerdict positionDP(const Formula& hypothesis, const Formula& conclusion, int maxLocation,
                         std::size_t budget = 2'000'000);

struct SmtOptions {
    int maxLocation = 1;
    /// Add the quantified axiom forall x. x in S -> min(S) <= x.
    bool quantifiedMin = false;
};

struct SmtScript {
    std::string text;
    /// SMT symbol -> program variable.
    std::map<std::string, VarRef> symbols;
};

/// Script asserting hypothesis and the negated conclusion. Deterministic.
SmtScript emitSmt(const Formula& hypothesis, const Formula& conclusion, const SmtOptions& opts);

/// SMT symbol of a concrete variable: `avail`, `avail!p`, `pc!1`, `pc!1!p`.
std::string smtSymbol(const VarRef& v);

struct SolverConfig {
    /// Empty: PINV_SOLVER from the environment, else "z3 -in -smt2".
    std::vector<std::string> command;
    double timeoutSeconds = 1800;
    bool quantifiedMin = false;
};

/// The command line that will be executed for `cfg`.
std::vector<std::string> resolveSolverCommand(const SolverConfig& cfg);

/// Runs the solver on `script`. Throws SolverNotFound when the executable
/// cannot be located and ProtocolError when a model cannot be parsed.
SolverVerdict runSolver(const SmtScript& script, const SolverConfig& cfg);

/// Parses a get-model response into values for the script's symbols.
/// `candidates` are the integers considered when reading back set values.
CounterModel parseModel(std::string_view text, const std::map<std::string, VarRef>& symbols,
                        const std::vector<std::int64_t>& candidates = {});

/// Evaluates the VC under the model; variables absent from the model take
/// the default value of their sort.
bool modelFalsifies(const CounterModel& m, const Formula& hypothesis, const Formula& conclusion);

struct DecideConfig {
    SolverConfig solver;
    int maxLocation = 1;
};

/// simplify -> position DP -> SMT, retrying with more supports for lazy VCs.
SolverVerdict decide(const VerificationCondition& vc, const SupportTactic& tactic, const DecideConfig& cfg);

} // namespace pinv
