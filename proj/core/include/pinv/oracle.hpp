#pragma once

// Bounded explicit-state exploration of S[N]: reachability, invariant
// checking, countermodel classification and an empirical symmetry check.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pinv/eval.hpp"
#include "pinv/frontend.hpp"
#include "pinv/solve.hpp"

namespace pinv {

struct OracleConfig {
    int threads = 2;
    /// Integers range over 0..intBound-1; sets over subsets of that range.
    int intBound = 4;
    std::size_t maxStates = 5'000'000;
};

/// Globals first, then each thread's locals (pc first). Sets are bitmasks.
using ConcreteState = std::vector<std::int64_t>;

struct StateHash {
    std::size_t operator()(const ConcreteState& s) const noexcept;
};

class StateLayout {
public:
    StateLayout(const ParamProgram& p, int threads);

    std::size_t size() const { return sorts_.size(); }
    int threads() const { return threads_; }
    /// Slot of a concrete unprimed variable; nullopt when not declared.
    std::optional<std::size_t> slot(const std::string& name, int thread) const;
    Sort sortAt(std::size_t slot) const { return sorts_[slot]; }
    const std::string& keyAt(std::size_t slot) const { return keys_[slot]; }

    Value toValue(std::size_t slot, std::int64_t raw) const;
    /// Encodes `v` for `slot`; nullopt when outside the bound.
    std::optional<std::int64_t> fromValue(std::size_t slot, const Value& v, int bound) const;

    ConcreteState swap(const ConcreteState& s, int i, int j) const;

private:
    int threads_;
    std::size_t globals_ = 0;
    std::size_t perThread_ = 0;
    std::vector<Sort> sorts_;
    std::vector<std::string> keys_;
    std::map<std::string, std::size_t> globalIdx_;
    std::map<std::string, std::size_t> localIdx_;
};

struct Step {
    int location = 0;
    int arm = 0;
    int thread = 0;
};

struct Exploration {
    StateLayout layout;
    OracleConfig config;
    std::vector<ConcreteState> states;
    std::unordered_map<ConcreteState, std::size_t, StateHash> index;
    /// BFS parent and the step that reached each state (initial: parent = self).
    std::vector<std::size_t> parent;
    std::vector<Step> via;
    std::size_t initialCount = 0;
    std::size_t transitionsFired = 0;
    /// Some step was disabled because it left the integer bound.
    bool bounded = false;
};

/// Concrete steps of a program over a fixed layout, with guards and effects
/// instantiated per thread once.
class Stepper {
public:
    Stepper(const ParamProgram& p, const StateLayout& layout, int bound);

    /// Successor when `thread` takes transition `t` (index into p.transitions);
    /// nullopt when disabled. Sets `*outOfBound` when the bound cut the step off.
    std::optional<ConcreteState> step(const ConcreteState& s, std::size_t t, int thread,
                                      bool* outOfBound = nullptr) const;
    bool initial(const ConcreteState& s) const;
    std::size_t transitionCount() const { return program_.transitions.size(); }

private:
    struct Compiled {
        int location = 0;
        int next = 0;
        Formula guard;
        std::vector<std::pair<std::size_t, Expr>> writes;
    };
    const ParamProgram& program_;
    const StateLayout& layout_;
    int bound_;
    std::vector<std::vector<Compiled>> steps_;  // [transition][thread]
    Formula theta_;
};

/// Breadth-first closure from the initial states. Throws StateExplosion when
/// more than cfg.maxStates states are reached.
Exploration explore(const ParamProgram& p, const OracleConfig& cfg);

Lookup stateLookup(const StateLayout& layout, const ConcreteState& s, const ConcreteState* next = nullptr);

struct InvariantCheck {
    bool holds = true;
    std::optional<std::size_t> witness;
    std::map<std::string, int> assignment;
};

/// Evaluates every concretization of `phi` over [N] at every reachable state.
InvariantCheck checkInvariant(const Exploration& ex, const NamedFormula& phi);

/// Steps from an initial state to `state`, e.g. "t3[0]".
std::vector<std::string> tracePrefix(const Exploration& ex, std::size_t state);

std::map<std::string, Value> stateValues(const Exploration& ex, std::size_t state);

enum class Classification { Reachable, Spurious };

struct ClassifyResult {
    Classification verdict = Classification::Spurious;
    std::optional<std::size_t> matchedState;
    /// Thread ids of the model mapped to thread ids of the instance.
    std::map<int, int> threadMap;
    /// The primed part is a single step from the matched state.
    bool stepMatches = false;
    std::vector<std::string> warnings;
};

ClassifyResult classifyCounterModel(const CounterModel& cm, const ParamProgram& p, const Exploration& ex);

struct SymmetryReport {
    bool ok = true;
    std::string counterexample;
    std::size_t triplesChecked = 0;
};

/// Checks the swap conditions on the first `samples` explored states for
/// every pair of thread ids: transitions map to swapped transitions, initial
/// states to initial states, and each formula's truth is preserved.
SymmetryReport checkSymmetry(const ParamProgram& p, const Exploration& ex, const std::vector<NamedFormula>& formulas,
                             std::size_t samples);

} // namespace pinv
