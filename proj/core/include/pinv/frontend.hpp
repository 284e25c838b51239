#pragma once

// Parsers for the three input languages (.prg programs, .inv specifications,
// .graph proof graphs), their printers, and the syntactic symmetry gate.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinv/ir.hpp"

namespace pinv {

struct ProgramSource {
    std::string text;
    std::string origin;
};

/// Location predicate macro, e.g. critical(k) := pc(k) in {5,6}.
struct LocationMacro {
    std::string name;
    std::string tidParam;
    std::vector<int> locations;

    bool operator==(const LocationMacro&) const = default;
};

/// A named candidate invariant; its index is indexVars.size().
struct NamedFormula {
    std::string name;
    std::vector<std::string> indexVars;
    Formula body;

    std::size_t index() const { return indexVars.size(); }
    bool operator==(const NamedFormula& o) const;
};

struct SpecFile {
    std::vector<LocationMacro> macros;
    std::vector<NamedFormula> invariants;

    const NamedFormula* find(std::string_view name) const;
    bool operator==(const SpecFile&) const = default;
};

enum class PremiseClass {
    All,
    SameThread,   // N: consecution by a thread of the formula
    FreshThread,  // E: consecution by a fresh thread
};

struct Annotation {
    std::optional<int> location;  // nullopt: every location
    PremiseClass premise = PremiseClass::All;
    std::vector<std::string> supports;
    std::optional<std::string> tacticHint;

    bool operator==(const Annotation&) const = default;
};

struct GraphNode {
    std::string name;
    std::vector<Annotation> annotations;
    std::optional<std::string> tacticHint;

    bool operator==(const GraphNode&) const = default;
};

struct ProofGraph {
    std::vector<GraphNode> nodes;
    /// (support, supported) pairs, in order of first mention.
    std::vector<std::pair<std::string, std::string>> edges;

    const GraphNode* find(std::string_view name) const;
    std::vector<std::string> supportsOf(std::string_view node) const;
    bool operator==(const ProofGraph&) const = default;
};

ParamProgram parseProgram(const ProgramSource& src);
SpecFile parseSpec(std::string_view text, const ParamProgram& program);
ProofGraph parseProofGraph(std::string_view text);

/// Parses a single formula against `program`, with `tidVars` bound as tid
/// variables and the given macros in scope.
Formula parseFormula(std::string_view text, const ParamProgram& program,
                     const std::vector<std::string>& tidVars,
                     const std::vector<LocationMacro>& macros = {});

std::string printProgram(const ParamProgram& p);
std::string printSpec(const SpecFile& s);
std::string printProofGraph(const ProofGraph& g);

struct SymmetryVerdict {
    bool symmetric = true;
    std::string witness;  // offending expression, empty when symmetric
    std::string where;    // which guard/effect/formula contained it
};

/// Tid-sorted terms may only appear under = and != and no tid constant may
/// occur; checked over guards, effects, the initial condition and every
/// formula in `spec`.
SymmetryVerdict checkFullSymmetry(const ParamProgram& p, const SpecFile& spec);
SymmetryVerdict checkFullSymmetry(const ParamProgram& p, const std::vector<Formula>& formulas);

std::string readFile(const std::string& path);

} // namespace pinv
