#pragma once

// Intermediate representation shared by every stage: sorts, expressions and
// formulas over thread-indexed program variables, transitions and programs.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pinv {

enum class Sort { Bool, Int, Loc, Tid, SetInt };

std::string_view sortName(Sort s);

enum class VarKind {
    Global,
    LocalIndexed,   // v(k): read of thread variable k's copy
    LocalConcrete,  // v[a]: copy of concrete thread a
};

/// The program counter is the distinguished local of sort Loc.
inline constexpr std::string_view kPc = "pc";
/// Name of the thread parameter that program statements are written over.
inline constexpr std::string_view kSelf = "self";

struct VarRef {
    std::string name;
    VarKind kind = VarKind::Global;
    std::string tidVar;  // LocalIndexed only
    int thread = -1;     // LocalConcrete only
    bool primed = false;
    Sort sort = Sort::Int;

    bool isPc() const { return name == kPc; }
    bool isLocal() const { return kind != VarKind::Global; }

    auto operator<=>(const VarRef&) const = default;
};

enum class Op {
    BoolLit,
    IntLit,
    LocLit,
    TidVar,
    TidConst,
    Var,
    Add,
    Sub,
    EmptySet,
    Singleton,
    Union,
    SetDiff,
    SetMin,
    Not,
    And,
    Or,
    Implies,
    Eq,
    Ne,
    Lt,
    Le,
    Member,
    ArrayUpdate,  // w' = w{k <- e}; var names w, args = {k, e}
    ArrayFrame,   // w' = w for every index; var names w
};

struct Node;
using Expr = std::shared_ptr<const Node>;
/// A Bool-sorted Expr.
using Formula = Expr;

struct Node {
    Op op;
    Sort sort;
    std::int64_t value = 0;  // literals and TidConst
    std::string name;        // TidVar
    VarRef var;              // Var, ArrayUpdate, ArrayFrame
    std::vector<Expr> args;
};

bool isAtomicFormula(const Expr& e);
bool isComparison(Op op);

// Builders. Each checks operand sorts and throws SortError on mismatch.
namespace mk {
Expr boolLit(bool b);
Expr intLit(std::int64_t v);
Expr locLit(std::int64_t v);
Expr tidVar(std::string name);
Expr tidConst(int id);
Expr var(VarRef ref);
Expr global(std::string name, Sort sort, bool primed = false);
Expr local(std::string name, Sort sort, std::string tidVar, bool primed = false);
Expr localAt(std::string name, Sort sort, int thread, bool primed = false);
Expr pc(std::string tidVar, bool primed = false);
Expr pcAt(int thread, bool primed = false);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr emptySet();
Expr singleton(Expr e);
Expr unite(Expr a, Expr b);
Expr setDiff(Expr a, Expr b);
Expr setMin(Expr s);
Formula neg(Formula f);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula implies(Formula a, Formula b);
/// Generic comparison; Int literals are coerced to Loc/Tid when compared
/// with a Loc/Tid operand.
Formula cmp(Op op, Expr a, Expr b);
Formula eq(Expr a, Expr b);
Formula ne(Expr a, Expr b);
Formula lt(Expr a, Expr b);
Formula le(Expr a, Expr b);
Formula member(Expr e, Expr set);
Formula arrayUpdate(VarRef target, Expr index, Expr value);
Formula arrayFrame(VarRef target);
/// Conjunction that drops `true` and splices nested conjunctions.
Formula conjFlat(std::vector<Formula> fs);
} // namespace mk

/// Surface-syntax rendering; parseable by the frontend. With `ownThread` set,
/// locals indexed by that tid variable print without the index.
std::string toString(const Expr& e, std::string_view ownThread = {});

bool equal(const Expr& a, const Expr& b);

/// Recomputes sorts bottom-up; throws SortError when a node is ill-sorted.
void checkSorts(const Expr& e);
bool wellSorted(const Expr& e);

/// Var(phi): the tid variables occurring free in `f`.
std::set<std::string> freeTids(const Formula& f);
inline std::size_t indexOf(const Formula& f) { return freeTids(f).size(); }

/// Program variable names read by `f` (locals without their index).
std::set<std::string> readSet(const Expr& f);

/// Replace every unprimed program variable with its primed copy.
Formula prime(const Formula& f);

struct Substitution {
    /// tid variable -> tid-sorted term (TidVar or TidConst).
    std::map<std::string, Expr> mapping;
    /// Instance size used to expand array updates and frames once their
    /// index is concrete.
    std::optional<int> instanceSize;

    static Substitution swap(const std::string& a, const std::string& b);
    static Substitution concrete(const std::map<std::string, int>& assignment,
                                 std::optional<int> instanceSize);
};

/// Simultaneous substitution of tid variables. Throws SortError when a mapping
/// target is not tid-sorted.
Formula applySubst(const Formula& f, const Substitution& s);

/// Rename concrete thread ids by `perm` (perm[a] is the new id of thread a).
Formula renameThreads(const Formula& f, std::span<const int> perm);

struct VarDecl {
    std::string name;
    Sort sort = Sort::Int;
    std::optional<Expr> init;

    bool operator==(const VarDecl& o) const;
};

struct Assignment {
    VarRef target;  // unprimed; Global or LocalIndexed(self)
    Expr value;

    bool operator==(const Assignment& o) const;
};

struct Transition {
    int location = 0;
    int arm = 0;  // branch arm index within a location
    std::string tidParam = std::string(kSelf);
    Formula guard;
    std::vector<Assignment> effect;
    int nextLoc = 0;
    /// Variable names (besides pc) left unchanged by the step.
    std::set<std::string> preserved;
    std::string label;

    /// Names written by the step, pc included.
    std::set<std::string> writeSet() const;
    bool operator==(const Transition& o) const;
};

struct ParamProgram {
    std::string name;
    std::vector<VarDecl> globals;
    /// Thread-local declarations; the first one is always pc.
    std::vector<VarDecl> locals;
    std::vector<Transition> transitions;
    Formula thetaGlobal;
    /// Over the single tid parameter `self`.
    Formula thetaLocal;
    int maxLocation = 0;

    const VarDecl* findGlobal(std::string_view n) const;
    const VarDecl* findLocal(std::string_view n) const;
    /// Number of transitions sharing `location` (branch arms).
    int armsAt(int location) const;

    bool operator==(const ParamProgram& o) const;
};

/// Frame condition over a concrete instance. `preserved` holds variable names;
/// a local name frames every listed thread, `v[a]` frames thread a only.
Formula presExpand(const ParamProgram& p, const std::set<std::string>& preserved,
                   std::span<const int> instanceThreads);

/// Theta(X): Theta_g conjoined with Theta_l(k) for each k in `tids`.
Formula buildInitial(const ParamProgram& p, std::span<const std::string> tids);

/// Parametrized relation tau(k) in array form: pc' = pc{k <- next}, array updates
/// for local writes and array frames for untouched locals.
Formula transitionRelation(const ParamProgram& p, const Transition& t,
                           const std::string& tidVar);

/// Concrete relation tau[a] over an instance of `instanceSize` threads; the
/// frame conjuncts come last.
Formula concreteTransition(const ParamProgram& p, const Transition& t, int thread,
                           int instanceSize);

/// Flattened top-level conjuncts of `f`.
std::vector<Formula> conjuncts(const Formula& f);

} // namespace pinv
