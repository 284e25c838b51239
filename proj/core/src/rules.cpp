#include "pinv/rules.hpp"

#include <algorithm>
#include <set>

#include "pinv/errors.hpp"

namespace pinv {

std::string freshTidName(const std::set<std::string>& taken)
{
    for (const char* c : {"k", "l", "m", "n", "t", "u"})
        if (!taken.contains(c)) return c;
    for (int i = 0;; ++i) {
        std::string n = "t" + std::to_string(i);
        if (!taken.contains(n)) return n;
    }
}

namespace {

/// Every map vars -> pool, in lexicographic order (first variable most significant).
std::vector<std::map<std::string, std::string>> allMaps(const std::vector<std::string>& vars,
                                                        const std::vector<std::string>& pool)
{
    std::vector<std::map<std::string, std::string>> out;
    std::vector<std::size_t> digits(vars.size(), 0);
    while (true) {
        std::map<std::string, std::string> m;
        for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = pool[digits[i]];
        out.push_back(std::move(m));
        std::size_t i = vars.size();
        while (i > 0) {
            --i;
            if (++digits[i] < pool.size()) break;
            digits[i] = 0;
            if (i == 0) return out;
        }
        if (vars.empty() || pool.empty()) return out;
    }
}

std::vector<std::vector<int>> allAssignments(std::size_t m)
{
    std::vector<std::vector<int>> out;
    std::vector<int> digits(m, 0);
    while (true) {
        out.push_back(digits);
        std::size_t i = m;
        bool carry = true;
        while (carry && i > 0) {
            --i;
            if (++digits[i] < static_cast<int>(m)) {
                carry = false;
            } else {
                digits[i] = 0;
            }
        }
        if (carry) return out;
    }
}

/// Permutation mapping the ids of `alpha` to first-occurrence order.
std::vector<int> canonicalPerm(const std::vector<int>& alpha, std::size_t m)
{
    std::vector<int> perm(m, -1);
    int next = 0;
    for (int a : alpha)
        if (perm[static_cast<std::size_t>(a)] < 0) perm[static_cast<std::size_t>(a)] = next++;
    for (auto& p : perm)
        if (p < 0) p = next++;
    return perm;
}

std::string instanceLabel(const NamedFormula& f, const std::map<std::string, std::string>& sigma)
{
    std::string s = f.name + "(";
    for (std::size_t i = 0; i < f.indexVars.size(); ++i) s += (i ? "," : "") + sigma.at(f.indexVars[i]);
    return s + ")";
}

Formula instantiate(const NamedFormula& f, const std::map<std::string, std::string>& sigma)
{
    Substitution s;
    for (const auto& [from, to] : sigma) s.mapping[from] = mk::tidVar(to);
    return applySubst(f.body, s);
}

struct PremiseLabels {
    Rule rule;
    Premise init, same, fresh;
};

constexpr PremiseLabels kPLabels{Rule::PInv, Premise::P1, Premise::P2, Premise::P3};
constexpr PremiseLabels kSLabels{Rule::SpInv, Premise::S1, Premise::S2, Premise::S3};
constexpr PremiseLabels kGLabels{Rule::GInv, Premise::G1, Premise::G2, Premise::G3};

struct PremiseParts {
    std::vector<std::vector<Formula>> batches;
    std::vector<Formula> core;
    Formula conclusion;
};

class Generator {
public:
    Generator(const ParamProgram& p, VcSet& out, const SupportTactic& tactic) : p_(p), out_(out), tactic_(tactic) {}

    void node(const NamedFormula& phi, const PremiseLabels& labels, const std::vector<SupportCandidate>& supports,
              TacticMode mode)
    {
        const auto& vars = phi.indexVars;
        {
            ParametrizedPremise pp = header(phi, labels.rule, labels.init, nullptr, "", vars);
            PremiseParts parts{{}, {buildInitial(p_, vars)}, phi.body};
            emit(pp, parts, mode);
        }
        for (const auto& t : p_.transitions) {
            for (const auto& k : vars) {
                ParametrizedPremise pp = header(phi, labels.rule, labels.same, &t, k, vars);
                PremiseParts parts;
                addSupports(pp, parts, phi, t, labels.same, supports, mode, vars);
                if (labels.rule == Rule::GInv) {
                    addSelf(pp, parts, phi, vars);
                } else {
                    parts.core.push_back(phi.body);
                }
                parts.core.push_back(transitionRelation(p_, t, k));
                parts.conclusion = prime(phi.body);
                emit(pp, parts, mode);
            }
        }
        std::set<std::string> taken(vars.begin(), vars.end());
        const std::string j = freshTidName(taken);
        std::vector<std::string> xs = vars;
        xs.push_back(j);
        for (const auto& t : p_.transitions) {
            ParametrizedPremise pp = header(phi, labels.rule, labels.fresh, &t, j, xs);
            PremiseParts parts;
            addSupports(pp, parts, phi, t, labels.fresh, supports, mode, xs);
            addSelf(pp, parts, phi, xs);
            for (const auto& k : vars) parts.core.push_back(mk::ne(mk::tidVar(j), mk::tidVar(k)));
            parts.core.push_back(transitionRelation(p_, t, j));
            parts.conclusion = prime(phi.body);
            emit(pp, parts, mode);
        }
    }

private:
    ParametrizedPremise header(const NamedFormula& phi, Rule rule, Premise premise, const Transition* t,
                               const std::string& acting, const std::vector<std::string>& tidVars)
    {
        ParametrizedPremise pp;
        pp.invariant = phi.name;
        pp.rule = rule;
        pp.premise = premise;
        if (t) {
            pp.transitionLoc = t->location;
            pp.arm = t->arm;
        }
        pp.actingVar = acting;
        pp.tidVars = tidVars;
        return pp;
    }

    void addSupports(ParametrizedPremise& pp, PremiseParts& parts, const NamedFormula& phi, const Transition& t,
                     Premise premise, const std::vector<SupportCandidate>& supports, TacticMode mode,
                     const std::vector<std::string>& xs)
    {
        PremiseContext ctx{premise, &t, &phi};
        for (const auto& name : selectSupport(ctx, supports, mode)) {
            const NamedFormula* psi = nullptr;
            for (const auto& s : supports)
                if (s.formula->name == name) psi = s.formula;
            std::vector<Formula> batch;
            for (const auto& sigma : allMaps(psi->indexVars, xs)) {
                batch.push_back(instantiate(*psi, sigma));
                pp.supports.push_back(instanceLabel(*psi, sigma));
            }
            parts.batches.push_back(std::move(batch));
        }
    }

    void addSelf(ParametrizedPremise& pp, PremiseParts& parts, const NamedFormula& phi,
                 const std::vector<std::string>& xs)
    {
        std::set<std::string> seen;
        for (const auto& sigma : allMaps(phi.indexVars, xs)) {
            const std::string label = instanceLabel(phi, sigma);
            if (!seen.insert(label).second) continue;
            parts.core.push_back(instantiate(phi, sigma));
            pp.supports.push_back(label);
        }
    }

    void emit(ParametrizedPremise pp, const PremiseParts& parts, TacticMode mode)
    {
        const std::size_t m = pp.tidVars.size();
        const auto assignments = allAssignments(m);
        pp.assignments = assignments.size();
        out_.concretizationsBeforeDedup += assignments.size();
        {
            std::vector<Formula> hyp;
            for (const auto& b : parts.batches) hyp.insert(hyp.end(), b.begin(), b.end());
            hyp.insert(hyp.end(), parts.core.begin(), parts.core.end());
            pp.hypothesis = mk::conjFlat(hyp);
            pp.conclusion = parts.conclusion;
        }

        const std::string scope = pp.invariant + "/" + std::string(premiseName(pp.premise)) + "/" +
                                  std::to_string(pp.transitionLoc.value_or(0)) + "/" + std::to_string(pp.arm);
        auto& seen = seen_[scope];

        for (const auto& alpha : assignments) {
            std::map<std::string, int> amap;
            for (std::size_t i = 0; i < m; ++i) amap[pp.tidVars[i]] = alpha[i];
            const Substitution sub = Substitution::concrete(amap, static_cast<int>(m));

            VerificationCondition vc;
            vc.invariant = pp.invariant;
            vc.instanceSize = static_cast<int>(m);
            for (const auto& b : parts.batches) {
                std::vector<Formula> cb;
                for (const auto& f : b) cb.push_back(applySubst(f, sub));
                vc.supportBatches.push_back(std::move(cb));
            }
            for (const auto& f : parts.core) vc.core.push_back(applySubst(f, sub));
            vc.conclusion = applySubst(parts.conclusion, sub);

            const Formula hyp = vc.hypothesis();
            const auto perm = canonicalPerm(alpha, m);
            const std::string key = toString(normalizeOrder(renameThreads(mk::implies(hyp, vc.conclusion), perm)));
            if (!seen.insert(key).second) continue;

            vc.provenance.rule = pp.rule;
            vc.provenance.premise = pp.premise;
            vc.provenance.transitionLoc = pp.transitionLoc;
            vc.provenance.arm = pp.arm;
            vc.provenance.actingThread = pp.actingVar.empty() ? -1 : amap.at(pp.actingVar);
            vc.provenance.assignment = amap;
            vc.provenance.supports = pp.supports;
            vc.theoryClass = classifyTheory(hyp, vc.conclusion);
            vc.trivial = simplifyVc(hyp, vc.conclusion).triviallyValid;
            vc.lazy = mode == TacticMode::Lazy && !vc.supportBatches.empty();

            std::string id = pp.invariant + "__" + std::string(premiseName(pp.premise)) + "__t" +
                             std::to_string(pp.transitionLoc.value_or(0));
            if (pp.transitionLoc && p_.armsAt(*pp.transitionLoc) > 1) id += "_" + std::to_string(pp.arm);
            id += "__a";
            for (int a : alpha) id += std::to_string(a);
            if (vc.provenance.actingThread >= 0) id += "k" + std::to_string(vc.provenance.actingThread);
            std::string unique = id;
            for (int n = 2; ids_.contains(unique); ++n) unique = id + "_" + std::to_string(n);
            ids_.insert(unique);
            vc.id = unique;
            pp.vcIds.push_back(vc.id);
            out_.vcs.push_back(std::move(vc));
        }
        out_.premises.push_back(std::move(pp));
    }

    const ParamProgram& p_;
    VcSet& out_;
    SupportTactic tactic_;
    std::map<std::string, std::set<std::string>> seen_;
    std::set<std::string> ids_;
};

void append(VcSet& into, VcSet&& from)
{
    for (auto& x : from.premises) into.premises.push_back(std::move(x));
    for (auto& x : from.vcs) into.vcs.push_back(std::move(x));
    for (auto& x : from.warnings) into.warnings.push_back(std::move(x));
    for (auto& x : from.obligations) into.obligations.push_back(std::move(x));
    into.concretizationsBeforeDedup += from.concretizationsBeforeDedup;
}

} // namespace

std::vector<Concretization> concretize(const Formula& hypothesis, const Formula& conclusion,
                                       const std::vector<std::string>& tidVars)
{
    const std::size_t m = tidVars.size();
    std::vector<Concretization> out;
    std::set<std::string> seen;
    for (const auto& alpha : allAssignments(m)) {
        std::map<std::string, int> amap;
        for (std::size_t i = 0; i < m; ++i) amap[tidVars[i]] = alpha[i];
        const auto sub = Substitution::concrete(amap, static_cast<int>(m));
        Concretization c{amap, applySubst(hypothesis, sub), applySubst(conclusion, sub)};
        const auto perm = canonicalPerm(alpha, m);
        const std::string key = toString(normalizeOrder(renameThreads(mk::implies(c.hypothesis, c.conclusion), perm)));
        if (seen.insert(key).second) out.push_back(std::move(c));
    }
    return out;
}

VcSet pInv(const ParamProgram& p, const NamedFormula& phi, const RuleOptions& opts)
{
    VcSet out;
    Generator g(p, out, opts.tactic);
    g.node(phi, kPLabels, {}, opts.tactic.mode);
    return out;
}

VcSet spInv(const ParamProgram& p, const NamedFormula& phi, const std::vector<const NamedFormula*>& supports,
            const RuleOptions& opts)
{
    if (supports.empty()) {
        VcSet out = pInv(p, phi, opts);
        out.warnings.push_back("EmptySupportWarning: sp-inv for '" + phi.name + "' has no supports; using p-inv");
        return out;
    }
    VcSet out;
    std::vector<SupportCandidate> cands;
    for (const auto* s : supports) {
        cands.push_back(SupportCandidate{s, {}});
        out.obligations.push_back("S0: " + s->name + " is assumed invariant while proving " + phi.name);
    }
    Generator g(p, out, opts.tactic);
    g.node(phi, kSLabels, cands, opts.tactic.mode);
    return out;
}

VcSet gInv(const ParamProgram& p, const ProofGraph& graph, const SpecFile& specs, const RuleOptions& opts)
{
    VcSet out;
    for (const auto& node : graph.nodes) {
        const NamedFormula* phi = specs.find(node.name);
        if (!phi) throw DanglingSupportName("proof graph node '" + node.name + "' names no invariant");
        RuleOptions nodeOpts = opts;
        auto inspect = [&](const std::optional<std::string>& hint, bool nodeLevel) {
            if (!hint) return;
            const auto h = parseTacticHint(*hint);
            for (const auto& tok : h.unknownTokens)
                out.warnings.push_back("node '" + node.name + "': tactic token '" + tok + "' has no effect");
            if (nodeLevel && h.mode) nodeOpts.tactic.mode = *h.mode;
            if (nodeLevel && h.simplify) nodeOpts.tactic.simplify = true;
        };
        inspect(node.tacticHint, true);
        for (const auto& a : node.annotations) inspect(a.tacticHint, false);

        const auto incoming = graph.supportsOf(node.name);
        VcSet part;
        if (incoming.empty()) {
            part = pInv(p, *phi, nodeOpts);
        } else {
            std::vector<SupportCandidate> cands;
            for (const auto& name : incoming) {
                const NamedFormula* psi = specs.find(name);
                if (!psi) throw DanglingSupportName("support '" + name + "' of '" + node.name + "' names no invariant");
                SupportCandidate c{psi, {}};
                for (const auto& a : node.annotations)
                    if (std::find(a.supports.begin(), a.supports.end(), name) != a.supports.end())
                        c.annotations.push_back(a);
                cands.push_back(std::move(c));
            }
            Generator g(p, part, nodeOpts.tactic);
            g.node(*phi, kGLabels, cands, nodeOpts.tactic.mode);
        }
        append(out, std::move(part));
    }
    return out;
}

} // namespace pinv
