#include "pinv/solve.hpp"
#include "pinv/tactics.hpp"

namespace pinv {

std::string_view statusName(Status s)
{
    switch (s) {
    case Status::Valid: return "valid";
    case Status::Invalid: return "invalid";
    case Status::Unknown: return "unknown";
    case Status::Timeout: return "timeout";
    }
    return "?";
}

std::string_view dpName(DpUsed d) { return d == DpUsed::Position ? "position" : "smt"; }

namespace {

SolverVerdict decideOnce(const Formula& hypothesis, const Formula& conclusion, bool simplifyFirst,
                         const DecideConfig& cfg)
{
    Formula h = hypothesis, c = conclusion;
    if (simplifyFirst) {
        const auto s = simplifyVc(hypothesis, conclusion);
        if (s.triviallyValid) {
            SolverVerdict v;
            v.status = Status::Valid;
            v.dpUsed = DpUsed::Position;
            return v;
        }
        h = s.hypothesis;
        c = s.conclusion;
    }
    SolverVerdict pos = positionDP(h, c, cfg.maxLocation);
    if (pos.status == Status::Valid) return pos;

    SmtOptions opts{cfg.maxLocation, cfg.solver.quantifiedMin};
    SolverVerdict v = runSolver(emitSmt(h, c, opts), cfg.solver);
    v.elapsedMs += pos.elapsedMs;
    if (v.status != Status::Invalid) return v;

    v.model->rechecked = modelFalsifies(*v.model, hypothesis, conclusion);
    if (v.model->rechecked || opts.quantifiedMin) return v;

    // The ground min axioms admit models that violate min semantics; ask
    // again with the quantified axiom before reporting.
    opts.quantifiedMin = true;
    SolverVerdict q = runSolver(emitSmt(h, c, opts), cfg.solver);
    q.elapsedMs += v.elapsedMs;
    if (q.status == Status::Valid) return q;
    if (q.status == Status::Invalid) {
        q.model->rechecked = modelFalsifies(*q.model, hypothesis, conclusion);
        if (q.model->rechecked) return q;
    }
    v.elapsedMs = q.elapsedMs;
    v.diagnostic = "countermodel does not re-check under the built-in evaluator";
    return v;
}

} // namespace

SolverVerdict decide(const VerificationCondition& vc, const SupportTactic& tactic, const DecideConfig& cfg)
{
    if (!vc.lazy) {
        SolverVerdict v = decideOnce(vc.hypothesis(), vc.conclusion, tactic.simplify, cfg);
        v.lazyRounds = 0;
        return v;
    }
    double total = 0;
    SolverVerdict v;
    for (std::size_t r = 0; r <= vc.supportBatches.size(); ++r) {
        v = decideOnce(vc.hypothesis(r), vc.conclusion, tactic.simplify, cfg);
        total += v.elapsedMs;
        v.lazyRounds = static_cast<int>(r);
        if (v.status == Status::Valid) break;
    }
    v.elapsedMs = total;
    return v;
}

} // namespace pinv
