#include "pinv/vc.hpp"

namespace pinv {

std::string_view ruleName(Rule r)
{
    switch (r) {
    case Rule::PInv: return "pinv";
    case Rule::SpInv: return "spinv";
    case Rule::GInv: return "ginv";
    }
    return "?";
}

std::string_view premiseName(Premise p)
{
    static constexpr std::string_view names[] = {"P1", "P2", "P3", "S0", "S1", "S2", "S3", "G1", "G2", "G3"};
    return names[static_cast<int>(p)];
}

std::string_view theoryClassName(TheoryClass c)
{
    switch (c) {
    case TheoryClass::PositionOnly: return "PositionOnly";
    case TheoryClass::IntAndSets: return "IntAndSets";
    case TheoryClass::Unsupported: return "Unsupported";
    }
    return "?";
}

PremiseKind premiseKind(Premise p)
{
    switch (p) {
    case Premise::P2:
    case Premise::S2:
    case Premise::G2: return PremiseKind::SameThread;
    case Premise::P3:
    case Premise::S3:
    case Premise::G3: return PremiseKind::FreshThread;
    default: return PremiseKind::Initiation;
    }
}

std::string_view tacticName(TacticMode m)
{
    switch (m) {
    case TacticMode::FullSupp: return "full";
    case TacticMode::Supp: return "supp";
    case TacticMode::Offend: return "offend";
    case TacticMode::Lazy: return "lazy";
    }
    return "?";
}

std::optional<TacticMode> parseTacticName(std::string_view s)
{
    if (s == "full") return TacticMode::FullSupp;
    if (s == "supp") return TacticMode::Supp;
    if (s == "offend") return TacticMode::Offend;
    if (s == "lazy") return TacticMode::Lazy;
    return std::nullopt;
}

Formula VerificationCondition::hypothesis(std::optional<std::size_t> batches) const
{
    std::vector<Formula> parts;
    const std::size_t n = std::min(batches.value_or(supportBatches.size()), supportBatches.size());
    for (std::size_t b = 0; b < n; ++b)
        for (const auto& f : supportBatches[b]) parts.push_back(f);
    for (const auto& f : core) parts.push_back(f);
    return mk::conjFlat(std::move(parts));
}

namespace {

bool positionOnly(const Expr& e)
{
    switch (e->op) {
    case Op::Var: return e->var.isPc();
    case Op::IntLit:
    case Op::Add:
    case Op::Sub:
    case Op::EmptySet:
    case Op::Singleton:
    case Op::Union:
    case Op::SetDiff:
    case Op::SetMin:
    case Op::Member:
    case Op::ArrayUpdate:
    case Op::ArrayFrame: return false;
    default: break;
    }
    for (const auto& a : e->args)
        if (!positionOnly(a)) return false;
    return true;
}

} // namespace

TheoryClass classifyTheory(const Formula& hypothesis, const Formula& conclusion)
{
    return positionOnly(hypothesis) && positionOnly(conclusion) ? TheoryClass::PositionOnly : TheoryClass::IntAndSets;
}

} // namespace pinv
