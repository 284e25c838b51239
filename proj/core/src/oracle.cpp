#include "pinv/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "pinv/errors.hpp"

namespace pinv {

std::size_t StateHash::operator()(const ConcreteState& s) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : s) {
        h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

StateLayout::StateLayout(const ParamProgram& p, int threads) : threads_(threads)
{
    for (const auto& g : p.globals) {
        globalIdx_[g.name] = sorts_.size();
        sorts_.push_back(g.sort);
        keys_.push_back(g.name);
    }
    globals_ = sorts_.size();
    for (std::size_t i = 0; i < p.locals.size(); ++i) localIdx_[p.locals[i].name] = i;
    perThread_ = p.locals.size();
    for (int a = 0; a < threads; ++a) {
        for (const auto& l : p.locals) {
            sorts_.push_back(l.sort);
            keys_.push_back(l.name + "[" + std::to_string(a) + "]");
        }
    }
}

std::optional<std::size_t> StateLayout::slot(const std::string& name, int thread) const
{
    if (thread < 0) {
        auto it = globalIdx_.find(name);
        if (it == globalIdx_.end()) return std::nullopt;
        return it->second;
    }
    auto it = localIdx_.find(name);
    if (it == localIdx_.end() || thread >= threads_) return std::nullopt;
    return globals_ + static_cast<std::size_t>(thread) * perThread_ + it->second;
}

Value StateLayout::toValue(std::size_t slot, std::int64_t raw) const
{
    switch (sorts_[slot]) {
    case Sort::Bool: return Value::boolean(raw != 0);
    case Sort::SetInt: {
        std::set<std::int64_t> elems;
        for (int b = 0; b < 63; ++b)
            if (raw & (std::int64_t{1} << b)) elems.insert(b);
        return Value::set(std::move(elems));
    }
    default: return Value::number(raw);
    }
}

std::optional<std::int64_t> StateLayout::fromValue(std::size_t slot, const Value& v, int bound) const
{
    switch (sorts_[slot]) {
    case Sort::Bool:
        if (v.kind != Value::Kind::Bool) return std::nullopt;
        return v.flag ? 1 : 0;
    case Sort::SetInt: {
        if (v.kind != Value::Kind::Set) return std::nullopt;
        std::int64_t mask = 0;
        for (auto e : v.elems) {
            if (e < 0 || e >= bound) return std::nullopt;
            mask |= std::int64_t{1} << e;
        }
        return mask;
    }
    case Sort::Loc: return v.kind == Value::Kind::Num ? std::optional<std::int64_t>(v.num) : std::nullopt;
    default:
        if (v.kind != Value::Kind::Num || v.num < 0 || v.num >= bound) return std::nullopt;
        return v.num;
    }
}

ConcreteState StateLayout::swap(const ConcreteState& s, int i, int j) const
{
    ConcreteState out = s;
    if (i == j) return out;
    const auto bi = globals_ + static_cast<std::size_t>(i) * perThread_;
    const auto bj = globals_ + static_cast<std::size_t>(j) * perThread_;
    for (std::size_t k = 0; k < perThread_; ++k) std::swap(out[bi + k], out[bj + k]);
    return out;
}

Lookup stateLookup(const StateLayout& layout, const ConcreteState& s, const ConcreteState* next)
{
    return [&layout, &s, next](const VarRef& v) -> Value {
        const int thread = v.kind == VarKind::LocalConcrete ? v.thread : -1;
        if (v.kind == VarKind::LocalIndexed) throw Error("parametrized read '" + varKey(v) + "' in a concrete formula");
        const auto slot = layout.slot(v.name, thread);
        if (!slot) throw UnknownVariable("no variable '" + varKey(v) + "' in this instance");
        if (v.primed) {
            if (!next) throw Error("primed variable '" + varKey(v) + "' in a state formula");
            return layout.toValue(*slot, (*next)[*slot]);
        }
        return layout.toValue(*slot, s[*slot]);
    };
}

namespace {

Formula forThread(const Formula& f, const std::string& tidParam, int thread, int instanceSize)
{
    return applySubst(f, Substitution::concrete({{tidParam, thread}}, instanceSize));
}

std::vector<std::vector<int>> allAssignments(std::size_t vars, int n)
{
    std::vector<std::vector<int>> out;
    std::vector<int> digits(vars, 0);
    while (true) {
        out.push_back(digits);
        std::size_t i = vars;
        bool carry = true;
        while (carry && i > 0) {
            --i;
            if (++digits[i] < n) {
                carry = false;
            } else {
                digits[i] = 0;
            }
        }
        if (carry || n == 0) return out;
    }
}

Formula concretizeAt(const NamedFormula& phi, const std::vector<int>& alpha, int n)
{
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < alpha.size(); ++i) m[phi.indexVars[i]] = alpha[i];
    return applySubst(phi.body, Substitution::concrete(m, n));
}

} // namespace

Stepper::Stepper(const ParamProgram& p, const StateLayout& layout, int bound)
    : program_(p), layout_(layout), bound_(bound)
{
    const int n = layout.threads();
    for (const auto& t : p.transitions) {
        std::vector<Compiled> perThread;
        for (int a = 0; a < n; ++a) {
            Compiled c;
            c.location = t.location;
            c.next = t.nextLoc;
            c.guard = forThread(t.guard, t.tidParam, a, n);
            for (const auto& w : t.effect) {
                const int thread = w.target.kind == VarKind::Global ? -1 : a;
                c.writes.emplace_back(*layout.slot(w.target.name, thread), forThread(w.value, t.tidParam, a, n));
            }
            perThread.push_back(std::move(c));
        }
        steps_.push_back(std::move(perThread));
    }
    std::vector<Formula> parts{p.thetaGlobal};
    for (int a = 0; a < n; ++a) parts.push_back(forThread(p.thetaLocal, std::string(kSelf), a, n));
    theta_ = mk::conjFlat(std::move(parts));
}

std::optional<ConcreteState> Stepper::step(const ConcreteState& s, std::size_t t, int thread, bool* outOfBound) const
{
    const Compiled& c = steps_[t][static_cast<std::size_t>(thread)];
    const std::size_t pcSlot = *layout_.slot(std::string(kPc), thread);
    if (s[pcSlot] != c.location) return std::nullopt;
    const Lookup lookup = stateLookup(layout_, s);
    if (!holds(c.guard, lookup)) return std::nullopt;
    ConcreteState next = s;
    next[pcSlot] = c.next;
    for (const auto& [slot, value] : c.writes) {
        const auto raw = layout_.fromValue(slot, evaluate(value, lookup), bound_);
        if (!raw) {
            if (outOfBound) *outOfBound = true;
            return std::nullopt;
        }
        next[slot] = *raw;
    }
    return next;
}

bool Stepper::initial(const ConcreteState& s) const { return holds(theta_, stateLookup(layout_, s)); }

Exploration explore(const ParamProgram& p, const OracleConfig& cfg)
{
    if (cfg.threads < 1) throw Error("oracle needs at least one thread");
    if (cfg.intBound < 1 || cfg.intBound > 62) throw Error("integer bound must lie in 1..62");
    Exploration ex{StateLayout(p, cfg.threads), cfg, {}, {}, {}, {}, 0, 0, false};
    const StateLayout& layout = ex.layout;
    Stepper stepper(p, layout, cfg.intBound);

    // Candidate initial values per slot: the declared initializer when it is
    // closed, otherwise the whole bounded domain.
    std::vector<std::vector<std::int64_t>> cands(layout.size());
    const ConcreteState zero(layout.size(), 0);
    const Lookup none = [](const VarRef& v) -> Value { throw UnknownVariable(varKey(v)); };
    auto domain = [&](Sort s) {
        std::vector<std::int64_t> d;
        if (s == Sort::Bool) return std::vector<std::int64_t>{0, 1};
        if (s == Sort::Loc) {
            for (int l = 1; l <= p.maxLocation; ++l) d.push_back(l);
        } else if (s == Sort::SetInt) {
            for (std::int64_t m = 0; m < (std::int64_t{1} << cfg.intBound); ++m) d.push_back(m);
        } else {
            for (int v = 0; v < cfg.intBound; ++v) d.push_back(v);
        }
        return d;
    };
    auto initialValues = [&](std::size_t slot, const VarDecl& d) {
        if (d.init) {
            try {
                const auto raw = layout.fromValue(slot, evaluate(*d.init, none), cfg.intBound);
                if (!raw) return std::vector<std::int64_t>{};
                return std::vector<std::int64_t>{*raw};
            } catch (const Error&) {
            }
        }
        return domain(d.sort);
    };
    for (const auto& g : p.globals) {
        const auto s = *layout.slot(g.name, -1);
        cands[s] = initialValues(s, g);
    }
    for (int a = 0; a < cfg.threads; ++a)
        for (const auto& l : p.locals) {
            const auto s = *layout.slot(l.name, a);
            cands[s] = initialValues(s, l);
        }

    auto admit = [&](ConcreteState st, std::size_t parent, Step via) {
        auto [it, fresh] = ex.index.try_emplace(st, ex.states.size());
        if (!fresh) return;
        if (ex.states.size() >= cfg.maxStates)
            throw StateExplosion("more than " + std::to_string(cfg.maxStates) + " reachable states");
        ex.states.push_back(std::move(st));
        ex.parent.push_back(parent == SIZE_MAX ? ex.states.size() - 1 : parent);
        ex.via.push_back(via);
    };

    ConcreteState cur(layout.size(), 0);
    std::function<void(std::size_t)> enumerate = [&](std::size_t slot) {
        if (slot == layout.size()) {
            if (stepper.initial(cur)) admit(cur, SIZE_MAX, Step{});
            return;
        }
        for (auto v : cands[slot]) {
            cur[slot] = v;
            enumerate(slot + 1);
        }
    };
    enumerate(0);
    ex.initialCount = ex.states.size();

    for (std::size_t i = 0; i < ex.states.size(); ++i) {
        for (std::size_t t = 0; t < p.transitions.size(); ++t) {
            for (int a = 0; a < cfg.threads; ++a) {
                bool oob = false;
                auto next = stepper.step(ex.states[i], t, a, &oob);
                if (oob) ex.bounded = true;
                if (!next) continue;
                ++ex.transitionsFired;
                admit(std::move(*next), i, Step{p.transitions[t].location, p.transitions[t].arm, a});
            }
        }
    }
    return ex;
}

InvariantCheck checkInvariant(const Exploration& ex, const NamedFormula& phi)
{
    const int n = ex.layout.threads();
    std::vector<std::pair<std::vector<int>, Formula>> instances;
    for (const auto& alpha : allAssignments(phi.indexVars.size(), n))
        instances.emplace_back(alpha, concretizeAt(phi, alpha, n));
    InvariantCheck r;
    for (std::size_t i = 0; i < ex.states.size(); ++i) {
        const Lookup lookup = stateLookup(ex.layout, ex.states[i]);
        for (const auto& [alpha, f] : instances) {
            if (!holds(f, lookup)) {
                r.holds = false;
                r.witness = i;
                for (std::size_t k = 0; k < alpha.size(); ++k) r.assignment[phi.indexVars[k]] = alpha[k];
                return r;
            }
        }
    }
    return r;
}

std::vector<std::string> tracePrefix(const Exploration& ex, std::size_t state)
{
    std::vector<std::string> steps;
    while (ex.parent[state] != state) {
        const Step& s = ex.via[state];
        std::string label = "t" + std::to_string(s.location);
        if (s.arm) label += "_" + std::to_string(s.arm);
        steps.push_back(label + "[" + std::to_string(s.thread) + "]");
        state = ex.parent[state];
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
}

std::map<std::string, Value> stateValues(const Exploration& ex, std::size_t state)
{
    std::map<std::string, Value> out;
    for (std::size_t k = 0; k < ex.layout.size(); ++k) out[ex.layout.keyAt(k)] = ex.layout.toValue(k, ex.states[state][k]);
    return out;
}

// ---- countermodel classification ------------------------------------------------

namespace {

struct ModelKey {
    std::string name;
    int thread = -1;
    bool primed = false;
};

std::optional<ModelKey> parseKey(const std::string& key)
{
    ModelKey k;
    std::string s = key;
    if (auto br = s.find('['); br != std::string::npos) {
        if (s.back() != ']') return std::nullopt;
        try {
            k.thread = std::stoi(s.substr(br + 1, s.size() - br - 2));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        s = s.substr(0, br);
    }
    if (!s.empty() && s.back() == '\'') {
        k.primed = true;
        s.pop_back();
    }
    if (s.empty()) return std::nullopt;
    k.name = s;
    return k;
}

} // namespace

ClassifyResult classifyCounterModel(const CounterModel& cm, const ParamProgram& p, const Exploration& ex)
{
    ClassifyResult r;
    const int n = ex.layout.threads();
    const int bound = ex.config.intBound;
    std::vector<std::pair<ModelKey, Value>> pre, post;
    std::set<int> threads;
    bool outOfBound = false;
    for (const auto& [key, value] : cm.assignments) {
        auto k = parseKey(key);
        if (!k || (k->thread < 0 && !p.findGlobal(k->name)) || (k->thread >= 0 && !p.findLocal(k->name))) {
            r.warnings.push_back("ignoring unknown model variable '" + key + "'");
            continue;
        }
        if (k->thread >= 0) threads.insert(k->thread);
        auto tooBig = [&](std::int64_t x) { return x < 0 || x >= bound; };
        const bool isLoc = k->name == kPc;
        if (!isLoc && ((value.kind == Value::Kind::Num && tooBig(value.num)) ||
                       (value.kind == Value::Kind::Set && std::any_of(value.elems.begin(), value.elems.end(), tooBig)))) {
            if (!k->primed) outOfBound = true;
            r.warnings.push_back("BoundTooSmall: " + key + " = " + value.str() + " lies outside 0.." +
                                 std::to_string(bound - 1));
        }
        (k->primed ? post : pre).emplace_back(*k, value);
    }
    if (outOfBound) return r;
    std::vector<int> modelThreads(threads.begin(), threads.end());
    if (static_cast<int>(modelThreads.size()) > n) {
        r.warnings.push_back("model uses " + std::to_string(modelThreads.size()) + " threads but the instance has " +
                             std::to_string(n));
        return r;
    }

    // Every injective map from model threads into [n].
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    std::set<std::vector<int>> tried;
    Stepper stepper(p, ex.layout, bound);
    do {
        std::vector<int> f(image.begin(), image.begin() + static_cast<std::ptrdiff_t>(modelThreads.size()));
        if (!tried.insert(f).second) continue;
        std::vector<std::pair<std::size_t, std::int64_t>> want;
        bool encodable = true;
        auto mapThread = [&](int t) {
            if (t < 0) return -1;
            auto pos = std::find(modelThreads.begin(), modelThreads.end(), t) - modelThreads.begin();
            return f[static_cast<std::size_t>(pos)];
        };
        for (const auto& [k, v] : pre) {
            const auto slot = ex.layout.slot(k.name, mapThread(k.thread));
            const auto raw = slot ? ex.layout.fromValue(*slot, v, bound) : std::nullopt;
            if (!raw) {
                encodable = false;
                break;
            }
            want.emplace_back(*slot, *raw);
        }
        if (!encodable) continue;
        for (std::size_t i = 0; i < ex.states.size(); ++i) {
            const auto& s = ex.states[i];
            if (!std::all_of(want.begin(), want.end(), [&](const auto& w) { return s[w.first] == w.second; })) continue;
            if (!r.matchedState) {
                r.verdict = Classification::Reachable;
                r.matchedState = i;
                for (std::size_t k = 0; k < modelThreads.size(); ++k) r.threadMap[modelThreads[k]] = f[k];
            }
            // Does one step from s produce the primed part?
            for (std::size_t t = 0; t < stepper.transitionCount() && !r.stepMatches; ++t) {
                for (int a = 0; a < n && !r.stepMatches; ++a) {
                    auto next = stepper.step(s, t, a);
                    if (!next) continue;
                    bool all = true;
                    for (const auto& [k, v] : post) {
                        const auto slot = ex.layout.slot(k.name, mapThread(k.thread));
                        const auto raw = slot ? ex.layout.fromValue(*slot, v, bound) : std::nullopt;
                        if (!raw || (*next)[*slot] != *raw) {
                            all = false;
                            break;
                        }
                    }
                    if (all) {
                        r.stepMatches = true;
                        r.matchedState = i;
                        r.threadMap.clear();
                        for (std::size_t k = 0; k < modelThreads.size(); ++k) r.threadMap[modelThreads[k]] = f[k];
                    }
                }
            }
            if (r.stepMatches) return r;
        }
    } while (std::next_permutation(image.begin(), image.end()));
    return r;
}

// ---- symmetry ----------------------------------------------------------------

SymmetryReport checkSymmetry(const ParamProgram& p, const Exploration& ex, const std::vector<NamedFormula>& formulas,
                             std::size_t samples)
{
    SymmetryReport rep;
    const int n = ex.layout.threads();
    const int bound = ex.config.intBound;
    Stepper stepper(p, ex.layout, bound);
    auto describe = [&](const ConcreteState& s) {
        std::string out = "{";
        for (std::size_t k = 0; k < s.size(); ++k)
            out += (k ? ", " : "") + ex.layout.keyAt(k) + "=" + ex.layout.toValue(k, s[k]).str();
        return out + "}";
    };
    struct Inst {
        const NamedFormula* f;
        std::vector<int> alpha;
        Formula concrete;
    };
    std::vector<Inst> insts;
    std::map<std::pair<const NamedFormula*, std::vector<int>>, std::size_t> instIdx;
    for (const auto& f : formulas) {
        for (const auto& alpha : allAssignments(f.indexVars.size(), n)) {
            instIdx[{&f, alpha}] = insts.size();
            insts.push_back(Inst{&f, alpha, concretizeAt(f, alpha, n)});
        }
    }

    const std::size_t limit = std::min(samples, ex.states.size());
    for (std::size_t si = 0; si < limit; ++si) {
        const ConcreteState& s = ex.states[si];
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                auto pi = [&](int a) { return a == i ? j : a == j ? i : a; };
                const ConcreteState ps = ex.layout.swap(s, i, j);
                if (ex.layout.swap(ps, i, j) != s) {
                    rep.ok = false;
                    rep.counterexample = "swap is not an involution on " + describe(s);
                    return rep;
                }
                if (stepper.initial(s) != stepper.initial(ps)) {
                    rep.ok = false;
                    rep.counterexample = "initial condition distinguishes " + describe(s) + " from its (" +
                                         std::to_string(i) + " " + std::to_string(j) + ") swap";
                    return rep;
                }
                for (std::size_t t = 0; t < stepper.transitionCount(); ++t) {
                    for (int a = 0; a < n; ++a) {
                        auto next = stepper.step(s, t, a);
                        auto pnext = stepper.step(ps, t, pi(a));
                        ++rep.triplesChecked;
                        const bool ok = next.has_value() == pnext.has_value() &&
                                        (!next || ex.layout.swap(*next, i, j) == *pnext);
                        if (!ok) {
                            rep.ok = false;
                            rep.counterexample = "t" + std::to_string(p.transitions[t].location) + "[" +
                                                 std::to_string(a) + "] from " + describe(s) +
                                                 (next ? " is enabled" : " is disabled") + " but t" +
                                                 std::to_string(p.transitions[t].location) + "[" +
                                                 std::to_string(pi(a)) + "] from the swapped state " +
                                                 (pnext ? "is enabled or differs" : "is disabled");
                            return rep;
                        }
                    }
                }
                const Lookup ls = stateLookup(ex.layout, s);
                const Lookup lp = stateLookup(ex.layout, ps);
                for (const auto& inst : insts) {
                    std::vector<int> swapped = inst.alpha;
                    for (auto& a : swapped) a = pi(a);
                    const Inst& other = insts[instIdx.at({inst.f, swapped})];
                    if (holds(inst.concrete, ls) != holds(other.concrete, lp)) {
                        rep.ok = false;
                        rep.counterexample = "formula " + inst.f->name + " changes truth under the (" +
                                             std::to_string(i) + " " + std::to_string(j) + ") swap at " + describe(s);
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

} // namespace pinv
