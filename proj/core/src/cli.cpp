#include "pinv/cli.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pinv/errors.hpp"
#include "pinv/frontend.hpp"
#include "pinv/oracle.hpp"
#include "pinv/rules.hpp"
#include "pinv/solve.hpp"

namespace pinv::cli {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kReportSchema = "pinv.report/1";
constexpr const char* kManifestSchema = "pinv.manifest/1";

struct Inputs {
    std::string programPath;
    std::string specPath;
    std::string graphPath;
    std::string invariant;
    std::string rule = "pinv";
    std::vector<std::string> supports;
    std::string tactic = "full";
    bool noSimplify = false;
    bool quantifiedMin = false;
};

struct Loaded {
    ParamProgram program;
    SpecFile spec;
    std::optional<ProofGraph> graph;
};

/// Prefixes parse errors with the file they came from.
template <typename Fn>
auto withOrigin(const std::string& path, Fn&& fn)
{
    try {
        return fn();
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    } catch (const DanglingSupportName& e) {
        throw Error(path + ": " + e.what());
    } catch (const UnknownVariable& e) {
        throw Error(path + ":" + e.what());
    } catch (const DuplicateLocation& e) {
        throw Error(path + ":" + e.what());
    } catch (const ArityError& e) {
        throw Error(path + ": " + e.what());
    } catch (const UnsupportedSort& e) {
        throw Error(path + ":" + e.what());
    }
}

Loaded load(const Inputs& in, bool needGraph)
{
    Loaded l;
    const std::string prg = readFile(in.programPath);
    l.program = withOrigin(in.programPath, [&] { return parseProgram(ProgramSource{prg, in.programPath}); });
    const std::string inv = readFile(in.specPath);
    l.spec = withOrigin(in.specPath, [&] { return parseSpec(inv, l.program); });
    if (needGraph && !in.graphPath.empty()) {
        const std::string g = readFile(in.graphPath);
        l.graph = withOrigin(in.graphPath, [&] { return parseProofGraph(g); });
    }
    return l;
}

void symmetryGate(const Loaded& l)
{
    const auto v = checkFullSymmetry(l.program, l.spec);
    if (!v.symmetric) throw NotSymmetric("not fully symmetric: '" + v.witness + "' in " + v.where);
}

SupportTactic tacticOf(const Inputs& in)
{
    SupportTactic t;
    auto m = parseTacticName(in.tactic);
    if (!m) throw Error("unknown tactic '" + in.tactic + "' (expected full, supp, offend or lazy)");
    t.mode = *m;
    t.simplify = !in.noSimplify;
    return t;
}

VcSet generate(const Inputs& in, const Loaded& l, const SupportTactic& tactic)
{
    RuleOptions opts{tactic};
    if (l.graph) return gInv(l.program, *l.graph, l.spec, opts);
    if (in.invariant.empty()) throw Error("either --graph or --invariant is required");
    const NamedFormula* phi = l.spec.find(in.invariant);
    if (!phi) throw Error("no invariant named '" + in.invariant + "' in " + in.specPath);
    if (in.rule == "pinv") {
        if (!in.supports.empty()) throw Error("--support requires --rule spinv");
        return pInv(l.program, *phi, opts);
    }
    if (in.rule == "spinv") {
        std::vector<const NamedFormula*> sup;
        for (const auto& s : in.supports) {
            const NamedFormula* f = l.spec.find(s);
            if (!f) throw Error("no invariant named '" + s + "' in " + in.specPath);
            sup.push_back(f);
        }
        return spInv(l.program, *phi, sup, opts);
    }
    throw Error("unknown rule '" + in.rule + "' (expected pinv or spinv; use --graph for g-inv)");
}

ordered_json valueJson(const Value& v)
{
    switch (v.kind) {
    case Value::Kind::Bool: return v.flag;
    case Value::Kind::Set: {
        ordered_json a = ordered_json::array();
        for (auto e : v.elems) a.push_back(e);
        return a;
    }
    default:
        if (v.num == kEmptyMin) return "+inf";
        return v.num;
    }
}

ordered_json provenanceJson(const Provenance& p)
{
    ordered_json j;
    j["rule"] = std::string(ruleName(p.rule));
    j["premise"] = std::string(premiseName(p.premise));
    if (p.transitionLoc) {
        j["transition"] = *p.transitionLoc;
        j["arm"] = p.arm;
    } else {
        j["transition"] = nullptr;
    }
    if (p.actingThread >= 0) {
        j["actingThread"] = p.actingThread;
    } else {
        j["actingThread"] = nullptr;
    }
    ordered_json a = ordered_json::object();
    for (const auto& [k, v] : p.assignment) a[k] = v;
    j["assignment"] = a;
    j["supports"] = p.supports;
    return j;
}

ordered_json modelJson(const CounterModel& m)
{
    ordered_json j;
    ordered_json a = ordered_json::object();
    for (const auto& [k, v] : m.assignments) a[k] = valueJson(v);
    j["assignments"] = a;
    j["approximate"] = m.approximate;
    j["rechecked"] = m.rechecked;
    return j;
}

void writeText(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void dumpVcs(const fs::path& dir, const Loaded& l, const VcSet& set, bool quantifiedMin)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory '" + dir.string() + "'");
    ordered_json man;
    man["schema"] = kManifestSchema;
    man["program"] = l.program.name;
    man["parametrizedPremises"] = set.premises.size();
    man["concretizationsBeforeDedup"] = set.concretizationsBeforeDedup;
    ordered_json premises = ordered_json::array();
    for (const auto& p : set.premises) {
        ordered_json j;
        j["invariant"] = p.invariant;
        j["rule"] = std::string(ruleName(p.rule));
        j["premise"] = std::string(premiseName(p.premise));
        if (p.transitionLoc) {
            j["transition"] = *p.transitionLoc;
            j["arm"] = p.arm;
        } else {
            j["transition"] = nullptr;
        }
        j["actingVar"] = p.actingVar;
        j["tidVars"] = p.tidVars;
        j["supports"] = p.supports;
        j["hypothesis"] = toString(p.hypothesis);
        j["conclusion"] = toString(p.conclusion);
        j["assignments"] = p.assignments;
        j["vcs"] = p.vcIds;
        premises.push_back(std::move(j));
    }
    man["premises"] = std::move(premises);
    ordered_json vcs = ordered_json::array();
    const SmtOptions opts{l.program.maxLocation, quantifiedMin};
    for (const auto& vc : set.vcs) {
        const std::string file = vc.id + ".smt2";
        writeText(dir / file, emitSmt(vc.hypothesis(), vc.conclusion, opts).text);
        ordered_json j;
        j["id"] = vc.id;
        j["file"] = file;
        j["provenance"] = provenanceJson(vc.provenance);
        j["theoryClass"] = std::string(theoryClassName(vc.theoryClass));
        j["trivial"] = vc.trivial;
        vcs.push_back(std::move(j));
    }
    man["vcs"] = std::move(vcs);
    writeText(dir / "manifest.json", man.dump(2) + "\n");
}

/// Decides every VC with up to `jobs` workers; results keep VC order.
std::vector<SolverVerdict> decideAll(const VcSet& set, const SupportTactic& tactic, const DecideConfig& cfg, int jobs)
{
    const std::size_t n = set.vcs.size();
    std::vector<SolverVerdict> out(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = decide(set.vcs[i], tactic, cfg);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

struct Totals {
    std::size_t generated = 0, position = 0, valid = 0, invalid = 0, unknown = 0, timeout = 0;
    std::size_t remaining() const { return generated - position; }
    void add(const SolverVerdict& v)
    {
        ++generated;
        if (v.status == Status::Valid && v.dpUsed == DpUsed::Position) {
            ++position;
            return;
        }
        switch (v.status) {
        case Status::Valid: ++valid; break;
        case Status::Invalid: ++invalid; break;
        case Status::Unknown: ++unknown; break;
        case Status::Timeout: ++timeout; break;
        }
    }
    ordered_json json() const
    {
        ordered_json j;
        j["generated"] = generated;
        j["provedByPosition"] = position;
        j["remaining"] = remaining();
        j["valid"] = valid;
        j["invalid"] = invalid;
        j["unknown"] = unknown;
        j["timeout"] = timeout;
        return j;
    }
};

void printSummary(std::ostream& out, const VcSet& set, const std::vector<SolverVerdict>& verdicts, const Totals& all,
                  double elapsedMs)
{
    std::map<std::string, Totals> per;
    std::vector<std::string> order;
    for (std::size_t i = 0; i < set.vcs.size(); ++i) {
        const auto& name = set.vcs[i].invariant;
        if (!per.contains(name)) order.push_back(name);
        per[name].add(verdicts[i]);
    }
    out << std::left << std::setw(16) << "invariant" << std::right << std::setw(10) << "generated" << std::setw(10)
        << "position" << std::setw(10) << "remaining" << std::setw(8) << "valid" << std::setw(9) << "invalid"
        << std::setw(9) << "unknown" << std::setw(9) << "timeout" << "\n";
    auto row = [&](const std::string& name, const Totals& t) {
        out << std::left << std::setw(16) << name << std::right << std::setw(10) << t.generated << std::setw(10)
            << t.position << std::setw(10) << t.remaining() << std::setw(8) << t.valid << std::setw(9) << t.invalid
            << std::setw(9) << t.unknown << std::setw(9) << t.timeout << "\n";
    };
    for (const auto& name : order) row(name, per[name]);
    row("total", all);
    for (std::size_t i = 0; i < set.vcs.size(); ++i) {
        const auto& v = verdicts[i];
        if (v.status == Status::Valid) continue;
        out << statusName(v.status) << ": " << set.vcs[i].id;
        if (v.model) {
            out << "  {";
            bool first = true;
            for (const auto& [k, val] : v.model->assignments) {
                out << (first ? "" : ", ") << k << "=" << val.str();
                first = false;
            }
            out << "}";
        }
        if (!v.diagnostic.empty()) out << "  (" << v.diagnostic << ")";
        out << "\n";
    }
    out << "elapsed: " << std::fixed << std::setprecision(1) << elapsedMs / 1000.0 << " s\n";
}

void addInputOptions(CLI::App* cmd, Inputs& in)
{
    cmd->add_option("--program", in.programPath, "program file (.prg)")->required();
    cmd->add_option("--spec", in.specPath, "specification file (.inv)")->required();
    cmd->add_option("--graph", in.graphPath, "proof graph file (.graph); selects g-inv");
    cmd->add_option("--invariant", in.invariant, "invariant to prove with --rule");
    cmd->add_option("--rule", in.rule, "pinv or spinv")->check(CLI::IsMember({"pinv", "spinv"}));
    cmd->add_option("--support", in.supports, "support invariant for spinv (repeatable)");
    cmd->add_option("--tactic", in.tactic, "full, supp, offend or lazy")
        ->check(CLI::IsMember({"full", "supp", "offend", "lazy"}));
    cmd->add_flag("--no-simplify", in.noSimplify, "skip formula simplification");
    cmd->add_flag("--quantified-min", in.quantifiedMin, "add the quantified axiom for set minima");
}

std::vector<std::string> splitCommand(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

int cmdVerify(const Inputs& in, const std::string& solverCmd, double timeout, int jobs, const std::string& reportPath,
              const std::string& dumpDir, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    const Loaded l = load(in, true);
    symmetryGate(l);
    const SupportTactic tactic = tacticOf(in);
    const VcSet set = generate(in, l, tactic);
    if (!dumpDir.empty()) dumpVcs(dumpDir, l, set, in.quantifiedMin);

    DecideConfig cfg;
    cfg.solver.command = splitCommand(solverCmd);
    cfg.solver.timeoutSeconds = timeout;
    cfg.solver.quantifiedMin = in.quantifiedMin;
    cfg.maxLocation = l.program.maxLocation;
    const auto verdicts = decideAll(set, tactic, cfg, jobs);

    Totals totals;
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < set.vcs.size(); ++i) {
        const auto& vc = set.vcs[i];
        const auto& v = verdicts[i];
        totals.add(v);
        ordered_json r;
        r["id"] = vc.id;
        r["invariant"] = vc.invariant;
        r["provenance"] = provenanceJson(vc.provenance);
        r["theoryClass"] = std::string(theoryClassName(vc.theoryClass));
        r["trivial"] = vc.trivial;
        r["dpUsed"] = std::string(dpName(v.dpUsed));
        r["status"] = std::string(statusName(v.status));
        if (vc.lazy) r["lazyRounds"] = v.lazyRounds;
        if (!v.diagnostic.empty()) r["diagnostic"] = v.diagnostic;
        if (v.model) r["model"] = modelJson(*v.model);
        r["elapsed_ms"] = v.elapsedMs;
        rows.push_back(std::move(r));
    }
    const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    ordered_json rep;
    rep["schema"] = kReportSchema;
    rep["command"] = "verify";
    rep["program"] = l.program.name;
    ordered_json config;
    config["programFile"] = in.programPath;
    config["specFile"] = in.specPath;
    if (l.graph) {
        config["rule"] = "ginv";
        config["graphFile"] = in.graphPath;
    } else {
        config["rule"] = in.rule;
        config["invariant"] = in.invariant;
        config["supports"] = in.supports;
    }
    config["tactic"] = in.tactic;
    config["simplify"] = tactic.simplify;
    config["quantifiedMin"] = in.quantifiedMin;
    config["timeoutSeconds"] = timeout;
    config["solver"] = resolveSolverCommand(cfg.solver);
    rep["config"] = std::move(config);
    rep["warnings"] = set.warnings;
    rep["obligations"] = set.obligations;
    rep["parametrizedPremises"] = set.premises.size();
    rep["rows"] = std::move(rows);
    rep["totals"] = totals.json();
    rep["elapsed_ms"] = elapsed;

    for (const auto& w : set.warnings) err << "warning: " << w << "\n";
    printSummary(out, set, verdicts, totals, elapsed);
    if (!reportPath.empty()) writeText(reportPath, rep.dump(2) + "\n");

    if (totals.invalid > 0) return kInvalid;
    if (totals.unknown + totals.timeout > 0) return kInconclusive;
    return kOk;
}

int cmdVcs(const Inputs& in, const std::string& outDir, std::ostream& out)
{
    const Loaded l = load(in, true);
    symmetryGate(l);
    const SupportTactic tactic = tacticOf(in);
    const VcSet set = generate(in, l, tactic);
    dumpVcs(outDir, l, set, in.quantifiedMin);
    out << set.premises.size() << " parametrized premises, " << set.vcs.size() << " VCs written to " << outDir << "\n";
    return kOk;
}

CounterModel readModel(const std::string& path)
{
    ordered_json j;
    try {
        j = ordered_json::parse(readFile(path));
    } catch (const ordered_json::exception& e) {
        throw Error(path + ": " + e.what());
    }
    if (j.contains("assignments")) j = j["assignments"];
    else if (j.contains("model")) j = j["model"]["assignments"];
    if (!j.is_object()) throw Error(path + ": expected a JSON object of variable values");
    CounterModel cm;
    for (const auto& [k, v] : j.items()) {
        if (v.is_boolean()) {
            cm.assignments[k] = Value::boolean(v.get<bool>());
        } else if (v.is_number_integer()) {
            cm.assignments[k] = Value::number(v.get<std::int64_t>());
        } else if (v.is_array()) {
            std::set<std::int64_t> s;
            for (const auto& e : v) s.insert(e.get<std::int64_t>());
            cm.assignments[k] = Value::set(std::move(s));
        } else {
            throw Error(path + ": unsupported value for '" + k + "'");
        }
    }
    return cm;
}

struct OracleArgs {
    int threads = 2;
    int bound = 4;
    std::size_t maxStates = 5'000'000;
    std::vector<std::string> invariants;
    std::string classify;
    std::string dumpStates;
    std::size_t symmetrySamples = 0;
    std::string report;
};

int cmdOracle(const Inputs& in, const OracleArgs& a, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    Inputs noGraph = in;
    const Loaded l = load(noGraph, false);
    OracleConfig cfg{a.threads, a.bound, a.maxStates};
    ordered_json rep;
    rep["schema"] = kReportSchema;
    rep["command"] = "oracle";
    rep["program"] = l.program.name;
    rep["config"] = {{"threads", a.threads}, {"bound", a.bound}, {"maxStates", a.maxStates}};

    Exploration ex = [&] {
        try {
            return explore(l.program, cfg);
        } catch (const StateExplosion& e) {
            out << "inconclusive: " << e.what() << "\n";
            throw;
        }
    }();
    out << ex.states.size() << " reachable states (" << ex.initialCount << " initial)"
        << (ex.bounded ? ", bounded by the integer range" : "") << "\n";
    rep["states"] = ex.states.size();
    rep["bounded"] = ex.bounded;

    if (!a.dumpStates.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < ex.states.size(); ++i) {
            ordered_json s = ordered_json::object();
            for (const auto& [k, v] : stateValues(ex, i)) s[k] = valueJson(v);
            os << s.dump() << "\n";
        }
        writeText(a.dumpStates, os.str());
    }

    int code = kOk;
    std::vector<const NamedFormula*> targets;
    if (a.invariants.empty()) {
        for (const auto& f : l.spec.invariants) targets.push_back(&f);
    } else {
        for (const auto& name : a.invariants) {
            const NamedFormula* f = l.spec.find(name);
            if (!f) throw Error("no invariant named '" + name + "' in " + in.specPath);
            targets.push_back(f);
        }
    }
    ordered_json invs = ordered_json::array();
    for (const auto* f : targets) {
        const auto r = checkInvariant(ex, *f);
        ordered_json j;
        j["invariant"] = f->name;
        j["holds"] = r.holds;
        if (r.holds) {
            out << f->name << ": holds\n";
        } else {
            code = kInvalid;
            out << f->name << ": VIOLATED for";
            for (const auto& [k, v] : r.assignment) out << " " << k << "=" << v;
            out << "\n  state:";
            ordered_json st = ordered_json::object();
            for (const auto& [k, v] : stateValues(ex, *r.witness)) {
                out << " " << k << "=" << v.str();
                st[k] = valueJson(v);
            }
            const auto trace = tracePrefix(ex, *r.witness);
            out << "\n  trace:";
            for (const auto& s : trace) out << " " << s;
            out << "\n";
            j["assignment"] = r.assignment;
            j["witness"] = st;
            j["trace"] = trace;
        }
        invs.push_back(std::move(j));
    }
    rep["invariants"] = std::move(invs);

    if (!a.classify.empty()) {
        const CounterModel cm = readModel(a.classify);
        const auto r = classifyCounterModel(cm, l.program, ex);
        const bool reachable = r.verdict == Classification::Reachable;
        out << "countermodel: " << (reachable ? "Reachable" : "Spurious") << "\n";
        for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
        ordered_json j;
        j["verdict"] = reachable ? "Reachable" : "Spurious";
        j["stepMatches"] = r.stepMatches;
        j["warnings"] = r.warnings;
        rep["classification"] = std::move(j);
        const bool boundIssue = std::any_of(r.warnings.begin(), r.warnings.end(),
                                            [](const std::string& w) { return w.starts_with("BoundTooSmall"); });
        if (reachable) code = kInvalid;
        else if (boundIssue && code == kOk) code = kInconclusive;
    }

    if (a.symmetrySamples > 0) {
        const auto s = checkSymmetry(l.program, ex, l.spec.invariants, a.symmetrySamples);
        out << "symmetry: " << (s.ok ? "ok" : "VIOLATED") << " (" << s.triplesChecked << " triples)\n";
        if (!s.ok) {
            out << "  " << s.counterexample << "\n";
            code = kInvalid;
        }
        rep["symmetry"] = {{"ok", s.ok}, {"triples", s.triplesChecked}, {"counterexample", s.counterexample}};
    }
    rep["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!a.report.empty()) writeText(a.report, rep.dump(2) + "\n");
    return code;
}

} // namespace

std::string stripElapsed(const std::string& reportJson)
{
    ordered_json j = ordered_json::parse(reportJson);
    std::function<void(ordered_json&)> strip = [&](ordered_json& x) {
        if (x.is_object()) {
            x.erase("elapsed_ms");
            for (auto& [k, v] : x.items()) strip(v);
        } else if (x.is_array()) {
            for (auto& v : x) strip(v);
        }
    };
    strip(j);
    return j.dump(2);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Deductive verifier for parametrized concurrent programs"};
    app.name("pinv");
    app.require_subcommand(1);

    Inputs in;
    std::string solverCmd, reportPath, dumpDir, outDir;
    double timeout = 1800;
    int jobs = 1;

    auto* verify = app.add_subcommand("verify", "generate and decide all verification conditions");
    addInputOptions(verify, in);
    verify->add_option("--solver-cmd", solverCmd, "solver command line (default: $PINV_SOLVER or 'z3 -in -smt2')");
    verify->add_option("--timeout", timeout, "per-VC solver timeout in seconds")->check(CLI::PositiveNumber);
    verify->add_option("--jobs", jobs, "parallel solver processes")->check(CLI::PositiveNumber);
    verify->add_option("--report", reportPath, "write the JSON report here");
    verify->add_option("--dump-vcs", dumpDir, "also write .smt2 files and manifest.json here");

    auto* vcs = app.add_subcommand("vcs", "write verification conditions without solving");
    addInputOptions(vcs, in);
    vcs->add_option("--out", outDir, "output directory")->required();

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "bounded explicit-state exploration");
    oracle->add_option("--program", in.programPath, "program file (.prg)")->required();
    oracle->add_option("--spec", in.specPath, "specification file (.inv)")->required();
    oracle->add_option("--threads", oa.threads, "number of threads N")->check(CLI::Range(1, 16));
    oracle->add_option("--bound", oa.bound, "integers range over 0..B-1")->check(CLI::Range(1, 62));
    oracle->add_option("--max-states", oa.maxStates, "abort exploration beyond this many states");
    oracle->add_option("--invariant", oa.invariants, "invariant to check (repeatable; default all)");
    oracle->add_option("--classify", oa.classify, "countermodel JSON to classify as reachable or spurious");
    oracle->add_option("--dump-states", oa.dumpStates, "write reachable states as JSON lines");
    oracle->add_option("--symmetry-samples", oa.symmetrySamples, "check the swap conditions on this many states");
    oracle->add_option("--report", oa.report, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        if (verify->parsed()) return cmdVerify(in, solverCmd, timeout, jobs, reportPath, dumpDir, out, err);
        if (vcs->parsed()) return cmdVcs(in, outDir, out);
        if (oracle->parsed()) return cmdOracle(in, oa, out);
    } catch (const StateExplosion& e) {
        err << "pinv: " << e.what() << "\n";
        return kInconclusive;
    } catch (const std::exception& e) {
        err << "pinv: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

} // namespace pinv::cli
