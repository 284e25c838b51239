#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "pinv/cli.hpp"
#include "pinv/errors.hpp"
#include "pinv/solve.hpp"

using pinv::testing::corpusPath;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun pinvRun(std::vector<std::string> args)
{
    args.insert(args.begin(), "pinv");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = pinv::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / "pinv_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json readJson(const fs::path& p)
{
    std::ifstream in(p);
    return json::parse(in);
}

bool solverAvailable()
{
    try {
        pinv::runSolver(pinv::emitSmt(pinv::mk::boolLit(true), pinv::mk::boolLit(true), {}), {});
        return true;
    } catch (const pinv::SolverNotFound&) {
        return false;
    }
}

std::vector<std::string> intSect() { return {"--program", corpusPath("critical_int_sect.prg"), "--spec", corpusPath("critical_int_sect.inv")}; }

CliRun pinvRunWith(const std::string& cmd, std::vector<std::string> a, const std::vector<std::string>& b)
{
    a.insert(a.begin(), cmd);
    a.insert(a.end(), b.begin(), b.end());
    return pinvRun(std::move(a));
}

} // namespace

TEST(Cli, VcsWritesManifestAndOneFilePerVc)
{
    const fs::path out = scratch("vcs");
    const CliRun r = pinvRun(std::vector<std::string>{"vcs", "--program", corpusPath("critical_sect.prg"), "--spec",
                                                   corpusPath("critical_sect.inv"), "--invariant", "mutex", "--out",
                                                   out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const json m = readJson(out / "manifest.json");
    EXPECT_EQ(m["schema"], "pinv.manifest/1");
    EXPECT_EQ(m["premises"].size(), 22u);
    for (const auto& vc : m["vcs"]) EXPECT_TRUE(fs::exists(out / (vc["id"].get<std::string>() + ".smt2")));
    EXPECT_TRUE(fs::exists(out / "mutex__P1__t0__a00.smt2"));
}

TEST(Cli, ParseErrorsNameTheFile)
{
    const fs::path dir = scratch("bad");
    std::ofstream(dir / "bad.prg") << "program B\nprocedure main()\n begin\n 1: await (\n end\n";
    const CliRun r = pinvRun({"vcs", "--program", (dir / "bad.prg").string(), "--spec",
                           corpusPath("critical_int_sect.inv"), "--invariant", "mutex", "--out", dir.string()});
    EXPECT_EQ(r.code, pinv::cli::kError);
    EXPECT_NE(r.err.find("bad.prg:5:"), std::string::npos) << r.err;
}

TEST(Cli, AsymmetricSpecIsRefused)
{
    const fs::path dir = scratch("asym");
    std::ofstream(dir / "asym.inv") << "invariant ord(i, j) := i < j -> ticket(i) < ticket(j)\n";
    const CliRun r = pinvRun(std::vector<std::string>{"vcs", "--program", corpusPath("critical_int_sect.prg"), "--spec",
                                                   (dir / "asym.inv").string(), "--invariant", "ord", "--out",
                                                   dir.string()});
    EXPECT_EQ(r.code, pinv::cli::kError);
    EXPECT_NE(r.err.find("i < j"), std::string::npos) << r.err;
}

TEST(Cli, MissingSolverIsAnError)
{
    const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--invariant", "activelow", "--solver-cmd", "/nonexistent/solver"});
    EXPECT_EQ(r.code, pinv::cli::kError) << r.out << r.err;
}

TEST(Cli, UnknownInvariantIsAnError)
{
    const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--invariant", "nosuch"});
    EXPECT_EQ(r.code, pinv::cli::kError);
}

TEST(Cli, GraphProofSucceeds)
{
    if (!solverAvailable()) GTEST_SKIP() << "no SMT solver";
    const fs::path dir = scratch("graph");
    const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--graph", corpusPath("critical_int_sect.graph"), "--report",
                                                   (dir / "r.json").string()});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    const json rep = readJson(dir / "r.json");
    EXPECT_EQ(rep["schema"], "pinv.report/1");
    EXPECT_EQ(rep["totals"]["invalid"], 0);
    EXPECT_EQ(rep["totals"]["valid"].get<int>() + rep["totals"]["provedByPosition"].get<int>(),
              rep["totals"]["generated"].get<int>());
}

TEST(Cli, MutexAloneFails)
{
    if (!solverAvailable()) GTEST_SKIP() << "no SMT solver";
    const fs::path dir = scratch("mutex");
    const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--invariant", "mutex", "--rule", "pinv", "--report",
                                                   (dir / "r.json").string()});
    EXPECT_EQ(r.code, pinv::cli::kInvalid);
    const json rep = readJson(dir / "r.json");
    int invalid = 0;
    for (const auto& row : rep["rows"]) {
        if (row["status"] != "invalid") continue;
        ++invalid;
        EXPECT_EQ(row["provenance"]["transition"], 4);
        EXPECT_TRUE(row.contains("model"));
    }
    EXPECT_GT(invalid, 0);
}

TEST(Cli, SupportedMutexSucceeds)
{
    if (!solverAvailable()) GTEST_SKIP() << "no SMT solver";
    const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--invariant", "mutex", "--rule", "spinv", "--support", "minticket",
                                                   "--support", "notsame"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
}

TEST(Cli, OracleExitCodes)
{
    EXPECT_EQ(pinvRunWith("oracle", intSect(), std::vector<std::string>{"--threads", "2", "--bound", "4"})
                  .code,
              0);

    const fs::path dir = scratch("oracle");
    std::ofstream(dir / "bad.inv") << "invariant nevercrit(i) := pc(i) != 5\n";
    const CliRun viol = pinvRun(std::vector<std::string>{"oracle", "--program", corpusPath("critical_int_sect.prg"),
                                                      "--spec", (dir / "bad.inv").string(), "--threads", "2"});
    EXPECT_EQ(viol.code, pinv::cli::kInvalid);

    const CliRun cap = pinvRunWith("oracle", intSect(), std::vector<std::string>{"--threads", "3", "--bound", "5", "--max-states", "10"});
    EXPECT_EQ(cap.code, pinv::cli::kInconclusive);
}

TEST(Cli, OracleClassifiesModelFile)
{
    const fs::path dir = scratch("classify");
    std::ofstream(dir / "m.json") << R"({"assignments": {"pc[0]": 4, "pc[1]": 5, "setMin": 1, "tick": 2,
        "ticket[0]": 1, "ticket[1]": 1, "pc'[0]": 5, "pc'[1]": 5}})";
    const CliRun r = pinvRunWith("oracle", intSect(), std::vector<std::string>{"--threads", "2", "--bound", "4", "--classify",
                                                   (dir / "m.json").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Spurious"), std::string::npos) << r.out;
}

TEST(Cli, StripElapsedRemovesTimingOnly)
{
    const std::string in = R"({"a":1,"elapsed_ms":3.5,"rows":[{"id":"x","elapsed_ms":1},{"id":"y"}]})";
    const json out = json::parse(pinv::cli::stripElapsed(in));
    EXPECT_EQ(out, json::parse(R"({"a":1,"rows":[{"id":"x"},{"id":"y"}]})"));
}

TEST(Cli, ReportsAreIndependentOfJobs)
{
    if (!solverAvailable()) GTEST_SKIP() << "no SMT solver";
    const fs::path dir = scratch("jobs");
    std::string reports[2];
    int i = 0;
    for (const char* jobs : {"1", "4"}) {
        const fs::path rp = dir / ("r" + std::string(jobs) + ".json");
        const CliRun r = pinvRunWith("verify", intSect(), std::vector<std::string>{"--graph", corpusPath("critical_int_sect.graph"), "--jobs", jobs,
                                                       "--report", rp.string()});
        ASSERT_EQ(r.code, 0) << r.err;
        std::ifstream in(rp);
        std::stringstream ss;
        ss << in.rdbuf();
        reports[i++] = pinv::cli::stripElapsed(ss.str());
    }
    EXPECT_EQ(reports[0], reports[1]);
}

TEST(Cli, UsageErrorsExitThree)
{
    EXPECT_EQ(pinvRun({"verify"}).code, pinv::cli::kError);
    EXPECT_EQ(pinvRun({"frobnicate"}).code, pinv::cli::kError);
}
