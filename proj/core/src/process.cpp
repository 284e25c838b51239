#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "pinv/errors.hpp"
#include "pinv/solve.hpp"

namespace pinv {

namespace {

std::vector<std::string> splitWords(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

bool executable(const std::string& path)
{
    struct stat st {};
    return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) && ::access(path.c_str(), X_OK) == 0;
}

std::string locate(const std::string& exe)
{
    if (exe.find('/') != std::string::npos) {
        if (executable(exe)) return exe;
        throw SolverNotFound("solver '" + exe + "' is not an executable file");
    }
    const char* path = std::getenv("PATH");
    std::istringstream dirs(path ? path : "/usr/local/bin:/usr/bin:/bin");
    for (std::string dir; std::getline(dirs, dir, ':');) {
        const std::string cand = (dir.empty() ? "." : dir) + "/" + exe;
        if (executable(cand)) return cand;
    }
    throw SolverNotFound("solver '" + exe + "' not found on PATH (set --solver-cmd or PINV_SOLVER)");
}

struct ProcessResult {
    std::string out;
    std::string err;
    int status = 0;
    bool timedOut = false;
};

ProcessResult runProcess(const std::vector<std::string>& argv, const std::string& input, double timeoutSeconds)
{
    const std::string exe = locate(argv.at(0));
    int in[2], out[2], err[2];
    if (::pipe(in) != 0 || ::pipe(out) != 0 || ::pipe(err) != 0) throw Error(std::string("pipe: ") + std::strerror(errno));

    const pid_t pid = ::fork();
    if (pid < 0) throw Error(std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        ::dup2(in[0], 0);
        ::dup2(out[1], 1);
        ::dup2(err[1], 2);
        for (int fd : {in[0], in[1], out[0], out[1], err[0], err[1]}) ::close(fd);
        std::vector<char*> args;
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        ::execv(exe.c_str(), args.data());
        ::_exit(127);
    }
    ::close(in[0]);
    ::close(out[1]);
    ::close(err[1]);
    for (int fd : {in[1], out[0], err[0]}) ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);

    ProcessResult r;
    std::size_t written = 0;
    int inFd = in[1];
    if (input.empty()) {
        ::close(inFd);
        inFd = -1;
    }
    bool outOpen = true, errOpen = true;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeoutSeconds);
    char buf[65536];
    while (outOpen || errOpen) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            r.timedOut = true;
            break;
        }
        const int waitMs = static_cast<int>(
            std::min<long long>(1000, std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1));
        pollfd fds[3];
        int n = 0;
        int outIdx = -1, errIdx = -1, inIdx = -1;
        if (outOpen) {
            outIdx = n;
            fds[n++] = {out[0], POLLIN, 0};
        }
        if (errOpen) {
            errIdx = n;
            fds[n++] = {err[0], POLLIN, 0};
        }
        if (inFd >= 0) {
            inIdx = n;
            fds[n++] = {inFd, POLLOUT, 0};
        }
        if (::poll(fds, static_cast<nfds_t>(n), waitMs) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (inIdx >= 0 && (fds[inIdx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            const ssize_t w = ::write(inFd, input.data() + written, input.size() - written);
            if (w > 0) written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EAGAIN) written = input.size();
            if (written >= input.size()) {
                ::close(inFd);
                inFd = -1;
            }
        }
        auto drain = [&](int idx, int fd, std::string& sink, bool& open) {
            if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR))) return;
            const ssize_t k = ::read(fd, buf, sizeof buf);
            if (k > 0) {
                sink.append(buf, static_cast<std::size_t>(k));
            } else if (k == 0 || errno != EAGAIN) {
                open = false;
            }
        };
        drain(outIdx, out[0], r.out, outOpen);
        drain(errIdx, err[0], r.err, errOpen);
    }
    if (inFd >= 0) ::close(inFd);
    ::close(out[0]);
    ::close(err[0]);
    if (r.timedOut) ::kill(pid, SIGKILL);
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    r.status = status;
    return r;
}

} // namespace

std::vector<std::string> resolveSolverCommand(const SolverConfig& cfg)
{
    if (!cfg.command.empty()) return cfg.command;
    if (const char* env = std::getenv("PINV_SOLVER"); env && *env) {
        auto words = splitWords(env);
        if (words.size() == 1) words.insert(words.end(), {"-in", "-smt2"});
        return words;
    }
    return {"z3", "-in", "-smt2"};
}

SolverVerdict runSolver(const SmtScript& script, const SolverConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    // Ignore SIGPIPE so a solver that dies early cannot kill us mid-write.
    static const bool sigpipeIgnored = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipeIgnored;

    const auto argv = resolveSolverCommand(cfg);
    const ProcessResult pr = runProcess(argv, script.text, cfg.timeoutSeconds);

    SolverVerdict v;
    v.dpUsed = DpUsed::Smt;
    auto finish = [&]() -> SolverVerdict {
        v.elapsedMs = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return v;
    };
    if (pr.timedOut) {
        v.status = Status::Timeout;
        v.diagnostic = "solver exceeded " + std::to_string(cfg.timeoutSeconds) + " s";
        return finish();
    }
    if (WIFEXITED(pr.status) && WEXITSTATUS(pr.status) == 127 && pr.out.empty()) {
        throw SolverNotFound("could not execute solver '" + argv[0] + "'");
    }
    const auto nl = pr.out.find('\n');
    std::string first = pr.out.substr(0, nl);
    while (!first.empty() && std::isspace(static_cast<unsigned char>(first.back()))) first.pop_back();
    if (first == "unsat") {
        v.status = Status::Valid;
    } else if (first == "sat") {
        v.status = Status::Invalid;
        v.model = parseModel(nl == std::string::npos ? std::string_view{} : std::string_view(pr.out).substr(nl + 1),
                             script.symbols);
    } else if (first == "unknown") {
        v.status = Status::Unknown;
        v.diagnostic = "solver returned unknown";
    } else {
        v.status = Status::Unknown;
        std::string why = WIFSIGNALED(pr.status) ? "solver killed by signal " + std::to_string(WTERMSIG(pr.status))
                                                 : "unexpected solver output";
        const std::string detail = !pr.err.empty() ? pr.err : pr.out;
        v.diagnostic = why + (detail.empty() ? "" : ": " + detail.substr(0, 200));
    }
    return finish();
}

} // namespace pinv
