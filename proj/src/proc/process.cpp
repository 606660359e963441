#include <fcntl.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "dd/process.hpp"

namespace dd::proc {

namespace {

std::atomic<pid_t> g_active_group{0};

void cleanup_handler(int sig) {
  const pid_t group = g_active_group.load();
  if (group > 0) ::kill(-group, SIGKILL);
  ::signal(sig, SIG_DFL);
  ::raise(sig);
}

std::vector<char*> c_strings(const std::vector<std::string>& strings) {
  std::vector<char*> out;
  out.reserve(strings.size() + 1);
  for (const auto& s : strings) out.push_back(const_cast<char*>(s.c_str()));
  out.push_back(nullptr);
  return out;
}

[[noreturn]] void child_fail(int fd) {
  const int err = errno;
  [[maybe_unused]] auto n = ::write(fd, &err, sizeof err);
  ::_exit(127);
}

}  // namespace

void install_signal_cleanup() {
  struct sigaction sa {};
  sa.sa_handler = cleanup_handler;
  sigemptyset(&sa.sa_mask);
  for (int sig : {SIGINT, SIGTERM, SIGHUP}) ::sigaction(sig, &sa, nullptr);
}

ProcessResult run_process(const ProcessRequest& request) {
  if (request.argv.empty()) throw CommandError("empty command");

  auto argv = c_strings(request.argv);
  auto envp = c_strings(request.env);
  const std::string cwd = request.cwd.string();
  const std::string out_path = request.stdout_path.empty() ? "/dev/null" : request.stdout_path.string();
  const std::string err_path = request.stderr_path.empty() ? "/dev/null" : request.stderr_path.string();

  int report[2];
  if (::pipe2(report, O_CLOEXEC) != 0)
    throw std::runtime_error(std::string("pipe2: ") + std::strerror(errno));

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    const int err = errno;
    ::close(report[0]);
    ::close(report[1]);
    throw std::runtime_error(std::string("fork: ") + std::strerror(err));
  }
  if (pid == 0) {
    ::close(report[0]);
    ::setpgid(0, 0);
    const int in = ::open("/dev/null", O_RDONLY);
    const int out = ::open(out_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    const int err = ::open(err_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (in < 0 || out < 0 || err < 0) child_fail(report[1]);
    if (::dup2(in, 0) < 0 || ::dup2(out, 1) < 0 || ::dup2(err, 2) < 0) child_fail(report[1]);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) child_fail(report[1]);
    ::execvpe(argv[0], argv.data(), envp.data());
    child_fail(report[1]);
  }

  ::setpgid(pid, pid);  // also done in the child; whichever runs first wins
  g_active_group.store(pid);
  ::close(report[1]);

  int exec_errno = 0;
  ssize_t got;
  do {
    got = ::read(report[0], &exec_errno, sizeof exec_errno);
  } while (got < 0 && errno == EINTR);
  ::close(report[0]);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    int ignored;
    ::waitpid(pid, &ignored, 0);
    g_active_group.store(0);
    throw CommandError("cannot execute '" + request.argv.front() + "': " + std::strerror(exec_errno));
  }

  int wstatus = 0;
  bool timed_out = false;
  auto backoff = std::chrono::microseconds(200);
  const auto deadline = start + request.timeout;
  while (true) {
    const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      ::kill(-pid, SIGKILL);
      while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
      }
      timed_out = true;
      break;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::microseconds>(deadline - now);
    std::this_thread::sleep_for(std::min(backoff, remaining));
    backoff = std::min(backoff * 2, std::chrono::microseconds(10000));
  }
  // Reap stragglers that outlived the group leader.
  ::kill(-pid, SIGKILL);
  g_active_group.store(0);

  ProcessResult result;
  result.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (timed_out)
    result.status = ExitStatus::timeout();
  else if (WIFSIGNALED(wstatus))
    result.status = ExitStatus::signal(WTERMSIG(wstatus));
  else
    result.status = ExitStatus::code(WEXITSTATUS(wstatus));
  return result;
}

}  // namespace dd::proc
