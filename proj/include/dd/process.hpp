#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dd/configuration.hpp"
#include "dd/oracle.hpp"

namespace dd::proc {

enum class ExitKind { Code, Signal, Timeout, NotRun };

struct ExitStatus {
  ExitKind kind = ExitKind::NotRun;
  int value = 0;  // exit code or signal number

  static ExitStatus code(int c) { return {ExitKind::Code, c}; }
  static ExitStatus signal(int s) { return {ExitKind::Signal, s}; }
  static ExitStatus timeout() { return {ExitKind::Timeout, 0}; }
  static ExitStatus not_run() { return {ExitKind::NotRun, 0}; }
};

/// Interestingness protocol:
///   0            -> Fail (failure reproduced)
///   1..124       -> Pass
///   125          -> Unresolved (skip)
///   126, 127     -> Pass
///   >= 128       -> Unresolved
///   signal       -> Unresolved
///   timeout      -> Unresolved
///   not run      -> Unresolved (materialization conflict)
Outcome map_exit_status(const ExitStatus& status);

std::string describe(const ExitStatus& status);

/// The command could not be started at all (missing, not executable).
class CommandError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ProcessRequest {
  std::vector<std::string> argv;
  std::filesystem::path cwd;
  std::vector<std::string> env;  // "KEY=VALUE"
  std::chrono::milliseconds timeout{60000};
  std::filesystem::path stdout_path;
  std::filesystem::path stderr_path;
};

struct ProcessResult {
  ExitStatus status;
  double duration_ms = 0.0;
};

/// Runs argv in its own process group with stdin from /dev/null and output
/// redirected to files. On timeout the whole group is killed. Any
/// processes left in the group after the leader exits are killed too.
/// Throws CommandError when exec fails.
ProcessResult run_process(const ProcessRequest& request);

/// Installs SIGINT/SIGTERM/SIGHUP handlers that kill the running test's
/// process group before the CLI exits.
void install_signal_cleanup();

struct ExecutionEvidence {
  ExitStatus status;
  std::filesystem::path stdout_path;
  std::filesystem::path stderr_path;
  std::filesystem::path workspace;
  double duration_ms = 0.0;
  std::string conflict;  // set when materialization failed
};

struct MaterializeResult {
  bool ok = true;
  std::string conflict;
  /// Appended to the test command's argv.
  std::vector<std::string> extra_args;

  static MaterializeResult conflicted(std::string why) { return {false, std::move(why), {}}; }
};

/// Writes the scenario for a configuration into an empty workspace.
class Materializer {
public:
  virtual ~Materializer() = default;
  virtual MaterializeResult materialize(const Configuration& config,
                                        const std::filesystem::path& workspace) = 0;
};

struct CommandOracleSpec {
  std::vector<std::string> argv;
  std::chrono::milliseconds timeout{60000};
  std::filesystem::path workspace_root;  // empty: system temp directory
  bool keep_failing = false;
  bool env_passthrough = true;
};

void validate(const CommandOracleSpec& spec);

/// Evaluates configurations by materializing each into a fresh workspace
/// and running the test command inside it. Sets DDMIN_TEST_SEQ,
/// DDMIN_CONFIG_SIZE and DDMIN_UNIVERSE_SIZE for the command.
class CommandOracle final : public TestOracle {
public:
  CommandOracle(CommandOracleSpec spec, Materializer& materializer);
  ~CommandOracle() override;
  CommandOracle(const CommandOracle&) = delete;
  CommandOracle& operator=(const CommandOracle&) = delete;

  Evaluation evaluate(const Configuration& config) override;

  std::pair<Outcome, ExecutionEvidence> run(const Configuration& config);

  /// Directory holding this oracle's workspaces (removed on destruction if
  /// nothing was kept).
  const std::filesystem::path& run_dir() const noexcept { return run_dir_; }
  std::size_t tests_run() const noexcept { return seq_; }

  struct CapturedOutput {
    std::string out;
    std::string err;
  };
  /// Output captured for a failing configuration, if any was recorded.
  std::optional<CapturedOutput> failing_output(const Configuration& config) const;

private:
  CommandOracleSpec spec_;
  Materializer& materializer_;
  std::filesystem::path run_dir_;
  std::size_t seq_ = 0;
  bool kept_any_ = false;
  std::vector<std::string> base_env_;
  std::map<std::string, CapturedOutput> failing_outputs_;
};

/// One-shot form of CommandOracle::run (test ordinal 1).
std::pair<Outcome, ExecutionEvidence> evaluate_command(const CommandOracleSpec& spec,
                                                       Materializer& materializer,
                                                       const Configuration& config);

}  // namespace dd::proc
