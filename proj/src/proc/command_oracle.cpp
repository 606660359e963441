#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <system_error>

#include "dd/process.hpp"

extern char** environ;

namespace dd::proc {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxCapturedBytes = std::size_t{1} << 20;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string data;
  if (!in) return data;
  data.resize(kMaxCapturedBytes);
  in.read(data.data(), static_cast<std::streamsize>(data.size()));
  data.resize(static_cast<std::size_t>(in.gcount()));
  return data;
}

void remove_quietly(const fs::path& p) {
  std::error_code ec;
  fs::remove_all(p, ec);
}

std::string seq_name(std::size_t seq) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "test-%06zu", seq);
  return buf;
}

}  // namespace

void validate(const CommandOracleSpec& spec) {
  if (spec.argv.empty() || spec.argv.front().empty())
    throw std::invalid_argument("test command is empty");
  if (spec.timeout.count() <= 0) throw std::invalid_argument("timeout must be positive");
}

CommandOracle::CommandOracle(CommandOracleSpec spec, Materializer& materializer)
    : spec_(std::move(spec)), materializer_(materializer) {
  validate(spec_);

  // Workspaces become the command's cwd, so a relative program path must be
  // pinned to the invocation directory now.
  if (spec_.argv.front().find('/') != std::string::npos)
    spec_.argv.front() = fs::absolute(spec_.argv.front()).lexically_normal().string();

  fs::path root = spec_.workspace_root.empty() ? fs::temp_directory_path() / "ddmin"
                                               : fs::absolute(spec_.workspace_root);
  fs::create_directories(root);
  std::string tmpl = (root / "run-XXXXXX").string();
  if (::mkdtemp(tmpl.data()) == nullptr)
    throw std::runtime_error("cannot create workspace directory under '" + root.string() +
                             "': " + std::strerror(errno));
  run_dir_ = tmpl;

  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    std::string_view kv(*e);
    if (kv.starts_with("DDMIN_")) continue;
    if (spec_.env_passthrough || kv.starts_with("PATH=")) base_env_.emplace_back(kv);
  }
}

CommandOracle::~CommandOracle() {
  if (!kept_any_) remove_quietly(run_dir_);
}

std::pair<Outcome, ExecutionEvidence> CommandOracle::run(const Configuration& config) {
  ++seq_;
  ExecutionEvidence evidence;
  evidence.workspace = run_dir_ / seq_name(seq_);
  remove_quietly(evidence.workspace);
  fs::create_directories(evidence.workspace);

  const MaterializeResult staged = materializer_.materialize(config, evidence.workspace);
  if (!staged.ok) {
    evidence.status = ExitStatus::not_run();
    evidence.conflict = staged.conflict;
    remove_quietly(evidence.workspace);
    return {Outcome::Unresolved, evidence};
  }

  ProcessRequest request;
  request.argv = spec_.argv;
  request.argv.insert(request.argv.end(), staged.extra_args.begin(), staged.extra_args.end());
  request.cwd = evidence.workspace;
  request.env = base_env_;
  request.env.push_back("DDMIN_TEST_SEQ=" + std::to_string(seq_));
  request.env.push_back("DDMIN_CONFIG_SIZE=" + std::to_string(config.size()));
  request.env.push_back("DDMIN_UNIVERSE_SIZE=" + std::to_string(config.universe_size()));
  request.timeout = spec_.timeout;
  request.stdout_path = run_dir_ / (seq_name(seq_) + ".stdout");
  request.stderr_path = run_dir_ / (seq_name(seq_) + ".stderr");
  evidence.stdout_path = request.stdout_path;
  evidence.stderr_path = request.stderr_path;

  ProcessResult result;
  try {
    result = run_process(request);
  } catch (...) {
    remove_quietly(evidence.workspace);
    remove_quietly(request.stdout_path);
    remove_quietly(request.stderr_path);
    throw;
  }
  evidence.status = result.status;
  evidence.duration_ms = result.duration_ms;
  const Outcome outcome = map_exit_status(result.status);

  if (outcome == Outcome::Fail)
    failing_outputs_[config.bitmap().to_hex()] = {slurp(request.stdout_path), slurp(request.stderr_path)};

  if (spec_.keep_failing && outcome == Outcome::Fail) {
    kept_any_ = true;
  } else {
    remove_quietly(evidence.workspace);
    remove_quietly(request.stdout_path);
    remove_quietly(request.stderr_path);
  }
  return {outcome, evidence};
}

Evaluation CommandOracle::evaluate(const Configuration& config) {
  return {run(config).first, Source::Oracle};
}

std::optional<CommandOracle::CapturedOutput> CommandOracle::failing_output(
    const Configuration& config) const {
  if (auto it = failing_outputs_.find(config.bitmap().to_hex()); it != failing_outputs_.end())
    return it->second;
  return std::nullopt;
}

std::pair<Outcome, ExecutionEvidence> evaluate_command(const CommandOracleSpec& spec,
                                                       Materializer& materializer,
                                                       const Configuration& config) {
  CommandOracle oracle(spec, materializer);
  return oracle.run(config);
}

}  // namespace dd::proc
