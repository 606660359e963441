// ddmin: delta debugging front-end.
//
//   ddmin minimize-input   --input FILE --test CMD [ARGS...]
//   ddmin minimize-changes --baseline DIR --diff FILE --test CMD [ARGS...]
//   ddmin reduce-trace     --program FILE --stdin TOKENS [--expect TEXT]
//   ddmin bench            --oracle NAME --sizes LIST
//
// Exit status: 0 success, 1 usage or hard error, 2 axiom violation.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dd/bench.hpp"
#include "dd/changes.hpp"
#include "dd/input.hpp"
#include "dd/process.hpp"
#include "dd/report.hpp"
#include "dd/trace.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAxiom = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::vector<std::string> test;
  std::vector<std::string> tail;  // arguments after "--"
  std::string report;
  std::string cache;
  std::string output;
  double timeout_s = 60.0;
  std::string workspace;
  bool keep_failing = false;
  bool monotone = false;
  bool deterministic = false;
  bool verbose = false;
  bool verify = false;
};

void add_engine_flags(CLI::App* sub, Common& c) {
  sub->add_option("--report", c.report, "Write the JSON report here");
  sub->add_option("--cache", c.cache, "Outcome cache file (loaded, then appended)");
  sub->add_flag("--monotone-cache", c.monotone, "Skip subsets of passing configurations");
  sub->add_flag("--deterministic-report", c.deterministic, "Zero all timing fields in the report");
  sub->add_flag("-v,--verbose", c.verbose, "Print one log line per test");
  sub->add_flag("--verify-minimality", c.verify, "Check the result for 1-minimality afterwards");
}

void add_command_flags(CLI::App* sub, Common& c) {
  sub->add_option("--test", c.test, "Test command; exit 0 means the failure reproduces")->expected(1, -1);
  sub->add_option("--timeout", c.timeout_s, "Per-test timeout in seconds")->check(CLI::PositiveNumber);
  sub->add_option("--workspace", c.workspace, "Directory for test workspaces");
  sub->add_flag("--keep-failing", c.keep_failing, "Keep the workspaces of failing tests");
  sub->add_option("tail", c.tail, "Test command given after --");
  add_engine_flags(sub, c);
}

dd::proc::CommandOracleSpec command_spec(const Common& c) {
  dd::proc::CommandOracleSpec spec;
  spec.argv = c.test;
  spec.argv.insert(spec.argv.end(), c.tail.begin(), c.tail.end());
  if (spec.argv.empty()) throw UsageError("--test is required");
  spec.timeout = std::chrono::milliseconds(static_cast<long long>(c.timeout_s * 1000.0));
  spec.workspace_root = c.workspace;
  spec.keep_failing = c.keep_failing;
  dd::proc::validate(spec);
  return spec;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
}

// Engine options plus whatever must outlive the run (cache state).
class EngineSetup {
public:
  EngineSetup(const Common& c, std::size_t universe_size, const std::string& cache_path) : verbose_(c.verbose) {
    opts.monotone = c.monotone;
    opts.verify_minimality = c.verify;
    opts.measure_time = !c.deterministic;
    if (!cache_path.empty()) {
      auto loaded = dd::report::read_cache(cache_path, universe_size);
      for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
      preload_ = std::move(loaded.entries);
      opts.preload = &preload_;
      appender_ = std::make_unique<dd::report::CacheAppender>(cache_path);
      opts.on_cache_store = [this](const dd::Bitmap& key, dd::Outcome o) { appender_->append(key, o); };
    }
    opts.on_test = [this](const dd::TestRecord& rec, const dd::EngineState& st) {
      ++tests_;
      if (verbose_) {
        std::cout << dd::report::render_log_line(rec, rec.config.bits()) << '\n';
      } else if (tests_ % 25 == 0) {
        std::cerr << "[ddmin] " << tests_ << " tests, current size " << st.current.size() << ", granularity "
                  << st.granularity << '\n';
      }
    };
  }

  dd::EngineOptions opts;

private:
  bool verbose_;
  std::size_t tests_ = 0;
  dd::CacheEntries preload_;
  std::unique_ptr<dd::report::CacheAppender> appender_;
};

void emit_report(const Common& c, const fs::path& path, std::size_t universe_size, dd::MinimizationResult result) {
  if (path.empty()) return;
  if (c.deterministic) result.log.clear_durations();
  dd::report::write_report(dd::report::make_report(universe_size, result.final, result.log, result.verified_1_minimal),
                           path);
}

void emit_partial_report(const Common& c, const fs::path& path, std::size_t universe_size, dd::RunLog log) {
  if (path.empty()) return;
  if (c.deterministic) log.clear_durations();
  dd::report::write_report(dd::report::make_partial_report(universe_size, log), path);
}

void emit_captured(const Common& c, const dd::proc::CommandOracle* oracle, const dd::Configuration& final) {
  if (c.report.empty() || oracle == nullptr) return;
  if (auto captured = oracle->failing_output(final)) {
    write_file(c.report + ".stdout", captured->out);
    write_file(c.report + ".stderr", captured->err);
  }
}

void summarize(const dd::MinimizationResult& r, std::size_t universe_size) {
  std::cerr << "[ddmin] " << universe_size << " -> " << r.final.size() << " deltas, " << r.log.oracle_tests()
            << " tests run, " << (r.log.size() - r.log.oracle_tests() - r.log.axiom_tests())
            << " answered without running\n";
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  return path.empty() ? path : path + suffix;
}

// ---------------------------------------------------------------------------

struct InputArgs {
  std::string input;
  std::string granularity = "line,char";
};

int cmd_minimize_input(const Common& c, const InputArgs& a) {
  const auto spec = command_spec(c);
  const auto schedule = dd::input::parse_schedule(a.granularity);
  std::string current = read_file(a.input);
  const std::string output = c.output.empty() ? a.input + ".min" : c.output;

  dd::input::CommandFactory factory;
  factory.spec = spec;
  factory.file_name = fs::path(a.input).filename().string();
  const auto make = factory.factory();
  const bool multi = schedule.size() > 1;

  for (std::size_t p = 0; p < schedule.size(); ++p) {
    const auto g = schedule[p];
    const auto tokens = dd::input::tokenize(current, g);
    const std::string tag = "." + std::string(dd::input::granularity_name(g));
    const std::string report = multi && p + 1 < schedule.size() ? with_suffix(c.report, tag) : c.report;
    EngineSetup setup(c, tokens.size(), multi ? with_suffix(c.cache, tag) : c.cache);
    auto oracle = make(tokens);
    std::cerr << "[ddmin] pass " << p + 1 << " (" << dd::input::granularity_name(g) << "): " << tokens.size()
              << " tokens\n";
    try {
      auto result = dd::ddmin(tokens.full(), *oracle, setup.opts);
      summarize(result, tokens.size());
      current = dd::input::render(tokens, result.final);
      if (p + 1 == schedule.size()) emit_captured(c, factory.last_oracle(), result.final);
      emit_report(c, report, tokens.size(), std::move(result));
    } catch (const dd::AxiomViolation& e) {
      emit_partial_report(c, report, tokens.size(), e.log);
      throw dd::input::PassAxiomViolation(p, g, e);
    }
  }
  write_file(output, current);
  std::cerr << "[ddmin] wrote " << current.size() << " bytes to " << output << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ChangeArgs {
  std::string baseline;
  std::string diff;
  std::string deps;
  std::string groups;
};

// Owns the materializer backing a command oracle.
class TreeCommandOracle final : public dd::TestOracle {
public:
  TreeCommandOracle(const dd::proc::CommandOracleSpec& spec, const dd::changes::Tree& baseline,
                    const dd::changes::ChangeSet& set, dd::changes::ChangeMapper mapper)
      : materializer_(baseline, set, std::move(mapper)), oracle_(spec, materializer_) {}
  dd::Evaluation evaluate(const dd::Configuration& c) override { return oracle_.evaluate(c); }
  const dd::proc::CommandOracle& command() const { return oracle_; }

private:
  dd::changes::TreeMaterializer materializer_;
  dd::proc::CommandOracle oracle_;
};

int cmd_minimize_changes(const Common& c, const ChangeArgs& a) {
  namespace ch = dd::changes;
  const auto spec = command_spec(c);
  const ch::Tree baseline = ch::load_tree(a.baseline);
  std::vector<ch::Dependency> deps;
  if (!a.deps.empty()) deps = ch::parse_dependency_tsv(read_file(a.deps));
  const ch::ChangeSet set = ch::build_change_set(baseline, read_file(a.diff), std::move(deps));
  std::cerr << "[ddmin] " << set.changes.size() << " changes, " << set.dependencies.size()
            << " dependency edges\n";

  std::optional<ch::GroupedUniverse> groups;
  if (a.groups == "file") {
    groups = ch::group_deltas(set.changes, ch::GroupKind::File);
  } else if (a.groups == "dir" || a.groups == "directory") {
    groups = ch::group_deltas(set.changes, ch::GroupKind::Directory);
  } else if (!a.groups.empty()) {
    const auto map = ch::parse_group_tsv(read_file(a.groups));
    groups = ch::group_deltas(set.changes, ch::GroupKind::Custom, &map);
  }

  TreeCommandOracle* last = nullptr;
  const ch::ChangeOracleFactory factory = [&](const ch::ChangeMapper& mapper) -> std::unique_ptr<dd::TestOracle> {
    auto o = std::make_unique<TreeCommandOracle>(spec, baseline, set, mapper);
    last = o.get();
    return o;
  };

  // minimize_changes drives both passes with one options object; cache
  // files are per universe, so keep the cache for the member pass only.
  const std::size_t member_universe = groups ? 0 : set.changes.size();
  EngineSetup setup(c, member_universe, groups ? std::string() : c.cache);
  if (groups && !c.cache.empty()) std::cerr << "warning: --cache is ignored together with --groups\n";

  ch::ChangeMinimization result;
  try {
    result = ch::minimize_changes(set, factory, groups, setup.opts);
  } catch (const dd::AxiomViolation& e) {
    emit_partial_report(c, c.report, set.changes.size(), e.log);
    throw;
  }
  if (result.group_pass) {
    std::cerr << "[ddmin] group pass: " << result.groups->size() << " groups -> " << result.group_pass->final.size()
              << '\n';
    emit_report(c, with_suffix(c.report, ".groups"), result.groups->size(), *result.group_pass);
  }
  summarize(result.member_pass, result.member_universe.size());
  if (last != nullptr) emit_captured(c, &last->command(), result.member_pass.final);
  emit_report(c, c.report, result.member_universe.size(), result.member_pass);

  const std::string output = c.output.empty() ? a.diff + ".min" : c.output;
  write_file(output, ch::render_diff(set.changes, result.final_changes));
  std::cerr << "[ddmin] failure-inducing changes:";
  for (auto id : result.final_changes) std::cerr << ' ' << id;
  std::cerr << "\n[ddmin] wrote " << output << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TraceArgs {
  std::string program;
  std::string stdin_tokens;
  std::string expect;
  std::string filter = "sum,mul";
  std::string trace_out;
};

std::vector<std::string> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b = s.find_first_not_of(seps, i);
    if (b == std::string_view::npos) break;
    auto e = s.find_first_of(seps, b);
    if (e == std::string_view::npos) e = s.size();
    out.emplace_back(s.substr(b, e - b));
    i = e;
  }
  return out;
}

std::string unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char e = s[++i];
      out += e == 'n' ? '\n' : e == 't' ? '\t' : e;
    } else {
      out += s[i];
    }
  }
  return out;
}

int cmd_reduce_trace(const Common& c, const TraceArgs& a) {
  namespace tr = dd::trace;
  const tr::Program program = tr::parse_program(read_file(a.program));
  const auto tokens = split_any(a.stdin_tokens, " \t\n,");

  tr::Expectation expectation;
  expectation.prefixes = split_any(a.filter, ",");
  expectation.expected = unescape(a.expect);
  if (!expectation.expected.empty() && expectation.expected.back() != '\n') expectation.expected += '\n';

  // The universe is only known after tracing.
  const auto traced = tr::trace_program(program, tokens);
  EngineSetup setup(c, traced.trace.size(), c.cache);
  tr::TraceReduction r;
  try {
    r = tr::reduce_trace(program, tokens, expectation, setup.opts);
  } catch (const dd::AxiomViolation& e) {
    emit_partial_report(c, c.report, traced.trace.size(), e.log);
    throw;
  }
  const std::string trace_path = a.trace_out.empty() ? a.program + ".trace" : a.trace_out;
  write_file(trace_path, tr::format_trace(r.original.trace));

  const std::string table = tr::render_slice_table(program, r.original.trace, r.result.final);
  if (c.output.empty() || c.output == "-")
    std::cout << table;
  else
    write_file(c.output, table);

  std::cerr << "[ddmin] " << r.original.trace.size() << " events, slice of " << r.slice.size() << ":";
  for (const auto& e : r.slice) std::cerr << ' ' << tr::event_label(e);
  std::cerr << '\n';
  summarize(r.result, r.original.trace.size());
  emit_report(c, c.report, r.original.trace.size(), std::move(r.result));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string oracle;
  std::string sizes;
};

int cmd_bench(const Common& c, const BenchArgs& a) {
  const auto spec = dd::bench::parse_oracle(a.oracle);
  const auto sizes = dd::bench::parse_sizes(a.sizes);
  std::vector<dd::report::BenchRow> rows;
  std::size_t violations = 0;
  for (auto n : sizes) {
    const auto r = dd::bench::run_one(spec, n, c.monotone);
    rows.push_back(r.row);
    if (r.violation) {
      ++violations;
      std::cerr << "FAIL: " << dd::bench::oracle_name(spec) << " n=" << n << ": " << r.row.tests_oracle
                << " tests exceed n^2+3n = " << r.row.bound_quadratic << '\n';
    }
  }
  if (c.output.empty() || c.output == "-") {
    dd::report::write_bench_csv(std::cout, rows);
  } else {
    std::ofstream out(c.output);
    dd::report::write_bench_csv(out, rows);
    if (!out) throw std::runtime_error("cannot write '" + c.output + "'");
  }
  return violations == 0 ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  dd::proc::install_signal_cleanup();

  CLI::App app{"Delta debugging: minimize failure-inducing inputs, changes and execution traces"};
  app.require_subcommand(1);

  Common input_c, change_c, trace_c, bench_c;

  InputArgs input_a;
  auto* input = app.add_subcommand("minimize-input", "Minimize a failure-inducing input file");
  input->add_option("--input", input_a.input, "Failing input file")->required()->check(CLI::ExistingFile);
  input->add_option("--granularity", input_a.granularity, "Pass schedule, e.g. line,char");
  input->add_option("-o,--output", input_c.output, "Minimal input (default: <input>.min)");
  add_command_flags(input, input_c);

  ChangeArgs change_a;
  auto* changes = app.add_subcommand("minimize-changes", "Minimize a failure-inducing set of code changes");
  changes->add_option("--baseline", change_a.baseline, "Working baseline tree")->required()->check(CLI::ExistingDirectory);
  changes->add_option("--diff", change_a.diff, "Unified diff to the failing version")->required()->check(CLI::ExistingFile);
  changes->add_option("--deps", change_a.deps, "CHILD<TAB>PARENT dependency file")->check(CLI::ExistingFile);
  changes->add_option("--groups", change_a.groups, "Group changes first: file, dir, or an ID<TAB>KEY file");
  changes->add_option("-o,--output", change_c.output, "Minimal diff (default: <diff>.min)");
  add_command_flags(changes, change_c);

  TraceArgs trace_a;
  auto* trace = app.add_subcommand("reduce-trace", "Reduce an execution trace to a critical slice");
  trace->add_option("--program", trace_a.program, "Program source")->required()->check(CLI::ExistingFile);
  trace->add_option("--stdin", trace_a.stdin_tokens, "Input tokens, separated by spaces or commas")->required();
  trace->add_option("--expect", trace_a.expect, "Expected filtered output (default: that of the full run)");
  trace->add_option("--filter", trace_a.filter, "Comma-separated output line prefixes; empty keeps everything");
  trace->add_option("--trace", trace_a.trace_out, "Trace file (default: <program>.trace)");
  trace->add_option("-o,--output", trace_c.output, "Slice table (default: stdout)");
  add_engine_flags(trace, trace_c);

  BenchArgs bench_a;
  auto* bench = app.add_subcommand("bench", "Count tests on synthetic oracles");
  bench->add_option("--oracle", bench_a.oracle, "single | conjunction:K | random-monotone:SEED | adversarial")->required();
  bench->add_option("--sizes", bench_a.sizes, "Sizes, e.g. 8,16,32 or 4..64")->required();
  bench->add_flag("--monotone-cache", bench_c.monotone, "Skip subsets of passing configurations");
  bench->add_option("-o,--output", bench_c.output, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*input) return cmd_minimize_input(input_c, input_a);
    if (*changes) return cmd_minimize_changes(change_c, change_a);
    if (*trace) return cmd_reduce_trace(trace_c, trace_a);
    if (*bench) return cmd_bench(bench_c, bench_a);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for more information.\n";
    return kExitError;
  } catch (const dd::AxiomViolation& e) {
    std::cerr << "axiom violation: " << e.what() << '\n';
    return kExitAxiom;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
