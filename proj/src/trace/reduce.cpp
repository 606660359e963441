#include <algorithm>
#include <array>

#include "dd/trace.hpp"

namespace dd::trace {

std::string filter_output(std::string_view output, std::span<const std::string> prefixes) {
  if (prefixes.empty()) return std::string(output);
  std::string kept;
  std::size_t start = 0;
  while (start < output.size()) {
    auto nl = output.find('\n', start);
    if (nl == std::string_view::npos) nl = output.size();
    const std::string_view line = output.substr(start, nl - start);
    std::size_t first = std::string_view::npos;
    for (const std::string& p : prefixes) {
      if (p.empty()) continue;
      first = std::min(first, line.find(p));
    }
    if (first != std::string_view::npos) {
      kept += line.substr(first);
      kept += '\n';
    }
    start = nl + 1;
  }
  return kept;
}

ReplayOracle::ReplayOracle(const Program& program, const Trace& trace, std::vector<std::string> stdin_tokens,
                           Expectation expectation, std::size_t budget)
    : program_(program),
      trace_(trace),
      stdin_(std::move(stdin_tokens)),
      expectation_(std::move(expectation)),
      budget_(budget) {}

Evaluation ReplayOracle::evaluate(const Configuration& config) {
  const RunOutput run = replay_events(program_, trace_, config, stdin_, budget_);
  if (run.status != Status::Completed) return {Outcome::Unresolved, Source::Oracle};
  const bool same = filter_output(run.stdout_text, expectation_.prefixes) == expectation_.expected;
  return {same ? Outcome::Fail : Outcome::Pass, Source::Oracle};
}

TraceReduction reduce_trace(const Program& program, std::span<const std::string> stdin_tokens,
                            Expectation expectation, const EngineOptions& opts, std::size_t budget) {
  TraceReduction r;
  r.original = trace_program(program, stdin_tokens, budget);
  if (r.original.output.status != Status::Completed)
    throw std::runtime_error("program did not complete: " + r.original.output.error);
  if (expectation.expected.empty())
    expectation.expected = filter_output(r.original.output.stdout_text, expectation.prefixes);
  r.expectation = expectation;

  ReplayOracle oracle(program, r.original.trace,
                      std::vector<std::string>(stdin_tokens.begin(), stdin_tokens.end()), expectation,
                      budget);
  r.result = ddmin(Configuration::full(r.original.trace.size()), oracle, opts);
  for (DeltaId id : r.result.final.members()) r.slice.push_back(r.original.trace[id]);
  return r;
}

std::string render_slice_table(const Program& program, const Trace& trace, const Configuration& slice) {
  std::vector<std::array<std::string, 3>> rows;
  rows.push_back({"event", "original", "reduced"});
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Event& e = trace[i];
    std::string source = program.source_text(e.line);
    if (e.kind == EventKind::LoopHead) source = "[loop-head] " + source;
    const bool in = slice.contains(static_cast<DeltaId>(i));
    rows.push_back({event_label(e), source, in ? source : std::string()});
  }
  std::array<std::size_t, 2> width{};
  for (const auto& row : rows)
    for (std::size_t c = 0; c < 2; ++c) width[c] = std::max(width[c], row[c].size());

  std::string out;
  for (const auto& row : rows) {
    std::string line = row[0];
    line.append(width[0] - row[0].size() + 2, ' ');
    line += row[1];
    if (!row[2].empty()) {
      line.append(width[1] - row[1].size() + 2, ' ');
      line += row[2];
    }
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace dd::trace
