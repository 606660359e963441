#pragma once

#include <array>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dd/engine.hpp"
#include "dd/oracle.hpp"

namespace dd::report {

/// `*`/`.` per delta, a space, the outcome letter, and `#` when cached.
///   universe 4, {0,1}, fail            -> "**.. F"
///   universe 4, full, unresolved, hit  -> "**** ?#"
std::string render_log_line(const TestRecord& record, std::size_t universe_size);

struct TestEntry {
  std::string config;  // hex bitmap
  std::size_t granularity = 0;
  Outcome outcome = Outcome::Unresolved;
  bool cached = false;
  Source source = Source::Oracle;
  double duration_ms = 0.0;
  friend bool operator==(const TestEntry&, const TestEntry&) = default;
};

using CounterMatrix = std::array<std::array<std::size_t, kOutcomeCount>, kSourceCount>;

struct ReportDocument {
  std::size_t universe_size = 0;
  std::vector<DeltaId> final;
  CounterMatrix counters{};
  std::vector<TestEntry> tests;
  double ratio = 0.0;
  std::optional<bool> verified_1_minimal;

  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

ReportDocument make_report(std::size_t universe_size, const Configuration& final, const RunLog& log,
                           std::optional<bool> verified);
/// Report for a run that stopped before producing a result (axiom violation).
ReportDocument make_partial_report(std::size_t universe_size, const RunLog& log);

/// Counters must agree with the per-test records and ratio with |final|.
bool consistent(const ReportDocument& doc);

std::string to_json(const ReportDocument& doc, int indent = 2);
ReportDocument from_json(const std::string& text);

void write_report(const ReportDocument& doc, const std::filesystem::path& path);
ReportDocument read_report(const std::filesystem::path& path);

/// Line-oriented outcome cache: "<hex bitmap>\t<F|P|U>\n" per entry.
void write_cache(const CacheEntries& entries, const std::filesystem::path& path);

struct CacheReadResult {
  CacheEntries entries;
  std::vector<std::string> warnings;  // one per skipped line
};
/// Malformed lines are skipped with a warning. A missing file yields an
/// empty cache.
CacheReadResult read_cache(const std::filesystem::path& path, std::size_t universe_size);

/// Appends entries as they are learned, flushing after each line.
class CacheAppender {
public:
  explicit CacheAppender(const std::filesystem::path& path);
  ~CacheAppender();
  CacheAppender(const CacheAppender&) = delete;
  CacheAppender& operator=(const CacheAppender&) = delete;

  void append(const Bitmap& key, Outcome outcome);

private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

/// Per-size benchmark row: n,tests_oracle,tests_cached,bound_quadratic,bound_log
struct BenchRow {
  std::size_t n = 0;
  std::size_t tests_oracle = 0;
  std::size_t tests_cached = 0;
  std::size_t bound_quadratic = 0;
  std::size_t bound_log = 0;
};
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace dd::report
