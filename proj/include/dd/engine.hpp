#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dd/configuration.hpp"
#include "dd/oracle.hpp"

namespace dd {

struct TestRecord {
  Bitmap config;
  std::size_t granularity = 0;  // 0 for axiom checks
  Outcome outcome = Outcome::Unresolved;
  bool cached = false;          // answered without running a test
  Source source = Source::Oracle;
  double duration_ms = 0.0;

  friend bool operator==(const TestRecord&, const TestRecord&) = default;
};

/// Ordered test history with running tallies.
class RunLog {
public:
  void append(TestRecord record);

  const std::vector<TestRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  std::size_t count(Outcome o) const { return by_outcome_[static_cast<std::size_t>(o)]; }
  std::size_t count(Source s) const { return by_source_[static_cast<std::size_t>(s)]; }
  std::size_t count(Source s, Outcome o) const {
    return matrix_[static_cast<std::size_t>(s)][static_cast<std::size_t>(o)];
  }

  /// Tests that actually reached the underlying oracle, axiom checks
  /// excluded.
  std::size_t oracle_tests() const { return count(Source::Oracle); }
  std::size_t axiom_tests() const { return count(Source::Axiom); }

  /// Zeroes every duration (for byte-stable reports).
  void clear_durations();

  friend bool operator==(const RunLog& a, const RunLog& b) { return a.records_ == b.records_; }

private:
  std::vector<TestRecord> records_;
  std::array<std::size_t, kOutcomeCount> by_outcome_{};
  std::array<std::size_t, kSourceCount> by_source_{};
  std::array<std::array<std::size_t, kOutcomeCount>, kSourceCount> matrix_{};
};

enum class Phase { SubsetScan, ComplementScan, Regranulate, Done };

/// Snapshot of the recursion: `current` fails and 2 <= granularity <=
/// |current| whenever phase != Done.
struct EngineState {
  Configuration current;
  std::size_t granularity = 2;
  Phase phase = Phase::SubsetScan;
};

struct EngineOptions {
  bool verify_axioms = true;
  bool monotone = false;
  /// Run verify_n_minimal(final, oracle, 1) afterwards when within budget.
  bool verify_minimality = false;
  std::size_t verify_budget = std::size_t{1} << 16;
  /// Re-run the final configuration on the raw oracle and cross-check it
  /// against the cache.
  bool recheck_final = false;
  bool measure_time = true;

  /// Entries loaded into the cache before the first test.
  const CacheEntries* preload = nullptr;
  /// Called for each outcome newly learned from the oracle.
  std::function<void(const Bitmap&, Outcome)> on_cache_store;
  /// Called after every logged test.
  std::function<void(const TestRecord&, const EngineState&)> on_test;
};

struct MinimizationResult {
  Configuration final;
  RunLog log;
  std::optional<bool> verified_1_minimal;
};

class AxiomViolation : public std::runtime_error {
public:
  AxiomViolation(std::string what, RunLog log)
      : std::runtime_error(std::move(what)), log(std::move(log)) {}
  RunLog log;
};

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Minimizing delta debugging. Returns a 1-minimal failing subset of
/// `universe`. Scans subsets, then complements, in ascending chunk order;
/// the first failing test wins.
MinimizationResult ddmin(const Configuration& universe, TestOracle& oracle,
                         const EngineOptions& opts = {});

/// Exhaustively checks that no c' subset of c with |c| - |c'| <= n fails.
/// Throws BudgetExceeded instead of answering when that needs more than
/// `budget` tests.
bool verify_n_minimal(const Configuration& c, TestOracle& oracle, std::size_t n,
                      std::size_t budget = std::size_t{1} << 16);

/// Number of tests verify_n_minimal(c, ., n) would run, saturated at
/// SIZE_MAX.
std::size_t verification_cost(std::size_t size, std::size_t n);

}  // namespace dd
