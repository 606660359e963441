#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dd/engine.hpp"
#include "dd/report.hpp"

namespace dd::bench {

enum class OracleKind { Single, Conjunction, RandomMonotone, Adversarial };

struct OracleSpec {
  OracleKind kind = OracleKind::Single;
  std::uint64_t param = 0;  // K for conjunction, seed for random-monotone
};

/// "single", "conjunction:K", "random-monotone:SEED" or "adversarial".
/// Throws std::invalid_argument on anything else.
OracleSpec parse_oracle(std::string_view text);
std::string oracle_name(const OracleSpec& spec);

/// "8,16,32" or "4..64" (inclusive), or a mix of both.
std::vector<std::size_t> parse_sizes(std::string_view text);

/// Failure-inducing sets over universe size n; the oracle fails iff the
/// configuration contains one of them. Empty for the adversarial oracle,
/// which is not monotone.
std::vector<std::vector<DeltaId>> cause_sets(const OracleSpec& spec, std::size_t n);

/// single: fails iff n-1 is included.
/// conjunction:K: fails iff K evenly spaced deltas are all included.
/// random-monotone:SEED: one or two cause sets of one to three deltas at
///   seed-chosen relative positions, so the structure scales with n.
/// adversarial: fails iff 0 and n-1 are included and the rest is a
///   contiguous run ending at n-1. Drives ddmin towards its quadratic worst
///   case and is not monotone.
std::unique_ptr<TestOracle> make_oracle(const OracleSpec& spec, std::size_t n);

struct BenchResult {
  report::BenchRow row;
  Configuration final;
  bool violation = false;  // tests_oracle > n^2 + 3n
};

BenchResult run_one(const OracleSpec& spec, std::size_t n, bool monotone_cache);

std::size_t quadratic_bound(std::size_t n);
std::size_t ceil_log2(std::size_t n);

}  // namespace dd::bench
