#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dd/bitmap.hpp"
#include "dd/configuration.hpp"

namespace dd {

/// Three-valued test outcome. Fail means the failure of interest was
/// reproduced.
enum class Outcome : std::uint8_t { Fail, Pass, Unresolved };

/// Where an answer came from. Only `Oracle` answers cost a real test.
enum class Source : std::uint8_t { Oracle, ExactCache, Monotony, Rejected, Axiom };

inline constexpr std::size_t kSourceCount = 5;
inline constexpr std::size_t kOutcomeCount = 3;

char outcome_char(Outcome o);                 // F / P / ?
std::string_view outcome_name(Outcome o);     // fail / pass / unresolved
std::optional<Outcome> outcome_from_name(std::string_view s);
std::string_view source_name(Source s);       // oracle / exact-cache / ...
std::optional<Source> source_from_name(std::string_view s);

struct Evaluation {
  Outcome outcome = Outcome::Unresolved;
  Source source = Source::Oracle;
};

/// Deterministic mapping from configurations to outcomes. Implementations
/// are driven from a single thread.
class TestOracle {
public:
  virtual ~TestOracle() = default;
  virtual Evaluation evaluate(const Configuration& config) = 0;
};

/// Adapts a plain predicate; every call reports Source::Oracle.
class FunctionOracle final : public TestOracle {
public:
  using Fn = std::function<Outcome(const Configuration&)>;
  explicit FunctionOracle(Fn fn) : fn_(std::move(fn)) {}
  Evaluation evaluate(const Configuration& config) override { return {fn_(config), Source::Oracle}; }

private:
  Fn fn_;
};

class NondeterminismDetected : public std::runtime_error {
public:
  NondeterminismDetected(const Configuration& config, Outcome first, Outcome second);
  Outcome first;
  Outcome second;
};

using CacheEntries = std::vector<std::pair<Bitmap, Outcome>>;

/// Memoizing decorator. Exact repeats are answered from the cache; with
/// `monotone` set, any subset of a configuration that already passed is
/// answered Pass without reaching the inner oracle. Answers the inner
/// oracle produces with a source other than Oracle (e.g. feasibility
/// rejections) are forwarded but not stored.
class CachedOracle final : public TestOracle {
public:
  CachedOracle(TestOracle& inner, bool monotone);

  Evaluation evaluate(const Configuration& config) override;

  /// Seeds the cache (e.g. from a persisted cache file). Preloaded Pass
  /// entries also feed the monotony filter.
  void preload(const Bitmap& key, Outcome outcome);

  /// Cross-checks an outcome obtained outside the cache. Throws
  /// NondeterminismDetected if it disagrees with a stored entry; otherwise
  /// stores it.
  void observe(const Configuration& config, Outcome outcome);

  std::optional<Outcome> lookup(const Bitmap& key) const;

  /// Invoked once for every new entry learned from the inner oracle.
  void on_store(std::function<void(const Bitmap&, Outcome)> fn) { on_store_ = std::move(fn); }

  bool monotone() const noexcept { return monotone_; }
  std::size_t underlying_calls() const noexcept { return underlying_calls_; }
  std::size_t size() const noexcept { return exact_.size(); }
  CacheEntries entries() const;

private:
  void store(const Bitmap& key, Outcome outcome);

  TestOracle& inner_;
  bool monotone_;
  std::unordered_map<Bitmap, Outcome, BitmapHash> exact_;
  std::vector<Bitmap> order_;  // insertion order, for entries()
  // Passing configurations, row-major, `stride_` words per row.
  std::vector<std::uint64_t> passed_rows_;
  std::size_t stride_ = 0;
  std::optional<std::size_t> universe_;
  std::size_t underlying_calls_ = 0;
  std::function<void(const Bitmap&, Outcome)> on_store_;
};

std::unique_ptr<CachedOracle> wrap_cached(TestOracle& oracle, bool monotone);

}  // namespace dd
