#include "dd/engine.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

namespace dd {

void RunLog::append(TestRecord record) {
  const auto o = static_cast<std::size_t>(record.outcome);
  const auto s = static_cast<std::size_t>(record.source);
  ++by_outcome_[o];
  ++by_source_[s];
  ++matrix_[s][o];
  records_.push_back(std::move(record));
}

void RunLog::clear_durations() {
  for (auto& r : records_) r.duration_ms = 0.0;
}

namespace {

// Forwards to the raw oracle and cross-checks fresh answers with the cache.
class CrossCheckOracle final : public TestOracle {
public:
  CrossCheckOracle(TestOracle& raw, CachedOracle& cache) : raw_(raw), cache_(cache) {}
  Evaluation evaluate(const Configuration& config) override {
    const Evaluation e = raw_.evaluate(config);
    if (e.source == Source::Oracle) cache_.observe(config, e.outcome);
    return e;
  }

private:
  TestOracle& raw_;
  CachedOracle& cache_;
};

class Runner {
public:
  Runner(CachedOracle& cache, const EngineOptions& opts) : cache_(cache), opts_(opts) {}

  Outcome test(const Configuration& c, const EngineState& state, bool axiom) {
    const auto start = std::chrono::steady_clock::now();
    const Evaluation e = cache_.evaluate(c);
    double ms = 0.0;
    if (opts_.measure_time)
      ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    TestRecord record{c.bitmap(),
                      axiom ? 0 : state.granularity,
                      e.outcome,
                      e.source == Source::ExactCache || e.source == Source::Monotony,
                      axiom ? Source::Axiom : e.source,
                      ms};
    if (opts_.on_test) opts_.on_test(record, state);
    log_.append(std::move(record));
    return e.outcome;
  }

  RunLog& log() { return log_; }

private:
  CachedOracle& cache_;
  const EngineOptions& opts_;
  RunLog log_;
};

}  // namespace

MinimizationResult ddmin(const Configuration& universe, TestOracle& oracle,
                         const EngineOptions& opts) {
  CachedOracle cache(oracle, opts.monotone);
  if (opts.preload)
    for (const auto& [key, outcome] : *opts.preload) cache.preload(key, outcome);
  if (opts.on_cache_store) cache.on_store(opts.on_cache_store);

  Runner runner(cache, opts);
  EngineState state{universe, 2, Phase::SubsetScan};

  if (opts.verify_axioms) {
    const Configuration empty(universe.universe_size());
    const Outcome at_empty = runner.test(empty, state, true);
    if (at_empty != Outcome::Pass)
      throw AxiomViolation("axiom violated: test(empty configuration) = " +
                               std::string(outcome_name(at_empty)) + ", expected pass",
                           std::move(runner.log()));
    const Outcome at_full = runner.test(universe, state, true);
    if (at_full != Outcome::Fail)
      throw AxiomViolation("axiom violated: test(full configuration) = " +
                               std::string(outcome_name(at_full)) + ", expected fail",
                           std::move(runner.log()));
  } else if (universe.empty()) {
    throw std::invalid_argument("ddmin: empty universe");
  }

  // A single delta cannot be split; the recursion ends immediately.
  while (state.current.size() >= 2) {
    Configuration& c = state.current;
    state.granularity = std::min(state.granularity, c.size());
    const std::size_t n = state.granularity;
    const auto chunks = partition(c, n);

    state.phase = Phase::SubsetScan;
    bool reduced = false;
    for (const auto& chunk : chunks) {
      if (runner.test(chunk, state, false) == Outcome::Fail) {
        c = chunk;
        state.granularity = 2;
        reduced = true;
        break;
      }
    }
    if (reduced) continue;

    state.phase = Phase::ComplementScan;
    for (const auto& chunk : chunks) {
      Configuration complement = c.minus(chunk);
      if (runner.test(complement, state, false) == Outcome::Fail) {
        c = std::move(complement);
        state.granularity = std::max<std::size_t>(n - 1, 2);
        reduced = true;
        break;
      }
    }
    if (reduced) continue;

    if (n < c.size()) {
      state.phase = Phase::Regranulate;
      state.granularity = std::min(c.size(), 2 * n);
      continue;
    }
    break;
  }
  state.phase = Phase::Done;

  MinimizationResult result{state.current, std::move(runner.log()), std::nullopt};

  if (opts.recheck_final) {
    const Evaluation e = oracle.evaluate(result.final);
    if (e.source == Source::Oracle) cache.observe(result.final, e.outcome);
  }
  if (opts.verify_minimality && verification_cost(result.final.size(), 1) <= opts.verify_budget) {
    CrossCheckOracle checked(oracle, cache);
    result.verified_1_minimal = verify_n_minimal(result.final, checked, 1, opts.verify_budget);
  }
  return result;
}

std::size_t verification_cost(std::size_t size, std::size_t n) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  std::size_t total = 0;
  std::size_t binom = 1;  // C(size, k)
  for (std::size_t k = 1; k <= n && k <= size; ++k) {
    // binom * (size - k + 1) / k, guarding overflow.
    const std::size_t factor = size - k + 1;
    if (binom > kMax / factor) return kMax;
    binom = binom * factor / k;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

bool verify_n_minimal(const Configuration& c, TestOracle& oracle, std::size_t n,
                      std::size_t budget) {
  if (n < 1 || n > c.size())
    throw std::invalid_argument("verify_n_minimal: n must lie in [1, |c|]");
  const std::size_t cost = verification_cost(c.size(), n);
  if (cost > budget)
    throw BudgetExceeded("verify_n_minimal needs " + std::to_string(cost) +
                         " tests, budget is " + std::to_string(budget));

  const auto members = c.members();
  std::vector<std::size_t> pick;
  for (std::size_t k = 1; k <= n; ++k) {
    pick.resize(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::vector<DeltaId> kept;
      kept.reserve(members.size() - k);
      std::size_t p = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (p < k && pick[p] == i) {
          ++p;
          continue;
        }
        kept.push_back(members[i]);
      }
      if (oracle.evaluate(Configuration(c.universe_size(), std::move(kept))).outcome == Outcome::Fail)
        return false;

      // Next k-combination of [0, |c|) in lexicographic order.
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == members.size() - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return true;
}

}  // namespace dd
