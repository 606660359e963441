#include "dd/oracle.hpp"

#include <array>

#include "dd/kernels.hpp"

namespace dd {

namespace {
constexpr std::array<std::string_view, kOutcomeCount> kOutcomeNames{"fail", "pass", "unresolved"};
constexpr std::array<std::string_view, kSourceCount> kSourceNames{
    "oracle", "exact-cache", "monotony", "feasibility-reject", "axiom"};
}  // namespace

char outcome_char(Outcome o) {
  switch (o) {
    case Outcome::Fail: return 'F';
    case Outcome::Pass: return 'P';
    case Outcome::Unresolved: return '?';
  }
  return '?';
}

std::string_view outcome_name(Outcome o) { return kOutcomeNames[static_cast<std::size_t>(o)]; }

std::optional<Outcome> outcome_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kOutcomeNames.size(); ++i)
    if (kOutcomeNames[i] == s) return static_cast<Outcome>(i);
  return std::nullopt;
}

std::string_view source_name(Source s) { return kSourceNames[static_cast<std::size_t>(s)]; }

std::optional<Source> source_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kSourceNames.size(); ++i)
    if (kSourceNames[i] == s) return static_cast<Source>(i);
  return std::nullopt;
}

NondeterminismDetected::NondeterminismDetected(const Configuration& config, Outcome a, Outcome b)
    : std::runtime_error("nondeterministic test: configuration " + config.to_string() +
                         " produced both '" + std::string(outcome_name(a)) + "' and '" +
                         std::string(outcome_name(b)) + "'"),
      first(a),
      second(b) {}

CachedOracle::CachedOracle(TestOracle& inner, bool monotone) : inner_(inner), monotone_(monotone) {}

std::optional<Outcome> CachedOracle::lookup(const Bitmap& key) const {
  if (auto it = exact_.find(key); it != exact_.end()) return it->second;
  return std::nullopt;
}

void CachedOracle::store(const Bitmap& key, Outcome outcome) {
  if (!universe_) {
    universe_ = key.bits();
    stride_ = words_for(key.bits());
  }
  exact_.emplace(key, outcome);
  order_.push_back(key);
  if (outcome == Outcome::Pass && key.bits() == *universe_)
    passed_rows_.insert(passed_rows_.end(), key.words().begin(), key.words().end());
}

void CachedOracle::preload(const Bitmap& key, Outcome outcome) {
  if (exact_.contains(key)) return;
  store(key, outcome);
}

void CachedOracle::observe(const Configuration& config, Outcome outcome) {
  const Bitmap key = config.bitmap();
  if (auto prior = lookup(key)) {
    if (*prior != outcome) throw NondeterminismDetected(config, *prior, outcome);
    return;
  }
  store(key, outcome);
}

Evaluation CachedOracle::evaluate(const Configuration& config) {
  const Bitmap key = config.bitmap();
  if (auto hit = lookup(key)) return {*hit, Source::ExactCache};

  if (monotone_ && universe_ && key.bits() == *universe_ && !passed_rows_.empty()) {
    if (kernels::active().find_superset(key.words(), passed_rows_, stride_) >= 0)
      return {Outcome::Pass, Source::Monotony};
  }

  const Evaluation fresh = inner_.evaluate(config);
  if (fresh.source != Source::Oracle) return fresh;
  ++underlying_calls_;
  store(key, fresh.outcome);
  if (on_store_) on_store_(key, fresh.outcome);
  return fresh;
}

CacheEntries CachedOracle::entries() const {
  CacheEntries out;
  out.reserve(order_.size());
  for (const auto& key : order_) out.emplace_back(key, exact_.at(key));
  return out;
}

std::unique_ptr<CachedOracle> wrap_cached(TestOracle& oracle, bool monotone) {
  return std::make_unique<CachedOracle>(oracle, monotone);
}

}  // namespace dd
