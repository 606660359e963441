#include <algorithm>
#include <charconv>
#include <random>
#include <stdexcept>

#include "dd/bench.hpp"

namespace dd::bench {

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
    throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

bool contains_all(const Configuration& c, const std::vector<DeltaId>& ids) {
  return std::all_of(ids.begin(), ids.end(), [&](DeltaId d) { return c.contains(d); });
}

bool adversarial_fails(const Configuration& c, std::size_t n) {
  if (c.size() < 2) return false;
  const auto m = c.members();
  if (m.front() != 0 || m.back() != n - 1) return false;
  for (std::size_t i = 2; i < m.size(); ++i)
    if (m[i] != m[i - 1] + 1) return false;
  return true;
}

}  // namespace

OracleSpec parse_oracle(std::string_view text) {
  if (text == "single") return {OracleKind::Single, 0};
  if (text == "adversarial") return {OracleKind::Adversarial, 0};
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const auto arg = text.substr(colon + 1);
    if (head == "conjunction") {
      const auto k = parse_u64(arg, "conjunction size");
      if (k == 0) throw std::invalid_argument("conjunction size must be positive");
      return {OracleKind::Conjunction, k};
    }
    if (head == "random-monotone") return {OracleKind::RandomMonotone, parse_u64(arg, "seed")};
  }
  throw std::invalid_argument("unknown oracle '" + std::string(text) +
                              "' (expected single, conjunction:K, random-monotone:SEED or adversarial)");
}

std::string oracle_name(const OracleSpec& spec) {
  switch (spec.kind) {
    case OracleKind::Single: return "single";
    case OracleKind::Conjunction: return "conjunction:" + std::to_string(spec.param);
    case OracleKind::RandomMonotone: return "random-monotone:" + std::to_string(spec.param);
    case OracleKind::Adversarial: return "adversarial";
  }
  return "single";
}

std::vector<std::size_t> parse_sizes(std::string_view text) {
  std::vector<std::size_t> sizes;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = trim(text.substr(start, comma - start));
    if (const auto dots = item.find(".."); dots != std::string_view::npos) {
      const auto lo = parse_u64(trim(item.substr(0, dots)), "size");
      const auto hi = parse_u64(trim(item.substr(dots + 2)), "size");
      if (lo > hi) throw std::invalid_argument("empty size range '" + std::string(item) + "'");
      for (auto n = lo; n <= hi; ++n) sizes.push_back(n);
    } else {
      sizes.push_back(parse_u64(item, "size"));
    }
    start = comma + 1;
  }
  for (auto n : sizes)
    if (n == 0) throw std::invalid_argument("sizes must be positive");
  return sizes;
}

std::vector<std::vector<DeltaId>> cause_sets(const OracleSpec& spec, std::size_t n) {
  std::vector<std::vector<DeltaId>> sets;
  switch (spec.kind) {
    case OracleKind::Single:
      sets.push_back({static_cast<DeltaId>(n - 1)});
      break;
    case OracleKind::Conjunction: {
      std::vector<DeltaId> ids;
      const auto k = std::min<std::uint64_t>(spec.param, n);
      for (std::uint64_t i = 0; i < k; ++i) ids.push_back(static_cast<DeltaId>((2 * i + 1) * n / (2 * k)));
      sets.push_back(std::move(ids));
      break;
    }
    case OracleKind::RandomMonotone: {
      std::mt19937_64 rng(spec.param);
      std::uniform_real_distribution<double> pos(0.0, 1.0);
      const int count = 1 + static_cast<int>(rng() % 2);
      for (int s = 0; s < count; ++s) {
        const int size = 1 + static_cast<int>(rng() % 3);
        std::vector<DeltaId> ids;
        for (int i = 0; i < size; ++i) {
          auto id = static_cast<std::size_t>(pos(rng) * static_cast<double>(n));
          ids.push_back(static_cast<DeltaId>(std::min(id, n - 1)));
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        sets.push_back(std::move(ids));
      }
      break;
    }
    case OracleKind::Adversarial:
      break;
  }
  return sets;
}

std::unique_ptr<TestOracle> make_oracle(const OracleSpec& spec, std::size_t n) {
  if (n == 0) throw std::invalid_argument("universe size must be positive");
  if (spec.kind == OracleKind::Adversarial) {
    if (n == 1)
      return std::make_unique<FunctionOracle>(
          [](const Configuration& c) { return c.empty() ? Outcome::Pass : Outcome::Fail; });
    return std::make_unique<FunctionOracle>(
        [n](const Configuration& c) { return adversarial_fails(c, n) ? Outcome::Fail : Outcome::Pass; });
  }
  return std::make_unique<FunctionOracle>([sets = cause_sets(spec, n)](const Configuration& c) {
    for (const auto& s : sets)
      if (contains_all(c, s)) return Outcome::Fail;
    return Outcome::Pass;
  });
}

std::size_t quadratic_bound(std::size_t n) { return n * n + 3 * n; }

std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

BenchResult run_one(const OracleSpec& spec, std::size_t n, bool monotone_cache) {
  auto oracle = make_oracle(spec, n);
  EngineOptions opts;
  opts.monotone = monotone_cache;
  opts.measure_time = false;
  MinimizationResult r = ddmin(Configuration::full(n), *oracle, opts);
  BenchResult out;
  out.row.n = n;
  out.row.tests_oracle = r.log.oracle_tests();
  out.row.tests_cached = r.log.count(Source::ExactCache) + r.log.count(Source::Monotony);
  out.row.bound_quadratic = quadratic_bound(n);
  out.row.bound_log = ceil_log2(n);
  out.violation = out.row.tests_oracle > out.row.bound_quadratic;
  out.final = std::move(r.final);
  return out;
}

}  // namespace dd::bench
