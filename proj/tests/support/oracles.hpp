#pragma once

// Test-side reference implementations. Nothing here calls into the library
// except to convert configurations, so results can be used to check it.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dd/configuration.hpp"
#include "dd/oracle.hpp"

namespace ddtest {

using Mask = std::uint32_t;

inline Mask to_mask(const dd::Configuration& c) {
  Mask m = 0;
  for (auto id : c.members()) m |= Mask{1} << id;
  return m;
}

inline std::vector<dd::DeltaId> mask_members(Mask m) {
  std::vector<dd::DeltaId> out;
  for (dd::DeltaId i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline dd::Configuration from_mask(std::size_t n, Mask m) { return dd::Configuration(n, mask_members(m)); }

/// Outcome table over all 2^n subsets (n <= 16).
struct Family {
  std::size_t n = 0;
  std::vector<bool> fails;
  std::string label;

  bool operator()(Mask m) const { return fails[m]; }
};

/// Up-set generated by 1..3 random non-empty masks.
inline Family random_monotone_family(std::mt19937_64& rng, std::size_t n) {
  Family f{n, std::vector<bool>(std::size_t{1} << n, false), "monotone"};
  const Mask full = static_cast<Mask>((std::size_t{1} << n) - 1);
  std::vector<Mask> gens;
  const int k = 1 + static_cast<int>(rng() % 3);
  for (int i = 0; i < k; ++i) {
    Mask g = 0;
    // Small generators are the interesting case; bias towards 1..3 bits.
    const int bits = 1 + static_cast<int>(rng() % std::min<std::size_t>(3, n));
    for (int b = 0; b < bits; ++b) g |= Mask{1} << (rng() % n);
    gens.push_back(g & full);
  }
  for (Mask m = 0; m <= full; ++m)
    f.fails[m] = std::any_of(gens.begin(), gens.end(), [m](Mask g) { return (m & g) == g; });
  return f;
}

/// Arbitrary outcome table with test(empty) = pass and test(full) = fail.
inline Family random_arbitrary_family(std::mt19937_64& rng, std::size_t n) {
  Family f{n, std::vector<bool>(std::size_t{1} << n, false), "arbitrary"};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 0.05 + 0.5 * u(rng);
  const Mask full = static_cast<Mask>((std::size_t{1} << n) - 1);
  for (Mask m = 0; m <= full; ++m) f.fails[m] = u(rng) < p;
  f.fails[0] = false;
  f.fails[full] = true;
  return f;
}

inline bool brute_one_minimal(const Family& f, Mask m) {
  if (!f(m)) return false;
  for (Mask rest = m; rest != 0; rest &= rest - 1)
    if (f(m & ~(rest & -rest))) return false;
  return true;
}

/// Counting in-process oracle over a family.
class FamilyOracle final : public dd::TestOracle {
public:
  explicit FamilyOracle(const Family& f) : f_(f) {}
  dd::Evaluation evaluate(const dd::Configuration& c) override {
    ++calls;
    return {f_(to_mask(c)) ? dd::Outcome::Fail : dd::Outcome::Pass, dd::Source::Oracle};
  }
  std::size_t calls = 0;

private:
  const Family& f_;
};

/// Straight transcription of the minimizing algorithm on masks, without any
/// caching. Counts every test it performs.
struct ReferenceDdmin {
  std::function<bool(Mask)> fails;
  std::size_t tests = 0;

  std::vector<std::vector<dd::DeltaId>> split(const std::vector<dd::DeltaId>& c, std::size_t n) const {
    std::vector<std::vector<dd::DeltaId>> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t len = c.size() / n + (i < c.size() % n ? 1 : 0);
      parts.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(start),
                         c.begin() + static_cast<std::ptrdiff_t>(start + len));
      start += len;
    }
    return parts;
  }

  static Mask mask_of(const std::vector<dd::DeltaId>& ids) {
    Mask m = 0;
    for (auto i : ids) m |= Mask{1} << i;
    return m;
  }

  bool test(Mask m) {
    ++tests;
    return fails(m);
  }

  Mask run(Mask c_mask) {
    std::vector<dd::DeltaId> c = mask_members(c_mask);
    std::size_t n = 2;
    while (true) {
      if (c.size() <= 1) return mask_of(c);
      const auto parts = split(c, n);
      bool reduced = false;
      for (const auto& p : parts) {
        if (test(mask_of(p))) {
          c = p;
          n = 2;
          reduced = true;
          break;
        }
      }
      if (reduced) continue;
      for (const auto& p : parts) {
        const Mask comp = mask_of(c) & ~mask_of(p);
        if (test(comp)) {
          c = mask_members(comp);
          n = std::max<std::size_t>(n - 1, 2);
          reduced = true;
          break;
        }
      }
      if (reduced) continue;
      if (n >= c.size()) return mask_of(c);
      n = std::min(c.size(), 2 * n);
    }
  }
};

// ---------------------------------------------------------------------------
// Synthetic unified diffs, generated directly from an edit script.

struct Edit {
  std::size_t start;  // 0-based first old line
  std::size_t remove;
  std::vector<std::string> insert;
};

inline std::vector<std::string> random_lines(std::mt19937_64& rng, std::size_t count, const std::string& tag) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(tag + "-" + std::to_string(i) + "-" + std::to_string(rng() % 1000) + "\n");
  return out;
}

inline std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l;
  return s;
}

/// Non-overlapping edits separated by at least one unchanged line.
inline std::vector<Edit> random_edits(std::mt19937_64& rng, std::size_t old_size, const std::string& tag) {
  std::vector<Edit> edits;
  std::size_t pos = rng() % 4;
  int serial = 0;
  while (pos < old_size) {
    Edit e;
    e.start = pos;
    e.remove = std::min<std::size_t>(rng() % 3, old_size - pos);
    const std::size_t ins = (e.remove == 0 ? 1 : 0) + rng() % 3;
    e.insert = random_lines(rng, ins, tag + "-new" + std::to_string(serial++));
    edits.push_back(std::move(e));
    pos += edits.back().remove + 1 + rng() % 9;
  }
  return edits;
}

inline std::vector<std::string> apply_edits(const std::vector<std::string>& old, const std::vector<Edit>& edits) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& e : edits) {
    while (i < e.start) out.push_back(old[i++]);
    out.insert(out.end(), e.insert.begin(), e.insert.end());
    i += e.remove;
  }
  while (i < old.size()) out.push_back(old[i++]);
  return out;
}

/// One file section with three lines of context; edits whose context
/// windows touch share a hunk.
inline std::string render_file_diff(const std::string& path, const std::vector<std::string>& old,
                                    const std::vector<Edit>& edits) {
  constexpr std::size_t ctx = 3;
  std::string out = "--- a/" + path + "\n+++ b/" + path + "\n";
  std::size_t k = 0;
  long drift = 0;  // new - old line count before the current hunk
  while (k < edits.size()) {
    std::size_t last = k;
    while (last + 1 < edits.size() &&
           edits[last + 1].start <= edits[last].start + edits[last].remove + 2 * ctx)
      ++last;
    const std::size_t hs = edits[k].start >= ctx ? edits[k].start - ctx : 0;
    const std::size_t he = std::min(old.size(), edits[last].start + edits[last].remove + ctx);
    std::string body;
    std::size_t old_len = 0, new_len = 0;
    std::size_t i = hs;
    long hunk_drift = 0;
    for (std::size_t e = k; e <= last; ++e) {
      for (; i < edits[e].start; ++i, ++old_len, ++new_len) body += " " + old[i];
      for (std::size_t r = 0; r < edits[e].remove; ++r, ++i, ++old_len) body += "-" + old[i];
      for (const auto& l : edits[e].insert) body += "+" + l, ++new_len;
      hunk_drift += static_cast<long>(edits[e].insert.size()) - static_cast<long>(edits[e].remove);
    }
    for (; i < he; ++i, ++old_len, ++new_len) body += " " + old[i];
    const std::size_t old_start = old_len == 0 ? hs : hs + 1;
    const long new_start_l = static_cast<long>(hs) + drift + (new_len == 0 ? 0 : 1);
    out += "@@ -" + std::to_string(old_start) + "," + std::to_string(old_len) + " +" +
           std::to_string(new_start_l) + "," + std::to_string(new_len) + " @@\n" + body;
    drift += hunk_drift;
    k = last + 1;
  }
  return out;
}

}  // namespace ddtest
