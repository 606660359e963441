#include "kernels_impl.hpp"

#include <bit>

namespace dd::kernels::detail {

std::ptrdiff_t find_superset_scalar(std::span<const std::uint64_t> needle,
                                    std::span<const std::uint64_t> rows,
                                    std::size_t stride) {
  if (stride == 0) return rows.empty() ? -1 : 0;
  const std::size_t n_rows = rows.size() / stride;
  for (std::size_t r = 0; r < n_rows; ++r) {
    const std::uint64_t* row = rows.data() + r * stride;
    std::uint64_t stray = 0;
    for (std::size_t w = 0; w < stride; ++w) stray |= needle[w] & ~row[w];
    if (stray == 0) return static_cast<std::ptrdiff_t>(r);
  }
  return -1;
}

bool is_subset_scalar(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b) {
  for (std::size_t w = 0; w < a.size(); ++w)
    if (a[w] & ~b[w]) return false;
  return true;
}

std::size_t popcount_scalar(std::span<const std::uint64_t> words) {
  std::size_t total = 0;
  for (auto w : words) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

}  // namespace dd::kernels::detail
