#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace dd::kernels::detail {

std::ptrdiff_t find_superset_scalar(std::span<const std::uint64_t> needle,
                                    std::span<const std::uint64_t> rows,
                                    std::size_t stride);
bool is_subset_scalar(std::span<const std::uint64_t> a,
                      std::span<const std::uint64_t> b);
std::size_t popcount_scalar(std::span<const std::uint64_t> words);

#if defined(DD_HAVE_AVX2)
std::ptrdiff_t find_superset_avx2(std::span<const std::uint64_t> needle,
                                  std::span<const std::uint64_t> rows,
                                  std::size_t stride);
bool is_subset_avx2(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b);
std::size_t popcount_avx2(std::span<const std::uint64_t> words);
#endif

}  // namespace dd::kernels::detail
