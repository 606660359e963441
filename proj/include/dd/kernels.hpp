#pragma once

// Word-parallel bitmap kernels used by the outcome cache. Each kernel has a
// portable scalar reference and an AVX2 variant; `active()` picks one at
// runtime from CPUID. The variants must agree bit-for-bit (see
// tests/unit/kernels_test.cpp).

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace dd::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  Isa isa;
  /// Index of the first row r with (needle & ~rows[r]) == 0, or -1. Rows are
  /// stored back to back, `stride` words each; needle.size() == stride.
  std::ptrdiff_t (*find_superset)(std::span<const std::uint64_t> needle,
                                  std::span<const std::uint64_t> rows,
                                  std::size_t stride);
  /// True iff (a & ~b) == 0.
  bool (*is_subset)(std::span<const std::uint64_t> a,
                    std::span<const std::uint64_t> b);
  std::size_t (*popcount)(std::span<const std::uint64_t> words);
};

const Table& scalar();
/// Null when the binary was built without AVX2 support.
const Table* avx2();

bool cpu_has_avx2();

/// Table selected for this process. Honours DD_FORCE_SCALAR=1.
const Table& active();

/// Test hook: force a specific table for subsequent `active()` calls.
void override_active(const Table* table);

std::string_view name(Isa isa);

}  // namespace dd::kernels
