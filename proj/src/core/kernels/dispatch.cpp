#include "dd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace dd::kernels {

namespace {

constexpr Table kScalar{Isa::Scalar, &detail::find_superset_scalar,
                        &detail::is_subset_scalar, &detail::popcount_scalar};

#if defined(DD_HAVE_AVX2)
constexpr Table kAvx2{Isa::Avx2, &detail::find_superset_avx2,
                      &detail::is_subset_avx2, &detail::popcount_avx2};
#endif

std::atomic<const Table*> g_override{nullptr};

const Table& detect() {
  if (const char* force = std::getenv("DD_FORCE_SCALAR");
      force != nullptr && std::string_view(force) == "1")
    return kScalar;
  if (const Table* t = avx2(); t != nullptr && cpu_has_avx2()) return *t;
  return kScalar;
}

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#if defined(DD_HAVE_AVX2)
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool cpu_has_avx2() {
#if defined(DD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table& active() {
  if (const Table* t = g_override.load(std::memory_order_acquire)) return *t;
  static const Table& selected = detect();
  return selected;
}

void override_active(const Table* table) {
  g_override.store(table, std::memory_order_release);
}

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

}  // namespace dd::kernels
