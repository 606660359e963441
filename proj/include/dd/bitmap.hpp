#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dd {

/// Fixed-width membership bitmap over a delta universe. Bit i set means
/// delta i is included. Unused high bits of the last word are always zero,
/// so word-wise equality is set equality.
class Bitmap {
public:
  Bitmap() = default;
  explicit Bitmap(std::size_t bits);

  std::size_t bits() const noexcept { return bits_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept;

  /// True iff every bit set here is also set in `other`. Both bitmaps must
  /// have the same width.
  bool is_subset_of(const Bitmap& other) const;

  /// Little-endian by delta id: byte k holds ids 8k..8k+7 (bit j of the byte
  /// is id 8k+j), each byte printed as two lowercase hex digits.
  std::string to_hex() const;
  static Bitmap from_hex(std::string_view hex, std::size_t bits);

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitmapHash {
  std::size_t operator()(const Bitmap& b) const noexcept;
};

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace dd
