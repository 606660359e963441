#include "dd/bitmap.hpp"

#include <stdexcept>

#include "dd/kernels.hpp"

namespace dd {

Bitmap::Bitmap(std::size_t bits) : bits_(bits), words_(words_for(bits), 0) {}

std::size_t Bitmap::count() const noexcept { return kernels::active().popcount(words_); }

bool Bitmap::is_subset_of(const Bitmap& other) const {
  if (other.bits_ != bits_) throw std::invalid_argument("bitmap width mismatch");
  return kernels::active().is_subset(words_, other.words_);
}

std::string Bitmap::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t n_bytes = (bits_ + 7) / 8;
  std::string out;
  out.reserve(n_bytes * 2);
  for (std::size_t k = 0; k < n_bytes; ++k) {
    const auto byte = static_cast<unsigned>((words_[k / 8] >> ((k % 8) * 8)) & 0xffu);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xfu]);
  }
  return out;
}

namespace {
int hex_value(char ch) {
  if (ch >= '0' && ch <= '9') return ch - '0';
  if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
  if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
  return -1;
}
}  // namespace

Bitmap Bitmap::from_hex(std::string_view hex, std::size_t bits) {
  const std::size_t n_bytes = (bits + 7) / 8;
  if (hex.size() != n_bytes * 2)
    throw std::invalid_argument("hex bitmap has " + std::to_string(hex.size()) +
                                " digits, expected " + std::to_string(n_bytes * 2));
  Bitmap out(bits);
  for (std::size_t k = 0; k < n_bytes; ++k) {
    const int hi = hex_value(hex[2 * k]);
    const int lo = hex_value(hex[2 * k + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit in bitmap");
    const auto byte = static_cast<std::uint64_t>(hi * 16 + lo);
    out.words_[k / 8] |= byte << ((k % 8) * 8);
  }
  if (bits % 64 != 0 && !out.words_.empty() &&
      (out.words_.back() >> (bits % 64)) != 0)
    throw std::invalid_argument("hex bitmap sets bits beyond the universe");
  return out;
}

std::size_t BitmapHash::operator()(const Bitmap& b) const noexcept {
  // FNV-1a over the words, seeded with the width.
  std::uint64_t h = 1469598103934665603ull ^ b.bits();
  for (auto w : b.words()) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace dd
