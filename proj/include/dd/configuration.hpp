#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dd/bitmap.hpp"

namespace dd {

using DeltaId = std::uint32_t;

/// An atomic change. `payload` is an opaque handle interpreted by whichever
/// front-end created the universe (token index, change index, trace event).
struct Delta {
  DeltaId id = 0;
  std::string label;
  std::uint64_t payload = 0;
};

/// A subset of a delta universe {0, ..., universe_size-1}, kept in canonical
/// ascending order. Two configurations are equal iff their universes and
/// member lists are equal.
class Configuration {
public:
  Configuration() = default;
  explicit Configuration(std::size_t universe_size) : universe_size_(universe_size) {}

  /// Throws std::invalid_argument on duplicate or out-of-range ids. Input
  /// order does not matter.
  Configuration(std::size_t universe_size, std::vector<DeltaId> members);

  static Configuration full(std::size_t universe_size);
  static Configuration from_bitmap(const Bitmap& bitmap);

  std::size_t universe_size() const noexcept { return universe_size_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const DeltaId> members() const noexcept { return members_; }
  DeltaId operator[](std::size_t i) const { return members_[i]; }

  bool contains(DeltaId id) const;
  bool is_subset_of(const Configuration& other) const;

  /// Members of *this that are not in `other` (c - c_i).
  Configuration minus(const Configuration& other) const;
  Configuration with(const Configuration& other) const;

  Bitmap bitmap() const;

  std::string to_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

private:
  std::size_t universe_size_ = 0;
  std::vector<DeltaId> members_;
};

/// Splits `c` into `n` contiguous runs of its member list. Chunk sizes differ
/// by at most one; the first |c| mod n chunks carry the extra element.
/// Throws std::invalid_argument unless 2 <= n <= |c|.
std::vector<Configuration> partition(const Configuration& c, std::size_t n);

}  // namespace dd
