#include "dd/configuration.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>

namespace dd {

Configuration::Configuration(std::size_t universe_size, std::vector<DeltaId> members)
    : universe_size_(universe_size), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw std::invalid_argument("configuration has duplicate delta ids");
  if (!members_.empty() && members_.back() >= universe_size_)
    throw std::invalid_argument("delta id " + std::to_string(members_.back()) +
                                " outside universe of size " +
                                std::to_string(universe_size_));
}

Configuration Configuration::full(std::size_t universe_size) {
  Configuration c(universe_size);
  c.members_.resize(universe_size);
  for (std::size_t i = 0; i < universe_size; ++i) c.members_[i] = static_cast<DeltaId>(i);
  return c;
}

Configuration Configuration::from_bitmap(const Bitmap& bitmap) {
  Configuration c(bitmap.bits());
  for (std::size_t i = 0; i < bitmap.bits(); ++i)
    if (bitmap.test(i)) c.members_.push_back(static_cast<DeltaId>(i));
  return c;
}

bool Configuration::contains(DeltaId id) const {
  return std::binary_search(members_.begin(), members_.end(), id);
}

bool Configuration::is_subset_of(const Configuration& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

Configuration Configuration::minus(const Configuration& other) const {
  Configuration out(universe_size_);
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out.members_));
  return out;
}

Configuration Configuration::with(const Configuration& other) const {
  Configuration out(universe_size_);
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out.members_));
  return out;
}

Bitmap Configuration::bitmap() const {
  Bitmap b(universe_size_);
  for (auto id : members_) b.set(id);
  return b;
}

std::string Configuration::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != 0) out += ",";
    out += "d" + std::to_string(members_[i]);
  }
  return out + "}";
}

std::vector<Configuration> partition(const Configuration& c, std::size_t n) {
  if (n < 2 || n > c.size())
    throw std::invalid_argument("partition: granularity " + std::to_string(n) +
                                " outside [2, " + std::to_string(c.size()) + "]");
  const auto members = c.members();
  const std::size_t base = members.size() / n;
  const std::size_t extra = members.size() % n;
  std::vector<Configuration> chunks;
  chunks.reserve(n);
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    chunks.emplace_back(c.universe_size(),
                        std::vector<DeltaId>(members.begin() + static_cast<std::ptrdiff_t>(start),
                                             members.begin() + static_cast<std::ptrdiff_t>(start + len)));
    start += len;
  }
  return chunks;
}

}  // namespace dd
