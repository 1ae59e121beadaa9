#include "srn/lattice.hpp"

#include <algorithm>

namespace srn {

BoxLattice::BoxLattice(std::vector<std::int64_t> s_max) : s_max_(std::move(s_max)) {
  if (s_max_.empty()) throw config_error("lattice: empty bounds");
  strides_.assign(s_max_.size(), 1);
  size_ = 1;
  for (int i = static_cast<int>(s_max_.size()) - 1; i >= 0; --i) {
    const auto si = s_max_[static_cast<std::size_t>(i)];
    if (si < 0) throw config_error("lattice: negative bound");
    strides_[static_cast<std::size_t>(i)] = size_;
    size_ *= si + 1;
    if (size_ > 4000000)
      throw config_error("lattice: truncated box exceeds 4e6 states");
  }
}

std::int64_t BoxLattice::index(std::span<const std::int64_t> coords) const {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < s_max_.size(); ++i) idx += coords[i] * strides_[i];
  return idx;
}

void BoxLattice::coords(std::int64_t index, std::span<std::int64_t> out) const {
  for (std::size_t i = 0; i < s_max_.size(); ++i) {
    out[i] = index / strides_[i];
    index -= out[i] * strides_[i];
  }
}

std::int64_t BoxLattice::clamped_neighbor(std::span<const std::int64_t> coords,
                                          std::span<const std::int64_t> jump) const {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < s_max_.size(); ++i) {
    const std::int64_t c = std::clamp<std::int64_t>(coords[i] + jump[i], 0, s_max_[i]);
    idx += c * strides_[i];
  }
  return idx;
}

std::int64_t BoxLattice::clamped_index(std::span<const std::int64_t> coords) const {
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < s_max_.size(); ++i) {
    const std::int64_t c = std::clamp<std::int64_t>(coords[i], 0, s_max_[i]);
    idx += c * strides_[i];
  }
  return idx;
}

}  // namespace srn
