#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srn/errors.hpp"

namespace srn {

// Truncated state box prod_i [0, s_max_i] with row-major linear indexing.
// Neighbor lookups clamp below at 0 and above at s_max (states outside the
// box map to the nearest box state).
class BoxLattice {
 public:
  explicit BoxLattice(std::vector<std::int64_t> s_max);

  int dim() const { return static_cast<int>(s_max_.size()); }
  std::int64_t size() const { return size_; }
  std::int64_t s_max(int i) const { return s_max_[static_cast<std::size_t>(i)]; }
  const std::vector<std::int64_t>& bounds() const { return s_max_; }

  std::int64_t index(std::span<const std::int64_t> coords) const;
  void coords(std::int64_t index, std::span<std::int64_t> out) const;

  // Index of max(0, min(s_max, coords + jump)).
  std::int64_t clamped_neighbor(std::span<const std::int64_t> coords,
                                std::span<const std::int64_t> jump) const;

  // Index of the nearest box state to arbitrary coords.
  std::int64_t clamped_index(std::span<const std::int64_t> coords) const;

 private:
  std::vector<std::int64_t> s_max_;
  std::vector<std::int64_t> strides_;
  std::int64_t size_ = 0;
};

}  // namespace srn
