#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "srn/reaction_network.hpp"

namespace srn {

// Linear map P: R^d -> R^dbar.  The canonical unit-row form selects one
// species per row; it is the case exercised by indicator observables and
// the only form the structural reaction classifier accepts.
class Projection {
 public:
  Projection(int full_dim, std::vector<std::vector<double>> rows);

  // Unit row selecting x[species].
  static Projection canonical(int full_dim, int species);
  // dbar = d identity map.
  static Projection identity(int full_dim);

  int full_dim() const { return d_; }
  int reduced_dim() const { return dbar_; }

  void apply(std::span<const double> x, std::span<double> out) const;
  std::vector<double> apply_state(const State& x) const;
  std::vector<double> apply_stoich(std::span<const int> nu) const;

  // Rounded projected state; exact for canonical rows on integer states.
  std::vector<std::int64_t> apply_state_lattice(const State& x) const;

  bool is_canonical() const { return canonical_; }
  // For canonical projections: the selected species index per row.
  const std::vector<int>& selected_species() const { return selected_; }

  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  int d_ = 0;
  int dbar_ = 0;
  std::vector<std::vector<double>> rows_;
  bool canonical_ = false;
  std::vector<int> selected_;
};

}  // namespace srn
