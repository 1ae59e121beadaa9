#pragma once

#include "srn/lattice.hpp"
#include "srn/observable.hpp"

namespace srn {

// Discrete-time value table from the dynamic programming recursion, used
// to cross-validate the backward HJB solve on small instances.
struct DpValueTable {
  TimeGrid grid;
  BoxLattice lattice;
  // values[n][state_index], n = 0..N; values[N] is the terminal g^2
  std::vector<std::vector<double>> values;

  // largest neglected-tail bound relative to the computed value
  double max_tail_rel = 0.0;
  bool tail_warning = false;

  double value(int n, std::span<const std::int64_t> coords) const {
    return values[static_cast<std::size_t>(n)]
                 [static_cast<std::size_t>(lattice.clamped_index(coords))];
  }
};

// Backward recursion
//   u(N,x) = g^2(x),
//   u(n,x) = inf_delta exp(sum_j (delta_j - 2 a_j) dt)
//            * sum_{|p| <= p_max} prod_j (dt a_j^2/delta_j)^{p_j}/p_j!
//            * u(n+1, max(0, x + nu p)),
// with the per-reaction infimum located by golden-section search around
// the closed-form minimizer.  Small instances only: J <= 3 and at most
// ~4e3 lattice states.  Sets tail_warning when the truncated Poisson tail
// exceeds tail_tolerance relative to the computed value.
DpValueTable dp_value_oracle(const ReactionNetwork& net, const Observable& g,
                             const TimeGrid& grid, const BoxLattice& truncation,
                             int p_max, double tail_tolerance = 1e-6);

}  // namespace srn
