#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>

#include "srn/importance_sampling.hpp"
#include "srn/lattice.hpp"
#include "srn/projection.hpp"

namespace srn {

// Smoothed terminal condition g~(s) = 1/(1 + exp(-b - beta_s * s_coord)),
// strictly positive so the value function stays away from zero.
struct SigmoidFinal {
  double b = 0.0;
  double beta_s = 4.0;
  int coord = 0;  // coordinate of the lattice the threshold acts on

  // Midpoint at gamma + 0.5 (between the lattice points gamma and gamma+1).
  static SigmoidFinal for_threshold(double gamma, double slope = 4.0,
                                    int coord = 0) {
    return SigmoidFinal{-slope * (gamma + 0.5), slope, coord};
  }

  double operator()(std::span<const std::int64_t> s) const {
    const double z = b + beta_s * static_cast<double>(s[static_cast<std::size_t>(coord)]);
    return 1.0 / (1.0 + std::exp(-z));
  }
};

struct HJBConfig {
  std::vector<std::int64_t> s_max;  // per-coordinate truncation bound
  double u_floor = 1e-30;
  double ode_rel_tol = 1e-6;
  double ode_abs_tol = 1e-9;
  double max_step = 0.0;  // 0: default T/64
};

// Time-dependent propensity of the lattice system: fills a[j] for all J
// reactions at (t, s).
using LatticePropensity =
    std::function<void(double t, std::span<const std::int64_t> s,
                       std::span<double> a)>;

// Backward-ODE solution u~(t, s) on a truncated lattice.  Queries clamp s
// to the box and interpolate linearly between stored time nodes.
class ValueFunctionGrid {
 public:
  ValueFunctionGrid(BoxLattice lattice, double u_floor);

  const BoxLattice& lattice() const { return lattice_; }
  double u_floor() const { return u_floor_; }

  // times descending from T to 0
  const std::vector<double>& time_nodes() const { return times_; }
  const std::vector<double>& values_at_node(std::size_t k) const {
    return values_[k];
  }

  void append_node(double t, std::vector<double> values);

  double value(double t, std::int64_t state_index) const;
  double value_at(double t, std::span<const std::int64_t> coords) const;

  double min_stored_value() const;

  void save(std::ostream& os) const;
  static ValueFunctionGrid load(std::istream& is);

  std::uint64_t content_hash() const;

 private:
  BoxLattice lattice_;
  double u_floor_;
  std::vector<double> times_;                // descending
  std::vector<std::vector<double>> values_;  // per node, row-major over lattice
};

// Right-hand side of the coupled value-function ODEs at one time:
//   du/dt(t,s) = -2 sum_j a_j(t,s) (sqrt(u(s) u(s+nu_j)) - u(s)),
// with out-of-box neighbors clamped to the nearest box state.  Throws
// numeric_error when a negative value is encountered.
void hjb_rhs(const BoxLattice& lattice, double t,
             const std::vector<double>& values,
             const LatticePropensity& propensities,
             const std::vector<std::vector<std::int64_t>>& nu_bar,
             std::vector<double>& dudt);

// Integrates the system backward from t = T to t = 0 starting at
// u(T,s) = max(g~^2(s), u_floor), applying the positivity floor after each
// accepted step and storing every accepted node for dense queries.
ValueFunctionGrid solve_hjb_backward(const LatticePropensity& propensities,
                                     const std::vector<std::vector<std::int64_t>>& nu_bar,
                                     const SigmoidFinal& final_condition,
                                     const HJBConfig& cfg, double T);

// Closed-form minimizer over the solved grid.
//
// Without a projection (full-dimensional, lattice dim == d):
//   delta_j(t,x) = a_j(x) sqrt(u(t, max(0,x+nu_j)) / u(t,x)).
// With a projection (value function of the reduced system):
//   delta_j(t,x) = a_j(x) sqrt(u(t, max(0,P(x+nu_j))) / u(t,P(x))).
// delta_j = 0 exactly where a_j = 0; positive controls are floored at
// delta_floor.
ControlPolicy optimal_controls(std::shared_ptr<const ValueFunctionGrid> grid,
                               const ReactionNetwork& net,
                               std::optional<Projection> projection,
                               double delta_floor = 1e-12);

}  // namespace srn
