#pragma once

#include <array>
#include <atomic>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>

#include "srn/hjb.hpp"
#include "srn/monte_carlo.hpp"
#include "srn/projection.hpp"

namespace srn {

// Monomial index set Lambda for the (t, s) regression basis, dbar = 1:
// exponent pairs (i1, i2) for t^{i1} s^{i2}, graded order, (0,0) first.
struct BasisSpec {
  std::vector<std::array<int, 2>> exponents;

  static BasisSpec tensor(int t_degree, int s_degree);
  std::size_t size() const { return exponents.size(); }
};

// Tau-leap path ensemble shared by the empirical inner product and the
// regression (same paths, same step size).
struct PathEnsemble {
  TimeGrid grid;
  int M = 0;
  int d = 0;
  // M x (N+1) x d row-major species counts
  std::vector<std::int64_t> states;

  std::span<const std::int64_t> state(int m, int k) const {
    const std::size_t stride = static_cast<std::size_t>(grid.N + 1) *
                               static_cast<std::size_t>(d);
    return {states.data() + static_cast<std::size_t>(m) * stride +
                static_cast<std::size_t>(k) * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }

  static PathEnsemble generate(const ReactionNetwork& net, const State& x0,
                               const TimeGrid& grid, int M, std::uint64_t seed,
                               StreamDomain domain, unsigned threads);
};

// Functions orthonormal under the empirical scalar product
//   <f,g> = (1/N) sum_n (1/M) sum_m f(t_n, P X_mn) g(t_n, P X_mn),
// recorded as lower-triangular combinations of the raw monomials.
struct OrthoBasis {
  std::vector<std::array<int, 2>> monomials;  // ordered Lambda
  std::vector<int> kept;                      // surviving pivots
  // weights[p][q]: coefficient of monomial q in orthonormal function p
  std::vector<std::vector<double>> weights;
  int dropped = 0;

  std::size_t size() const { return kept.size(); }
  void eval(double t, double s, std::span<double> out) const;
};

enum class ReactionKind { kExcluded, kClosedForm, kRegressed };

// Mass-action propensity that factors through the projection:
// theta * prod falling_factorial(s[row], order).
struct ClosedFormPropensity {
  double theta = 0.0;
  std::vector<std::pair<int, int>> orders;  // (reduced coordinate, order)
};

struct Classification {
  std::vector<ReactionKind> kinds;                 // per reaction
  std::vector<std::vector<std::int64_t>> nu_bar;   // P(nu_j), all j
  std::map<int, ClosedFormPropensity> closed_forms;
  std::vector<int> regressed;                      // J_MP
};

// Splits reactions into: no projected jump (excluded), propensity factoring
// through P (closed form), and the rest (J_MP, to be regressed).  The
// structural test covers mass-action only: a_j factors through a canonical
// P iff every reactant species is a projected coordinate.
Classification classify_reactions(const ReactionNetwork& net,
                                  const Projection& proj);

// Low-dimensional surrogate: projected jumps plus time-dependent
// propensities (regressed or closed form).
class MPModel {
 public:
  MPModel(Projection proj, Classification cls, OrthoBasis basis, double T);

  // moves transfer the extrapolation counter value (atomic member)
  MPModel(MPModel&& o) noexcept;
  MPModel& operator=(MPModel&& o) noexcept;
  MPModel(const MPModel&) = delete;
  MPModel& operator=(const MPModel&) = delete;

  const Projection& projection() const { return proj_; }
  const Classification& classification() const { return cls_; }
  const OrthoBasis& basis() const { return basis_; }
  double final_time() const { return T_; }

  const std::vector<std::int64_t>& nu_bar(int j) const {
    return cls_.nu_bar[static_cast<std::size_t>(j)];
  }
  int reaction_count() const { return static_cast<int>(cls_.kinds.size()); }

  void set_coefficients(int j, std::vector<double> c);
  const std::vector<double>& coefficients(int j) const;
  void set_sampled_hull(double s_min, double s_max) {
    s_seen_min_ = s_min;
    s_seen_max_ = s_max;
  }
  void set_fit_info(int paths, const TimeGrid& grid) {
    fit_paths_ = paths;
    fit_grid_ = grid;
  }
  int fit_paths() const { return fit_paths_; }
  const TimeGrid& fit_grid() const { return fit_grid_; }
  double residual_rms(int j) const;
  void set_residual_rms(int j, double r) { residual_rms_[j] = r; }

  // Projected propensity a-bar_j(t, s): polynomial expansion for regressed
  // channels (clamped at 0), the closed form for factoring channels, 0 for
  // channels without projected jump.  Queries outside the sampled hull are
  // clamped at 0 as well and counted.
  double propensity(int j, double t, std::span<const double> s) const;
  void propensities(double t, std::span<const double> s,
                    std::span<double> out) const;

  std::uint64_t extrapolated_queries() const {
    return extrapolations_.load(std::memory_order_relaxed);
  }

  void save(std::ostream& os) const;
  static MPModel load(std::istream& is);
  std::uint64_t content_hash() const;

 private:
  Projection proj_;
  Classification cls_;
  OrthoBasis basis_;
  double T_;
  std::map<int, std::vector<double>> coeffs_;
  std::map<int, double> residual_rms_;
  double s_seen_min_ = 0.0;
  double s_seen_max_ = 0.0;
  int fit_paths_ = 0;
  TimeGrid fit_grid_{};
  mutable std::atomic<std::uint64_t> extrapolations_{0};
};

// Orthonormalizes the monomial basis against the ensemble's empirical
// scalar product.  Degenerate pivots (norm below 1e-10 of the first pivot)
// are dropped and recorded.
OrthoBasis empirical_gram_schmidt(const PathEnsemble& paths, const BasisSpec& basis,
                                  const Projection& proj);

// Solves the discrete L2 regression for every reaction in J_MP via the
// normal equations; with the orthonormal basis the system is diagonal.
// force_regress overrides the classification's J_MP (diagnostics only).
MPModel fit_mp(const PathEnsemble& paths, const BasisSpec& basis,
               const Projection& proj, const ReactionNetwork& net,
               std::optional<std::vector<int>> force_regress = std::nullopt);

// Tau-leap on the reduced lattice with the surrogate propensities.
std::vector<std::int64_t> mp_process_simulate(const MPModel& model,
                                              const std::vector<std::int64_t>& s0,
                                              const TimeGrid& grid, RngStream& rng,
                                              WorkCounters* work = nullptr);

// Controls mapped from the reduced value function using the surrogate
// propensity in place of a_j (the alternative mapping):
//   delta_j(t,x) = abar_j(t,P(x)) sqrt(u(t, max(0,P(x)+P(nu_j))) / u(t,P(x))).
// Channels without projected jump keep delta_j = a_j (measure unchanged);
// abar = 0 with a_j > 0 falls back to delta_floor.
ControlPolicy alternative_controls(std::shared_ptr<const ValueFunctionGrid> grid,
                                   std::shared_ptr<const MPModel> model,
                                   double delta_floor = 1e-12);

}  // namespace srn
