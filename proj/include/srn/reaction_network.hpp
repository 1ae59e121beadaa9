#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "srn/errors.hpp"

namespace srn {

// Molecule counts of the d species.
using State = std::vector<std::int64_t>;

// Uniform time mesh t_n = n * dt on [0, T].
struct TimeGrid {
  double T = 1.0;
  int N = 1;

  double dt() const { return T / static_cast<double>(N); }
  double t(int n) const { return static_cast<double>(n) * dt(); }
};

// A mass-action reaction network: J reaction channels over d species with
// reactant coefficients alpha, product coefficients beta, rate constants
// theta and stoichiometric vectors nu = beta - alpha.
class ReactionNetwork {
 public:
  ReactionNetwork(int species_count,
                  std::vector<std::vector<int>> reactant_coeffs,
                  std::vector<std::vector<int>> product_coeffs,
                  std::vector<double> rates,
                  std::vector<std::string> species_names = {});

  int species_count() const { return d_; }
  int reaction_count() const { return static_cast<int>(theta_.size()); }

  double rate(int j) const { return theta_[j]; }
  int reactant_coeff(int j, int i) const { return alpha_[idx(j, i)]; }
  int product_coeff(int j, int i) const { return beta_[idx(j, i)]; }
  int stoich(int j, int i) const { return nu_[idx(j, i)]; }
  std::span<const int> stoich_row(int j) const {
    return {nu_.data() + idx(j, 0), static_cast<std::size_t>(d_)};
  }

  const std::vector<std::string>& species_names() const { return names_; }
  int species_index(const std::string& name) const;

  // Mass-action propensity a_j(x) = theta_j * prod_i x_i!/(x_i-alpha_ji)!
  // with a_j = 0 whenever some reactant count is insufficient.  Evaluated
  // as a product of falling factorials so counts around 100 stay well
  // inside double range.
  double propensity(int j, const State& x) const;
  void propensities(const State& x, std::span<double> out) const;

  // Applies firing counts p (length J) to x in place, then clamps each
  // coordinate at zero (the tau-leap projection).
  void apply_firings(State& x, std::span<const std::int64_t> p) const;

  void validate_state(const State& x) const;

 private:
  std::size_t idx(int j, int i) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(d_) +
           static_cast<std::size_t>(i);
  }

  int d_ = 0;
  std::vector<int> alpha_;  // J x d, row-major
  std::vector<int> beta_;   // J x d
  std::vector<int> nu_;     // J x d
  std::vector<double> theta_;
  std::vector<std::string> names_;
  // (species, order) pairs with order > 0, per reaction
  std::vector<std::vector<std::pair<int, int>>> reactants_;
};

// A named example system: network plus initial state, horizon and the
// rare-event observable used in the experiments.
struct NetworkPreset {
  ReactionNetwork net;
  State x0;
  double T;
  int observable_species;  // 0-based index
  double threshold;        // event is x_i > threshold at final time
  std::string name;
};

// Michaelis-Menten enzyme kinetics: E+S -> C, C -> E+S, C -> E+P with
// theta = (0.001, 0.005, 0.01), x0 = (100,100,0,0), T = 1, event C(T) > 22.
NetworkPreset michaelis_menten_preset();

// Goutsias's model of regulated transcription: six species, ten channels,
// x0 = (2,6,0,0,2,0), T = 1, event D(T) > 8.
NetworkPreset goutsias_preset();

// Returns the preset with the given name ("michaelis-menten" | "goutsias").
NetworkPreset preset_by_name(const std::string& name);

}  // namespace srn
