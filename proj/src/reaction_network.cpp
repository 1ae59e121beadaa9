#include "srn/reaction_network.hpp"

#include <algorithm>

namespace srn {

ReactionNetwork::ReactionNetwork(int species_count,
                                 std::vector<std::vector<int>> reactant_coeffs,
                                 std::vector<std::vector<int>> product_coeffs,
                                 std::vector<double> rates,
                                 std::vector<std::string> species_names)
    : d_(species_count), theta_(std::move(rates)), names_(std::move(species_names)) {
  const std::size_t J = theta_.size();
  if (d_ <= 0) throw config_error("network: species count must be positive");
  if (J == 0) throw config_error("network: at least one reaction required");
  if (reactant_coeffs.size() != J || product_coeffs.size() != J)
    throw config_error("network: coefficient row count does not match rates");
  if (!names_.empty() && static_cast<int>(names_.size()) != d_)
    throw config_error("network: species name count does not match d");

  alpha_.assign(J * static_cast<std::size_t>(d_), 0);
  beta_.assign(J * static_cast<std::size_t>(d_), 0);
  nu_.assign(J * static_cast<std::size_t>(d_), 0);
  reactants_.resize(J);

  for (std::size_t j = 0; j < J; ++j) {
    if (theta_[j] <= 0.0)
      throw config_error("network: rate constants must be positive");
    const auto& a = reactant_coeffs[j];
    const auto& b = product_coeffs[j];
    if (static_cast<int>(a.size()) != d_ || static_cast<int>(b.size()) != d_)
      throw config_error("network: coefficient row length does not match d");
    for (int i = 0; i < d_; ++i) {
      if (a[i] < 0 || b[i] < 0)
        throw config_error("network: alpha/beta must be nonnegative");
      alpha_[idx(static_cast<int>(j), i)] = a[i];
      beta_[idx(static_cast<int>(j), i)] = b[i];
      nu_[idx(static_cast<int>(j), i)] = b[i] - a[i];
      if (a[i] > 0) reactants_[j].emplace_back(i, a[i]);
    }
  }
}

int ReactionNetwork::species_index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw config_error("network: unknown species name '" + name + "'");
}

double ReactionNetwork::propensity(int j, const State& x) const {
  double a = theta_[j];
  for (const auto& [i, order] : reactants_[static_cast<std::size_t>(j)]) {
    const std::int64_t xi = x[static_cast<std::size_t>(i)];
    if (xi < order) return 0.0;
    // falling factorial x (x-1) ... (x-order+1)
    for (int r = 0; r < order; ++r) a *= static_cast<double>(xi - r);
  }
  return a;
}

void ReactionNetwork::propensities(const State& x, std::span<double> out) const {
  for (int j = 0; j < reaction_count(); ++j) out[static_cast<std::size_t>(j)] = propensity(j, x);
}

void ReactionNetwork::apply_firings(State& x, std::span<const std::int64_t> p) const {
  for (int j = 0; j < reaction_count(); ++j) {
    const std::int64_t pj = p[static_cast<std::size_t>(j)];
    if (pj == 0) continue;
    for (int i = 0; i < d_; ++i)
      x[static_cast<std::size_t>(i)] += pj * nu_[idx(j, i)];
  }
  for (auto& xi : x) xi = std::max<std::int64_t>(xi, 0);
}

void ReactionNetwork::validate_state(const State& x) const {
  if (static_cast<int>(x.size()) != d_)
    throw config_error("state: dimension does not match network");
  for (auto xi : x)
    if (xi < 0) throw config_error("state: negative species count");
}

NetworkPreset michaelis_menten_preset() {
  // Species order (E, S, C, P).
  std::vector<std::vector<int>> alpha = {
      {1, 1, 0, 0},   // E + S -> C
      {0, 0, 1, 0},   // C -> E + S
      {0, 0, 1, 0},   // C -> E + P
  };
  std::vector<std::vector<int>> beta = {
      {0, 0, 1, 0},
      {1, 1, 0, 0},
      {1, 0, 0, 1},
  };
  ReactionNetwork net(4, alpha, beta, {0.001, 0.005, 0.01}, {"E", "S", "C", "P"});
  return NetworkPreset{std::move(net), State{100, 100, 0, 0}, 1.0, 2, 22.0,
                       "michaelis-menten"};
}

NetworkPreset goutsias_preset() {
  // Species order (M, D, RNA, DNA, DNA_D, DNA_2D).
  std::vector<std::vector<int>> alpha = {
      {0, 0, 1, 0, 0, 0},  // RNA -> RNA + M
      {1, 0, 0, 0, 0, 0},  // M -> 0
      {0, 0, 0, 0, 1, 0},  // DNA_D -> RNA + DNA_D
      {0, 0, 1, 0, 0, 0},  // RNA -> 0
      {0, 1, 0, 1, 0, 0},  // DNA + D -> DNA_D
      {0, 0, 0, 0, 1, 0},  // DNA_D -> DNA + D
      {0, 1, 0, 0, 1, 0},  // DNA_D + D -> DNA_2D
      {0, 0, 0, 0, 0, 1},  // DNA_2D -> DNA_D + D
      {2, 0, 0, 0, 0, 0},  // 2M -> D
      {0, 1, 0, 0, 0, 0},  // D -> 2M
  };
  std::vector<std::vector<int>> beta = {
      {1, 0, 1, 0, 0, 0},
      {0, 0, 0, 0, 0, 0},
      {0, 0, 1, 0, 1, 0},
      {0, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, 0},
      {0, 1, 0, 1, 0, 0},
      {0, 0, 0, 0, 0, 1},
      {0, 1, 0, 0, 1, 0},
      {0, 1, 0, 0, 0, 0},
      {2, 0, 0, 0, 0, 0},
  };
  std::vector<double> theta = {0.043,    0.0007, 0.0715, 0.0039, 0.0199,
                               0.479,    0.000199, 8.77e-12, 0.083, 0.5};
  ReactionNetwork net(6, alpha, beta, theta,
                      {"M", "D", "RNA", "DNA", "DNA_D", "DNA_2D"});
  return NetworkPreset{std::move(net), State{2, 6, 0, 0, 2, 0}, 1.0, 1, 8.0,
                       "goutsias"};
}

NetworkPreset preset_by_name(const std::string& name) {
  if (name == "michaelis-menten") return michaelis_menten_preset();
  if (name == "goutsias") return goutsias_preset();
  throw config_error("unknown network preset '" + name + "'");
}

}  // namespace srn
