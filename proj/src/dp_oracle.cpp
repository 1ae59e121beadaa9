#include "srn/dp_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace srn {

namespace {

struct FiringVector {
  std::vector<int> p;
  double inv_factorial;             // 1 / prod_j p_j!
  std::vector<std::int64_t> jump;   // sum_j p_j nu_j
  int total;
};

void enumerate_firings(const ReactionNetwork& net, int p_max,
                       std::vector<int>& p, int j,
                       std::vector<FiringVector>& out) {
  const int J = net.reaction_count();
  if (j == J) {
    FiringVector fv;
    fv.p = p;
    fv.total = 0;
    double fact = 1.0;
    for (int pj : p) {
      fv.total += pj;
      for (int r = 2; r <= pj; ++r) fact *= static_cast<double>(r);
    }
    fv.inv_factorial = 1.0 / fact;
    fv.jump.assign(static_cast<std::size_t>(net.species_count()), 0);
    for (int jj = 0; jj < J; ++jj)
      for (int i = 0; i < net.species_count(); ++i)
        fv.jump[static_cast<std::size_t>(i)] +=
            static_cast<std::int64_t>(p[static_cast<std::size_t>(jj)]) *
            net.stoich(jj, i);
    out.push_back(std::move(fv));
    return;
  }
  int used = 0;
  for (int jj = 0; jj < j; ++jj) used += p[static_cast<std::size_t>(jj)];
  for (int pj = 0; pj <= p_max - used; ++pj) {
    p[static_cast<std::size_t>(j)] = pj;
    enumerate_firings(net, p_max, p, j + 1, out);
  }
  p[static_cast<std::size_t>(j)] = 0;
}

// objective F(delta) for one state given the next-step values gathered per
// firing vector
struct StateObjective {
  const std::vector<FiringVector>* firings;
  const std::vector<double>* u_next;  // per firing vector
  std::span<const double> a;
  double dt;
  int p_max;

  double eval(std::span<const double> delta) const {
    double exp_arg = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      exp_arg += (delta[j] - 2.0 * a[j]) * dt;

    // powers of lambda_j = dt a_j^2 / delta_j
    const std::size_t J = a.size();
    double pows[3][16];
    for (std::size_t j = 0; j < J; ++j) {
      const double lambda = a[j] > 0.0 ? dt * a[j] * a[j] / delta[j] : 0.0;
      pows[j][0] = 1.0;
      for (int k = 1; k <= p_max; ++k)
        pows[j][k] = pows[j][static_cast<std::size_t>(k - 1)] * lambda;
    }
    double sum = 0.0;
    for (std::size_t q = 0; q < firings->size(); ++q) {
      const auto& fv = (*firings)[q];
      double term = fv.inv_factorial * (*u_next)[q];
      for (std::size_t j = 0; j < J; ++j)
        term *= pows[j][static_cast<std::size_t>(fv.p[j])];
      sum += term;
    }
    return std::exp(exp_arg) * sum;
  }
};

}  // namespace

DpValueTable dp_value_oracle(const ReactionNetwork& net, const Observable& g,
                             const TimeGrid& grid, const BoxLattice& truncation,
                             int p_max, double tail_tolerance) {
  const int J = net.reaction_count();
  const int d = net.species_count();
  if (J > 3) throw config_error("dp_value_oracle: supports at most 3 reactions");
  if (truncation.dim() != d)
    throw config_error("dp_value_oracle: truncation box dim != species count");
  if (truncation.size() > 4096)
    throw config_error("dp_value_oracle: lattice too large for the oracle");
  if (p_max < 1 || p_max > 15)
    throw config_error("dp_value_oracle: p_max out of range");

  const std::int64_t n_states = truncation.size();
  const double dt = grid.dt();

  // all firing vectors with |p| <= p_max, their jumps and factorials
  std::vector<FiringVector> firings;
  {
    std::vector<int> p(static_cast<std::size_t>(J), 0);
    enumerate_firings(net, p_max, p, 0, firings);
  }

  // per-state propensities and per-(state, firing) clamped neighbors
  std::vector<double> prop(static_cast<std::size_t>(n_states * J));
  std::vector<std::int64_t> nbr(static_cast<std::size_t>(n_states) * firings.size());
  std::vector<std::int64_t> single_jump_nbr(static_cast<std::size_t>(n_states * J));
  {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(d));
    State x(static_cast<std::size_t>(d));
    for (std::int64_t s = 0; s < n_states; ++s) {
      truncation.coords(s, coords);
      for (int i = 0; i < d; ++i)
        x[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
      for (int j = 0; j < J; ++j)
        prop[static_cast<std::size_t>(s * J + j)] = net.propensity(j, x);
      for (std::size_t q = 0; q < firings.size(); ++q)
        nbr[static_cast<std::size_t>(s) * firings.size() + q] =
            truncation.clamped_neighbor(coords, firings[q].jump);
      for (int j = 0; j < J; ++j) {
        std::vector<std::int64_t> nu(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
          nu[static_cast<std::size_t>(i)] = net.stoich(j, i);
        single_jump_nbr[static_cast<std::size_t>(s * J + j)] =
            truncation.clamped_neighbor(coords, nu);
      }
    }
  }

  DpValueTable table{grid, truncation, {}, 0.0, false};
  table.values.assign(static_cast<std::size_t>(grid.N) + 1,
                      std::vector<double>(static_cast<std::size_t>(n_states)));

  // terminal condition u(N, x) = g^2(x)
  {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(d));
    State x(static_cast<std::size_t>(d));
    for (std::int64_t s = 0; s < n_states; ++s) {
      truncation.coords(s, coords);
      for (int i = 0; i < d; ++i)
        x[static_cast<std::size_t>(i)] = coords[static_cast<std::size_t>(i)];
      const double gx = g(x);
      table.values[static_cast<std::size_t>(grid.N)][static_cast<std::size_t>(s)] =
          gx * gx;
    }
  }

  constexpr double inv_phi = 0.6180339887498949;
  std::vector<double> u_next_per_firing(firings.size());
  std::vector<double> delta(static_cast<std::size_t>(J));

  for (int n = grid.N - 1; n >= 0; --n) {
    const auto& u_next = table.values[static_cast<std::size_t>(n + 1)];
    auto& u_here = table.values[static_cast<std::size_t>(n)];
    double u_next_max = 0.0;
    for (double v : u_next) u_next_max = std::max(u_next_max, v);

    for (std::int64_t s = 0; s < n_states; ++s) {
      const std::span<const double> a{prop.data() + s * J,
                                      static_cast<std::size_t>(J)};
      for (std::size_t q = 0; q < firings.size(); ++q)
        u_next_per_firing[q] =
            u_next[static_cast<std::size_t>(nbr[static_cast<std::size_t>(s) * firings.size() + q])];

      StateObjective obj{&firings, &u_next_per_firing, a, dt, p_max};

      // closed-form starting point delta_j = a_j sqrt(u(x+nu_j)/u(x))
      const double u_s = u_next[static_cast<std::size_t>(s)];
      bool any_active = false;
      for (int j = 0; j < J; ++j) {
        if (a[static_cast<std::size_t>(j)] == 0.0) {
          delta[static_cast<std::size_t>(j)] = 0.0;
          continue;
        }
        any_active = true;
        const double u_nb =
            u_next[static_cast<std::size_t>(single_jump_nbr[static_cast<std::size_t>(s * J + j)])];
        double ratio = 1.0;
        if (u_s > 0.0 && u_nb > 0.0) ratio = std::sqrt(u_nb / u_s);
        delta[static_cast<std::size_t>(j)] =
            std::max(a[static_cast<std::size_t>(j)] * ratio, 1e-12);
      }

      if (!any_active) {
        // nothing fires: only p = 0 contributes
        u_here[static_cast<std::size_t>(s)] =
            std::exp(0.0) * u_next[static_cast<std::size_t>(s)];
        continue;
      }

      // coordinate descent, golden-section on log(delta_j)
      for (int sweep = 0; sweep < 3; ++sweep) {
        for (int j = 0; j < J; ++j) {
          if (a[static_cast<std::size_t>(j)] == 0.0) continue;
          double lo = std::log(delta[static_cast<std::size_t>(j)] / 64.0);
          double hi = std::log(delta[static_cast<std::size_t>(j)] * 64.0);
          double x1 = hi - inv_phi * (hi - lo);
          double x2 = lo + inv_phi * (hi - lo);
          auto feval = [&](double logd) {
            delta[static_cast<std::size_t>(j)] = std::exp(logd);
            return obj.eval(delta);
          };
          double f1 = feval(x1);
          double f2 = feval(x2);
          for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
              hi = x2;
              x2 = x1;
              f2 = f1;
              x1 = hi - inv_phi * (hi - lo);
              f1 = feval(x1);
            } else {
              lo = x1;
              x1 = x2;
              f1 = f2;
              x2 = lo + inv_phi * (hi - lo);
              f2 = feval(x2);
            }
          }
          delta[static_cast<std::size_t>(j)] = std::exp(0.5 * (lo + hi));
        }
      }

      const double value = obj.eval(delta);
      u_here[static_cast<std::size_t>(s)] = value;

      // neglected-tail bound: sum_{|p| > p_max} Lambda^k/k! <=
      // Lambda^(p_max+1)/(p_max+1)! e^Lambda, weighted by the exp factor
      // and the largest next-step value
      double lambda_total = 0.0;
      double exp_arg = 0.0;
      for (int j = 0; j < J; ++j) {
        const double aj = a[static_cast<std::size_t>(j)];
        if (aj > 0.0)
          lambda_total += dt * aj * aj / delta[static_cast<std::size_t>(j)];
        exp_arg += (delta[static_cast<std::size_t>(j)] - 2.0 * aj) * dt;
      }
      double tail = std::pow(lambda_total, p_max + 1);
      for (int r = 2; r <= p_max + 1; ++r) tail /= static_cast<double>(r);
      tail *= std::exp(lambda_total) * std::exp(exp_arg) * u_next_max;
      if (value > 0.0)
        table.max_tail_rel = std::max(table.max_tail_rel, tail / value);
    }
  }

  table.tail_warning = table.max_tail_rel > tail_tolerance;
  return table;
}

}  // namespace srn
