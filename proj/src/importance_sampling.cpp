#include "srn/importance_sampling.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace srn {

ControlPolicy ControlPolicy::crude() {
  return ControlPolicy("crude", [](double, const State&, std::span<const double> a,
                                   std::span<double> delta) {
    std::memcpy(delta.data(), a.data(), a.size() * sizeof(double));
  });
}

ControlPolicy ControlPolicy::scaled_crude(double factor) {
  return ControlPolicy("scaled-crude(" + std::to_string(factor) + ")",
                       [factor](double, const State&, std::span<const double> a,
                                std::span<double> delta) {
                         for (std::size_t j = 0; j < a.size(); ++j)
                           delta[j] = factor * a[j];
                       });
}

double log_likelihood_step(std::span<const double> a,
                           std::span<const double> delta,
                           std::span<const std::int64_t> p, double dt) {
  double log_l = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) {
      if (delta[j] != 0.0)
        throw inadmissible_control("delta > 0 on a reaction with zero propensity");
      continue;  // 0/0 convention: factor 1
    }
    if (delta[j] <= 0.0)
      throw inadmissible_control("delta = 0 on a reaction with positive propensity");
    log_l -= (a[j] - delta[j]) * dt;
    if (p[j] != 0)
      log_l += static_cast<double>(p[j]) * (std::log(a[j]) - std::log(delta[j]));
  }
  return log_l;
}

WeightedSample is_tau_leap_path(const ReactionNetwork& net, const State& x0,
                                const TimeGrid& grid, const ControlPolicy& policy,
                                RngStream& rng, WorkCounters* work) {
  net.validate_state(x0);
  const int J = net.reaction_count();
  const double dt = grid.dt();

  State x = x0;
  std::vector<double> a(static_cast<std::size_t>(J));
  std::vector<double> delta(static_cast<std::size_t>(J));
  std::vector<std::int64_t> p(static_cast<std::size_t>(J));
  LikelihoodAccumulator lik;

  for (int n = 0; n < grid.N; ++n) {
    net.propensities(x, a);
    policy.evaluate(grid.t(n), x, a, delta);
    for (int j = 0; j < J; ++j)
      p[static_cast<std::size_t>(j)] =
          rng.poisson(delta[static_cast<std::size_t>(j)] * dt);
    lik.add_log(log_likelihood_step(a, delta, p, dt));
    net.apply_firings(x, p);
    if (work) {
      work->propensity_evals += 1;
      work->poisson_draws += static_cast<std::uint64_t>(J);
      work->likelihood_updates += 1;
    }
  }
  return WeightedSample{std::move(x), lik.value(), lik.log_value()};
}

EstimatorReport is_mc_estimate(const ReactionNetwork& net, const State& x0,
                               const TimeGrid& grid, const ControlPolicy& policy,
                               const Observable& g, std::uint64_t paths,
                               std::uint64_t seed, StreamDomain domain,
                               std::uint64_t variant, unsigned threads) {
  const std::string context = "is-tl:" + g.tag() + ":N=" + std::to_string(grid.N) +
                              ":policy=" + policy.descriptor();
  return mc_estimate(
      paths,
      [&](std::uint64_t m) {
        RngStream rng(seed, substream_id(domain, variant, m));
        McSample s;
        WeightedSample ws = is_tau_leap_path(net, x0, grid, policy, rng, &s.work);
        s.value = ws.likelihood * g(ws.final_state);
        return s;
      },
      0.95, context, threads);
}

}  // namespace srn
