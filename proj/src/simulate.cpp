#include "srn/simulate.hpp"

namespace srn {

State tau_leap_scan(const ReactionNetwork& net, const State& x0,
                    const TimeGrid& grid, RngStream& rng,
                    const std::function<void(int, const State&)>& on_state,
                    WorkCounters* work) {
  net.validate_state(x0);
  const int J = net.reaction_count();
  const double dt = grid.dt();

  State x = x0;
  std::vector<double> a(static_cast<std::size_t>(J));
  std::vector<std::int64_t> p(static_cast<std::size_t>(J));

  if (on_state) on_state(0, x);
  for (int k = 1; k <= grid.N; ++k) {
    net.propensities(x, a);
    for (int j = 0; j < J; ++j)
      p[static_cast<std::size_t>(j)] = rng.poisson(a[static_cast<std::size_t>(j)] * dt);
    net.apply_firings(x, p);
    if (work) {
      work->propensity_evals += 1;
      work->poisson_draws += static_cast<std::uint64_t>(J);
    }
    if (on_state) on_state(k, x);
  }
  return x;
}

std::vector<State> tau_leap_path(const ReactionNetwork& net, const State& x0,
                                 const TimeGrid& grid, RngStream& rng,
                                 WorkCounters* work) {
  std::vector<State> path;
  path.reserve(static_cast<std::size_t>(grid.N) + 1);
  tau_leap_scan(
      net, x0, grid, rng, [&](int, const State& x) { path.push_back(x); },
      work);
  return path;
}

State tau_leap_final(const ReactionNetwork& net, const State& x0,
                     const TimeGrid& grid, RngStream& rng, WorkCounters* work) {
  return tau_leap_scan(net, x0, grid, rng, nullptr, work);
}

State ssa_final_state(const ReactionNetwork& net, const State& x0, double T,
                      RngStream& rng, std::uint64_t max_events,
                      WorkCounters* work) {
  net.validate_state(x0);
  const int J = net.reaction_count();

  State x = x0;
  std::vector<double> a(static_cast<std::size_t>(J));
  std::vector<std::int64_t> one(static_cast<std::size_t>(J), 0);

  double t = 0.0;
  std::uint64_t events = 0;
  for (;;) {
    net.propensities(x, a);
    if (work) work->propensity_evals += 1;
    double a0 = 0.0;
    for (double aj : a) a0 += aj;
    if (a0 <= 0.0) break;  // absorbed: nothing can fire

    t += rng.exponential(a0);
    if (t > T) break;

    // categorical selection proportional to a_j
    double u = rng.uniform() * a0;
    int j = 0;
    double cum = a[0];
    while (u > cum && j + 1 < J) {
      ++j;
      cum += a[static_cast<std::size_t>(j)];
    }

    std::fill(one.begin(), one.end(), 0);
    one[static_cast<std::size_t>(j)] = 1;
    net.apply_firings(x, one);

    if (++events >= max_events)
      throw numeric_error("ssa: event cap exceeded (runaway network?)");
  }
  return x;
}

}  // namespace srn
