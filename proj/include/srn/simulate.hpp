#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "srn/reaction_network.hpp"
#include "srn/rng.hpp"

namespace srn {

// Operation counters carried through simulations and estimator reports.
struct WorkCounters {
  std::uint64_t poisson_draws = 0;
  std::uint64_t propensity_evals = 0;
  std::uint64_t likelihood_updates = 0;

  WorkCounters& operator+=(const WorkCounters& o) {
    poisson_draws += o.poisson_draws;
    propensity_evals += o.propensity_evals;
    likelihood_updates += o.likelihood_updates;
    return *this;
  }
};

// Explicit tau-leap step: x <- max(0, x + sum_j Poisson(a_j(x) dt) nu_j).
// Streaming form; on_state(k, x) is invoked for k = 0..N (k = 0 is x0).
// Returns the final state.
State tau_leap_scan(const ReactionNetwork& net, const State& x0,
                    const TimeGrid& grid, RngStream& rng,
                    const std::function<void(int, const State&)>& on_state,
                    WorkCounters* work = nullptr);

// Materialized tau-leap path: N+1 states including x0.
std::vector<State> tau_leap_path(const ReactionNetwork& net, const State& x0,
                                 const TimeGrid& grid, RngStream& rng,
                                 WorkCounters* work = nullptr);

// Final state only.
State tau_leap_final(const ReactionNetwork& net, const State& x0,
                     const TimeGrid& grid, RngStream& rng,
                     WorkCounters* work = nullptr);

// Gillespie's stochastic simulation algorithm (direct method); exact jump
// process of the random time change representation, used as the bias-free
// oracle.  Throws numeric_error once a path exceeds max_events.
State ssa_final_state(const ReactionNetwork& net, const State& x0, double T,
                      RngStream& rng, std::uint64_t max_events = 100000000ULL,
                      WorkCounters* work = nullptr);

}  // namespace srn
