#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "srn/dp_oracle.hpp"
#include "srn/hjb.hpp"
#include "srn/ode.hpp"
#include "srn/simulate.hpp"

using namespace srn;

namespace {

ReactionNetwork pure_death(double theta) {
  return ReactionNetwork(1, {{1}}, {{0}}, {theta}, {"X"});
}

LatticePropensity net_propensity(const ReactionNetwork& net) {
  return [&net](double, std::span<const std::int64_t> s, std::span<double> a) {
    State x(s.begin(), s.end());
    net.propensities(x, a);
  };
}

std::vector<std::vector<std::int64_t>> net_jumps(const ReactionNetwork& net) {
  std::vector<std::vector<std::int64_t>> nu;
  for (int j = 0; j < net.reaction_count(); ++j) {
    const auto row = net.stoich_row(j);
    nu.emplace_back(row.begin(), row.end());
  }
  return nu;
}

}  // namespace

TEST_CASE("rk45 reproduces exponential decay in both directions") {
  auto f = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = -y[0];
  };
  std::vector<double> y{1.0};
  integrate_rk45(f, y, 0.0, 1.0, OdeOptions{1e-10, 1e-12, 0.0}, nullptr, nullptr);
  CHECK(y[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

  // backward: y' = -y from t=1 (y=e^-1) down to t=0 recovers 1
  integrate_rk45(f, y, 1.0, 0.0, OdeOptions{1e-10, 1e-12, 0.0}, nullptr, nullptr);
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sigmoid terminal condition") {
  SUBCASE("midpoint value is one half") {
    const auto g = SigmoidFinal::for_threshold(9.0, 4.0);
    // midpoint at 9.5; probe with the closest lattice points
    const std::int64_t s9[] = {9};
    const std::int64_t s10[] = {10};
    CHECK(g(s9) == doctest::Approx(1.0 / (1.0 + std::exp(2.0))));
    CHECK(g(s10) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  }
  SUBCASE("steep slope saturates far above the threshold") {
    const auto g = SigmoidFinal::for_threshold(5.0, 40.0);
    const std::int64_t s[] = {12};
    CHECK(g(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("defaults for the Michaelis-Menten threshold 22") {
    const auto g = SigmoidFinal::for_threshold(22.0);  // slope 4, midpoint 22.5
    const std::int64_t s22[] = {22};
    const std::int64_t s23[] = {23};
    CHECK(g(s22) == doctest::Approx(0.11920292).epsilon(1e-6));
    CHECK(g(s23) == doctest::Approx(0.88079708).epsilon(1e-6));
  }
}

TEST_CASE("hjb_rhs hand-checked cases") {
  SUBCASE("zero propensities freeze the derivative") {
    BoxLattice lat({5});
    std::vector<double> u(6, 0.3), du(6, 1.0);
    auto zero = [](double, std::span<const std::int64_t>, std::span<double> a) {
      a[0] = 0.0;
    };
    hjb_rhs(lat, 0.0, u, zero, {{-1}}, du);
    for (double v : du) CHECK(v == 0.0);
  }
  SUBCASE("constant value function has zero derivative") {
    BoxLattice lat({5});
    std::vector<double> u(6, 0.7), du(6);
    auto one = [](double, std::span<const std::int64_t>, std::span<double> a) {
      a[0] = 2.5;
    };
    hjb_rhs(lat, 0.0, u, one, {{1}}, du);
    for (double v : du) CHECK(v == doctest::Approx(0.0));
  }
  SUBCASE("single reaction, u=1, u_plus=4 gives du/dt = -2") {
    BoxLattice lat({1});
    std::vector<double> u{1.0, 4.0}, du(2);
    auto one = [](double, std::span<const std::int64_t>, std::span<double> a) {
      a[0] = 1.0;
    };
    hjb_rhs(lat, 0.0, u, one, {{1}}, du);
    // at s=0: -2 * 1 * (sqrt(1*4) - 1) = -2
    CHECK(du[0] == doctest::Approx(-2.0));
  }
  SUBCASE("negative values are an integrity failure") {
    BoxLattice lat({1});
    std::vector<double> u{-0.1, 1.0}, du(2);
    auto one = [](double, std::span<const std::int64_t>, std::span<double> a) {
      a[0] = 1.0;
    };
    CHECK_THROWS_AS(hjb_rhs(lat, 0.0, u, one, {{1}}, du), numeric_error);
  }
}

TEST_CASE("zero-propensity system keeps the terminal condition for all t") {
  HJBConfig cfg;
  cfg.s_max = {8};
  auto zero = [](double, std::span<const std::int64_t>, std::span<double> a) {
    a[0] = 0.0;
  };
  const auto g = SigmoidFinal::for_threshold(4.0, 2.0);
  const auto grid = solve_hjb_backward(zero, {{1}}, g, cfg, 1.0);
  for (double t : {0.0, 0.31, 0.77, 1.0}) {
    for (std::int64_t s = 0; s <= 8; ++s) {
      const std::int64_t coords[] = {s};
      const double expect = std::max(g(coords) * g(coords), cfg.u_floor);
      CHECK(grid.value_at(t, coords) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("reaction with zero projected jump contributes nothing") {
  HJBConfig cfg;
  cfg.s_max = {4};
  auto one = [](double, std::span<const std::int64_t>, std::span<double> a) {
    a[0] = 3.0;
  };
  const auto g = SigmoidFinal::for_threshold(2.0, 1.0);
  const auto grid = solve_hjb_backward(one, {{0}}, g, cfg, 1.0);
  for (std::int64_t s = 0; s <= 4; ++s) {
    const std::int64_t coords[] = {s};
    const double expect = g(coords) * g(coords);
    CHECK(grid.value_at(0.0, coords) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("terminal node equals the squared sigmoid exactly") {
  const auto net = pure_death(1.0);
  HJBConfig cfg;
  cfg.s_max = {12};
  const auto g = SigmoidFinal::for_threshold(2.0, 1.0);
  const auto grid = solve_hjb_backward(net_propensity(net), net_jumps(net), g,
                                       cfg, 1.0);
  REQUIRE(!grid.time_nodes().empty());
  CHECK(grid.time_nodes().front() == 1.0);
  CHECK(grid.time_nodes().back() == doctest::Approx(0.0));
  const auto& terminal = grid.values_at_node(0);
  for (std::int64_t s = 0; s <= 12; ++s) {
    const std::int64_t coords[] = {s};
    const double expect = std::max(g(coords) * g(coords), cfg.u_floor);
    CHECK(terminal[static_cast<std::size_t>(s)] == expect);
  }
  CHECK(grid.min_stored_value() >= cfg.u_floor);
}

TEST_CASE("halving tolerances moves the solution less than the coarse claim") {
  const auto net = pure_death(1.0);
  const auto g = SigmoidFinal::for_threshold(2.0, 1.0);
  HJBConfig coarse;
  coarse.s_max = {12};
  coarse.ode_rel_tol = 1e-5;
  coarse.ode_abs_tol = 1e-8;
  HJBConfig fine = coarse;
  fine.ode_rel_tol = 5e-7;
  fine.ode_abs_tol = 5e-10;

  const auto gc = solve_hjb_backward(net_propensity(net), net_jumps(net), g,
                                     coarse, 1.0);
  const auto gf = solve_hjb_backward(net_propensity(net), net_jumps(net), g,
                                     fine, 1.0);
  for (std::int64_t s = 0; s <= 12; ++s) {
    const std::int64_t coords[] = {s};
    const double vc = gc.value_at(0.0, coords);
    const double vf = gf.value_at(0.0, coords);
    CHECK(std::fabs(vc - vf) <= coarse.ode_rel_tol * std::fabs(vf) + 1e-10);
  }
}

TEST_CASE("dp oracle terminal and frozen cases") {
  const auto net = pure_death(1.0);
  const TimeGrid tg{1.0, 8};
  const auto g = Observable::indicator(0, 2.0);
  const auto table = dp_value_oracle(net, g, tg, BoxLattice({6}), 6);
  // n = N: u = g^2 exactly
  for (std::int64_t s = 0; s <= 6; ++s) {
    const std::int64_t coords[] = {s};
    CHECK(table.value(8, coords) == (s > 2 ? 1.0 : 0.0));
  }

  // all-zero propensities: value stays g^2 at every n
  ReactionNetwork frozen(1, {{3}}, {{0}}, {1.0});  // needs 3 copies
  const auto t2 = dp_value_oracle(frozen, g, tg, BoxLattice({2}), 6);
  for (int n = 0; n <= 8; ++n) {
    for (std::int64_t s = 0; s <= 2; ++s) {
      const std::int64_t coords[] = {s};
      CHECK(t2.value(n, coords) == 0.0);
    }
  }
}

TEST_CASE("dp recursion agrees with the backward HJB solve on a death chain") {
  const auto net = pure_death(1.0);
  const double T = 1.0;
  const auto sig = SigmoidFinal::for_threshold(2.0, 1.0);

  // same smoothed terminal condition on both routes
  const auto g_smooth = Observable::function(
      [sig](const State& x) {
        const std::int64_t coords[] = {x[0]};
        return sig(coords);
      },
      "sigmoid-2.5");

  const TimeGrid tg{T, 256};  // dt = 2^-8
  const BoxLattice box({12});
  const auto dp = dp_value_oracle(net, g_smooth, tg, box, 8);
  CHECK(dp.max_tail_rel < 1e-6);

  HJBConfig cfg;
  cfg.s_max = {12};
  const auto hjb = solve_hjb_backward(net_propensity(net), net_jumps(net), sig,
                                      cfg, T);

  for (std::int64_t s = 0; s <= 12; ++s) {
    const std::int64_t coords[] = {s};
    const double v_dp = dp.value(0, coords);
    const double v_hjb = hjb.value_at(0.0, coords);
    CHECK(std::fabs(v_dp - v_hjb) / v_hjb < 0.05);
  }
}

TEST_CASE("optimal controls from value-function ratios") {
  const auto net = pure_death(2.0);  // a(x) = 2x, nu = -1

  SUBCASE("state-constant grid recovers crude sampling bitwise") {
    auto grid = std::make_shared<ValueFunctionGrid>(BoxLattice({30}), 1e-30);
    grid->append_node(1.0, std::vector<double>(31, 0.5));
    grid->append_node(0.0, std::vector<double>(31, 0.5));
    const auto policy = optimal_controls(grid, net, std::nullopt);

    const TimeGrid tg{1.0, 16};
    RngStream r1(66, 5), r2(66, 5);
    const auto plain = tau_leap_final(net, State{20}, tg, r1);
    const auto ws = is_tau_leap_path(net, State{20}, tg, policy, r2);
    CHECK(ws.final_state == plain);
    CHECK(ws.likelihood == 1.0);
  }

  SUBCASE("fourfold value ratio doubles the control") {
    // u(s) = 4^s so u(s-1)/u(s) = 1/4 for the death jump: delta = a/2
    auto grid = std::make_shared<ValueFunctionGrid>(BoxLattice({10}), 1e-30);
    std::vector<double> vals(11);
    for (int s = 0; s <= 10; ++s) vals[static_cast<std::size_t>(s)] = std::pow(4.0, s);
    grid->append_node(1.0, vals);
    grid->append_node(0.0, vals);
    const auto policy = optimal_controls(grid, net, std::nullopt);

    const State x{5};
    std::vector<double> a(1), delta(1);
    net.propensities(x, a);
    policy.evaluate(0.5, x, a, delta);
    CHECK(delta[0] == doctest::Approx(0.5 * a[0]).epsilon(1e-12));

    // birth version: u(s+1)/u(s) = 4 gives delta = 2a
    ReactionNetwork birth(1, {{0}}, {{1}}, {3.0});
    const auto policy_b = optimal_controls(grid, birth, std::nullopt);
    birth.propensities(x, a);
    policy_b.evaluate(0.5, x, a, delta);
    CHECK(delta[0] == doctest::Approx(2.0 * a[0]).epsilon(1e-12));
  }

  SUBCASE("zero propensity forces zero control") {
    auto grid = std::make_shared<ValueFunctionGrid>(BoxLattice({10}), 1e-30);
    grid->append_node(1.0, std::vector<double>(11, 1.0));
    grid->append_node(0.0, std::vector<double>(11, 1.0));
    const auto policy = optimal_controls(grid, net, std::nullopt);
    const State x{0};  // a(0) = 0
    std::vector<double> a(1), delta(1);
    net.propensities(x, a);
    policy.evaluate(0.0, x, a, delta);
    CHECK(delta[0] == 0.0);
  }
}

TEST_CASE("value grid serialization round trip") {
  const auto net = pure_death(1.0);
  HJBConfig cfg;
  cfg.s_max = {12};
  const auto g = SigmoidFinal::for_threshold(2.0, 1.0);
  const auto grid = solve_hjb_backward(net_propensity(net), net_jumps(net), g,
                                       cfg, 1.0);

  std::stringstream ss;
  grid.save(ss);
  const auto loaded = ValueFunctionGrid::load(ss);

  CHECK(loaded.time_nodes() == grid.time_nodes());
  CHECK(loaded.content_hash() == grid.content_hash());
  const std::int64_t coords[] = {4};
  CHECK(loaded.value_at(0.37, coords) == grid.value_at(0.37, coords));
}
