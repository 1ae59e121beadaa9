#include "srn/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "srn/ode.hpp"

namespace srn {

ValueFunctionGrid::ValueFunctionGrid(BoxLattice lattice, double u_floor)
    : lattice_(std::move(lattice)), u_floor_(u_floor) {
  if (u_floor_ <= 0.0) throw config_error("value grid: u_floor must be positive");
}

void ValueFunctionGrid::append_node(double t, std::vector<double> values) {
  if (static_cast<std::int64_t>(values.size()) != lattice_.size())
    throw config_error("value grid: node size mismatch");
  if (!times_.empty() && t >= times_.back())
    throw config_error("value grid: time nodes must decrease");
  times_.push_back(t);
  values_.push_back(std::move(values));
}

double ValueFunctionGrid::value(double t, std::int64_t state_index) const {
  // times_ descend from T to 0; clamp t to the covered range
  if (times_.empty()) throw numeric_error("value grid: empty");
  const std::size_t s = static_cast<std::size_t>(state_index);
  if (t >= times_.front()) return values_.front()[s];
  if (t <= times_.back()) return values_.back()[s];
  // binary search for the bracketing pair (descending order)
  std::size_t lo = 0, hi = times_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (times_[mid] > t)
      lo = mid;
    else
      hi = mid;
  }
  const double t0 = times_[lo], t1 = times_[hi];
  const double w = (t0 - t) / (t0 - t1);
  const double v = (1.0 - w) * values_[lo][s] + w * values_[hi][s];
  return std::max(v, u_floor_);
}

double ValueFunctionGrid::value_at(double t,
                                   std::span<const std::int64_t> coords) const {
  return value(t, lattice_.clamped_index(coords));
}

double ValueFunctionGrid::min_stored_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& node : values_)
    for (double v : node) m = std::min(m, v);
  return m;
}

void hjb_rhs(const BoxLattice& lattice, double t,
             const std::vector<double>& values,
             const LatticePropensity& propensities,
             const std::vector<std::vector<std::int64_t>>& nu_bar,
             std::vector<double>& dudt) {
  const std::int64_t n = lattice.size();
  const std::size_t J = nu_bar.size();
  const int dim = lattice.dim();

  std::vector<std::int64_t> coords(static_cast<std::size_t>(dim));
  std::vector<double> a(J);

  for (std::int64_t s = 0; s < n; ++s) {
    const double us = values[static_cast<std::size_t>(s)];
    if (us < 0.0)
      throw numeric_error("hjb_rhs: negative value encountered");
    lattice.coords(s, coords);
    propensities(t, coords, a);
    double acc = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
      if (a[j] == 0.0) continue;
      const std::int64_t nb = lattice.clamped_neighbor(coords, nu_bar[j]);
      if (nb == s) continue;  // nu contributes nothing
      const double un = values[static_cast<std::size_t>(nb)];
      acc += a[j] * (std::sqrt(us * un) - us);
    }
    dudt[static_cast<std::size_t>(s)] = -2.0 * acc;
  }
}

ValueFunctionGrid solve_hjb_backward(const LatticePropensity& propensities,
                                     const std::vector<std::vector<std::int64_t>>& nu_bar,
                                     const SigmoidFinal& final_condition,
                                     const HJBConfig& cfg, double T) {
  BoxLattice lattice(cfg.s_max);
  ValueFunctionGrid grid(lattice, cfg.u_floor);

  const std::int64_t n = lattice.size();
  std::vector<double> u(static_cast<std::size_t>(n));
  std::vector<std::int64_t> coords(static_cast<std::size_t>(lattice.dim()));
  for (std::int64_t s = 0; s < n; ++s) {
    lattice.coords(s, coords);
    const double g = final_condition(coords);
    u[static_cast<std::size_t>(s)] = std::max(g * g, cfg.u_floor);
  }

  OdeOptions opts;
  opts.rel_tol = cfg.ode_rel_tol;
  opts.abs_tol = cfg.ode_abs_tol;
  opts.max_step = cfg.max_step > 0.0 ? cfg.max_step : T / 64.0;

  // trial stages of the embedded pair may undershoot; the RHS contract
  // requires floored values
  std::vector<double> y_floored(static_cast<std::size_t>(n));
  auto rhs = [&](double t, const std::vector<double>& y,
                 std::vector<double>& dydt) {
    for (std::size_t i = 0; i < y.size(); ++i)
      y_floored[i] = std::max(y[i], cfg.u_floor);
    hjb_rhs(lattice, t, y_floored, propensities, nu_bar, dydt);
  };
  auto floor_values = [&](std::vector<double>& y) {
    for (double& v : y) v = std::max(v, cfg.u_floor);
  };
  auto record = [&](double t, const std::vector<double>& y) {
    grid.append_node(t, y);
  };

  integrate_rk45(rhs, u, T, 0.0, opts, floor_values, record);
  return grid;
}

ControlPolicy optimal_controls(std::shared_ptr<const ValueFunctionGrid> grid,
                               const ReactionNetwork& net,
                               std::optional<Projection> projection,
                               double delta_floor) {
  const int J = net.reaction_count();

  if (!projection) {
    if (grid->lattice().dim() != net.species_count())
      throw config_error("optimal_controls: lattice dim != species count");
    // per-reaction full-dimensional jumps
    auto jumps = std::make_shared<std::vector<std::vector<std::int64_t>>>();
    for (int j = 0; j < J; ++j) {
      const auto row = net.stoich_row(j);
      jumps->emplace_back(row.begin(), row.end());
    }
    return ControlPolicy(
        "hjb-full",
        [grid, jumps, delta_floor](double t, const State& x,
                                   std::span<const double> a,
                                   std::span<double> delta) {
          const auto& lattice = grid->lattice();
          const std::int64_t here = lattice.clamped_index(x);
          const double u_here = grid->value(t, here);
          for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[j] == 0.0) {
              delta[j] = 0.0;
              continue;
            }
            const std::int64_t nb = lattice.clamped_neighbor(x, (*jumps)[j]);
            const double u_nb = grid->value(t, nb);
            delta[j] = std::max(a[j] * std::sqrt(u_nb / u_here), delta_floor);
          }
        });
  }

  // value function of the reduced system queried through the projection
  auto proj = std::make_shared<Projection>(*projection);
  if (grid->lattice().dim() != proj->reduced_dim())
    throw config_error("optimal_controls: lattice dim != projection dim");
  auto jumps = std::make_shared<std::vector<std::vector<std::int64_t>>>();
  for (int j = 0; j < J; ++j) {
    const auto nu = proj->apply_stoich(net.stoich_row(j));
    std::vector<std::int64_t> jump(nu.size());
    for (std::size_t i = 0; i < nu.size(); ++i)
      jump[i] = static_cast<std::int64_t>(std::llround(nu[i]));
    jumps->push_back(std::move(jump));
  }
  return ControlPolicy(
      "mp-mapped",
      [grid, proj, jumps, delta_floor](double t, const State& x,
                                       std::span<const double> a,
                                       std::span<double> delta) {
        const auto& lattice = grid->lattice();
        const auto s = proj->apply_state_lattice(x);
        const std::int64_t here = lattice.clamped_index(s);
        const double u_here = grid->value(t, here);
        for (std::size_t j = 0; j < a.size(); ++j) {
          if (a[j] == 0.0) {
            delta[j] = 0.0;
            continue;
          }
          const std::int64_t nb = lattice.clamped_neighbor(s, (*jumps)[j]);
          const double u_nb = grid->value(t, nb);
          delta[j] = std::max(a[j] * std::sqrt(u_nb / u_here), delta_floor);
        }
      });
}

namespace {

void write_double_row(std::ostream& os, std::span<const double> row) {
  char buf[32];
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
    os << buf << (i + 1 == row.size() ? "" : " ");
  }
  os << "\n";
}

}  // namespace

void ValueFunctionGrid::save(std::ostream& os) const {
  os << "srn-value-grid v1\n";
  os << "dims " << lattice_.dim();
  for (int i = 0; i < lattice_.dim(); ++i) os << " " << lattice_.s_max(i);
  os << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", u_floor_);
  os << "floor " << buf << "\n";
  os << "nodes " << times_.size() << " " << lattice_.size() << "\n";
  write_double_row(os, times_);
  for (const auto& node : values_) write_double_row(os, node);
}

ValueFunctionGrid ValueFunctionGrid::load(std::istream& is) {
  std::string magic, version, key;
  is >> magic >> version;
  if (magic != "srn-value-grid" || version != "v1")
    throw config_error("value grid: unrecognized file header");
  int dim = 0;
  is >> key >> dim;
  if (key != "dims" || dim < 1) throw config_error("value grid: bad dims");
  std::vector<std::int64_t> s_max(static_cast<std::size_t>(dim));
  for (auto& s : s_max) is >> s;
  double floor_value = 0.0;
  is >> key >> floor_value;
  if (key != "floor") throw config_error("value grid: bad floor line");
  std::size_t n_nodes = 0;
  std::int64_t n_states = 0;
  is >> key >> n_nodes >> n_states;
  if (key != "nodes") throw config_error("value grid: bad nodes line");

  ValueFunctionGrid grid(BoxLattice(std::move(s_max)), floor_value);
  if (grid.lattice_.size() != n_states)
    throw config_error("value grid: state count mismatch");
  std::vector<double> times(n_nodes);
  for (auto& t : times) is >> t;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    std::vector<double> node(static_cast<std::size_t>(n_states));
    for (auto& v : node) is >> v;
    grid.append_node(times[k], std::move(node));
  }
  if (!is) throw config_error("value grid: truncated file");
  return grid;
}

std::uint64_t ValueFunctionGrid::content_hash() const {
  // FNV-1a over the raw bytes of times and values
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  mix(times_.data(), times_.size() * sizeof(double));
  for (const auto& node : values_) mix(node.data(), node.size() * sizeof(double));
  return h;
}

}  // namespace srn
