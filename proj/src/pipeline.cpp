#include "srn/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "srn/parallel.hpp"

namespace srn {

namespace {

// pilot tau-leap sweep: largest projected (or per-species) value visited
std::int64_t pilot_max_projected(const ReactionNetwork& net, const State& x0,
                                 const TimeGrid& grid, const Projection& proj,
                                 int paths, std::uint64_t seed) {
  std::int64_t best = 0;
  for (int m = 0; m < paths; ++m) {
    RngStream rng(seed, substream_id(StreamDomain::kPilot, 0,
                                     static_cast<std::uint64_t>(m)));
    tau_leap_scan(net, x0, grid, rng, [&](int, const State& x) {
      const auto s = proj.apply_state_lattice(x);
      for (auto v : s) best = std::max(best, v);
    });
  }
  return best;
}

LatticePropensity surrogate_propensity(std::shared_ptr<const MPModel> model) {
  return [model](double t, std::span<const std::int64_t> s, std::span<double> a) {
    double sd[8];
    for (std::size_t i = 0; i < s.size(); ++i) sd[i] = static_cast<double>(s[i]);
    model->propensities(t, {sd, s.size()}, a);
  };
}

std::int64_t resolve_s_max(const PipelineConfig& cfg, const Projection& proj) {
  if (cfg.s_max > 0) return cfg.s_max;
  const TimeGrid pilot_grid{cfg.system.T,
                            std::max(1, static_cast<int>(std::lround(
                                            cfg.system.T / cfg.fit_dt)))};
  const std::int64_t seen = pilot_max_projected(
      cfg.system.net, cfg.system.x0, pilot_grid, proj, cfg.pilot_paths, cfg.seed);
  const auto gamma = static_cast<std::int64_t>(std::ceil(cfg.system.threshold));
  return 2 * std::max(gamma, seen);
}

TimeGrid grid_for_dt(double T, double dt) {
  const int N = static_cast<int>(std::lround(T / dt));
  if (N < 1 || std::fabs(static_cast<double>(N) * dt - T) > 1e-9 * T)
    throw config_error("forward dt must divide the final time");
  return TimeGrid{T, N};
}

}  // namespace

ControlPolicy make_policy(const PipelineConfig& cfg,
                          std::shared_ptr<const MPModel> model,
                          std::shared_ptr<const ValueFunctionGrid> grid) {
  if (cfg.policy == "crude") return ControlPolicy::crude();
  if (cfg.policy == "mp-mapped") {
    if (!model || !grid) throw config_error("mp-mapped policy needs model and grid");
    return optimal_controls(grid, cfg.system.net, model->projection(),
                            cfg.delta_floor);
  }
  if (cfg.policy == "mp-alternative") {
    if (!model || !grid)
      throw config_error("mp-alternative policy needs model and grid");
    return alternative_controls(grid, model, cfg.delta_floor);
  }
  if (cfg.policy == "hjb-full") {
    if (!grid) throw config_error("hjb-full policy needs a solved grid");
    return optimal_controls(grid, cfg.system.net, std::nullopt, cfg.delta_floor);
  }
  throw config_error("unknown policy '" + cfg.policy + "'");
}

namespace {

// failures abort with the stage name attached
template <typename F>
auto named_stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const config_error& e) {
    throw config_error(std::string("[stage: ") + name + "] " + e.what());
  } catch (const numeric_error& e) {
    throw numeric_error(std::string("[stage: ") + name + "] " + e.what());
  } catch (const std::exception& e) {
    throw numeric_error(std::string("[stage: ") + name + "] " + e.what());
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg,
                            std::shared_ptr<const MPModel> reuse_model,
                            std::shared_ptr<const ValueFunctionGrid> reuse_grid) {
  const auto& sys = cfg.system;
  const Observable g = Observable::indicator(sys.observable_species, sys.threshold);

  PipelineResult result;
  result.report.system = sys.name;
  result.report.policy = cfg.policy;
  result.report.seed = cfg.seed;

  std::shared_ptr<const MPModel> model = reuse_model;
  std::shared_ptr<const ValueFunctionGrid> grid = reuse_grid;

  if (cfg.policy == "mp-mapped" || cfg.policy == "mp-alternative") {
    const auto proj =
        Projection::canonical(sys.net.species_count(), sys.observable_species);
    if (!model) {
      // offline stage, computed once per experiment
      model = named_stage("mp-fit", [&] {
        const TimeGrid fit_grid = grid_for_dt(sys.T, cfg.fit_dt);
        const auto ensemble =
            PathEnsemble::generate(sys.net, sys.x0, fit_grid, cfg.fit_paths,
                                   cfg.seed, StreamDomain::kRegressionFit,
                                   cfg.threads);
        auto fitted = fit_mp(
            ensemble, BasisSpec::tensor(cfg.basis_t_degree, cfg.basis_s_degree),
            proj, sys.net);
        return std::make_shared<const MPModel>(std::move(fitted));
      });
    }
    if (!grid) {
      grid = named_stage("hjb-solve", [&] {
        HJBConfig hjb;
        hjb.s_max = {resolve_s_max(cfg, model->projection())};
        hjb.u_floor = cfg.u_floor;
        hjb.ode_rel_tol = cfg.ode_rel_tol;
        hjb.ode_abs_tol = cfg.ode_abs_tol;
        hjb.max_step = cfg.ode_max_step;
        if (hjb.s_max[0] < static_cast<std::int64_t>(std::ceil(sys.threshold)))
          throw config_error("hjb truncation below the observable threshold");
        std::vector<std::vector<std::int64_t>> nu_bar;
        for (int j = 0; j < model->reaction_count(); ++j)
          nu_bar.push_back(model->nu_bar(j));
        const double mid = cfg.sigmoid_midpoint > 0.0 ? cfg.sigmoid_midpoint
                                                      : sys.threshold + 0.5;
        const SigmoidFinal final_cond{-cfg.sigmoid_slope * mid,
                                      cfg.sigmoid_slope, 0};
        return std::make_shared<const ValueFunctionGrid>(solve_hjb_backward(
            surrogate_propensity(model), nu_bar, final_cond, hjb, sys.T));
      });
    }
  } else if (cfg.policy == "hjb-full") {
    if (sys.net.species_count() > 2)
      throw config_error(
          "hjb-full: full-dimensional solves are supported for d <= 2 only");
    if (!grid) {
      grid = named_stage("hjb-solve", [&] {
        HJBConfig hjb;
        const auto ident = Projection::identity(sys.net.species_count());
        const std::int64_t cap = resolve_s_max(cfg, ident);
        hjb.s_max.assign(static_cast<std::size_t>(sys.net.species_count()), cap);
        hjb.u_floor = cfg.u_floor;
        hjb.ode_rel_tol = cfg.ode_rel_tol;
        hjb.ode_abs_tol = cfg.ode_abs_tol;
        hjb.max_step = cfg.ode_max_step;
        std::vector<std::vector<std::int64_t>> nu;
        for (int j = 0; j < sys.net.reaction_count(); ++j) {
          const auto row = sys.net.stoich_row(j);
          nu.emplace_back(row.begin(), row.end());
        }
        const double mid = cfg.sigmoid_midpoint > 0.0 ? cfg.sigmoid_midpoint
                                                      : sys.threshold + 0.5;
        const SigmoidFinal final_cond{-cfg.sigmoid_slope * mid,
                                      cfg.sigmoid_slope, sys.observable_species};
        auto prop = [net = &sys.net](double, std::span<const std::int64_t> s,
                                     std::span<double> a) {
          State x(s.begin(), s.end());
          net->propensities(x, a);
        };
        return std::make_shared<const ValueFunctionGrid>(
            solve_hjb_backward(prop, nu, final_cond, hjb, sys.T));
      });
    }
  }

  result.model = model;
  result.grid = grid;
  result.report.model_hash = model ? model->content_hash() : 0;
  result.report.grid_hash = grid ? grid->content_hash() : 0;
  result.report.s_max = grid ? grid->lattice().s_max(0) : 0;

  const ControlPolicy policy = make_policy(cfg, model, grid);

  for (std::size_t di = 0; di < cfg.forward_dts.size(); ++di) {
    const TimeGrid fwd = named_stage("forward", [&] {
      return grid_for_dt(sys.T, cfg.forward_dts[di]);
    });
    ComparisonRow row;
    row.dt = fwd.dt();
    row.steps = fwd.N;
    row.is_report = named_stage("forward", [&] {
      return is_mc_estimate(sys.net, sys.x0, fwd, policy, g, cfg.forward_paths,
                            cfg.seed, StreamDomain::kForward, di, cfg.threads);
    });
    if (cfg.crude_baseline) {
      row.crude_report = named_stage("crude-baseline", [&] {
        return crude_tl_estimate(sys.net, sys.x0, fwd, g, cfg.forward_paths,
                                 cfg.seed, StreamDomain::kCrudeBaseline, di,
                                 cfg.threads);
      });
    }
    const double p = row.is_report.mean;
    if (p > 0.0 && p < 1.0) {
      row.crude_proxy_squared_cv = bernoulli_squared_cv(p);
      row.crude_proxy_kurtosis = bernoulli_kurtosis(p);
      row.variance_reduction = row.is_report.squared_cv > 0.0
                                   ? row.crude_proxy_squared_cv /
                                         row.is_report.squared_cv
                                   : 0.0;
    }
    result.report.rows.push_back(std::move(row));
  }

  kurtosis_guard(result.report);
  return result;
}

DistributionMatchReport distribution_match_report(const MPModel& model,
                                                  const ReactionNetwork& net,
                                                  const State& x0,
                                                  const TimeGrid& grid,
                                                  std::uint64_t paths,
                                                  std::uint64_t seed,
                                                  unsigned threads) {
  const auto& proj = model.projection();
  if (proj.reduced_dim() != 1)
    throw config_error("distribution match: expects a one-dimensional projection");
  const auto s0 = proj.apply_state_lattice(x0);

  std::vector<std::int64_t> full(paths), surrogate(paths);
  parallel_chunks(paths, kPathChunk, threads,
                  [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t m = begin; m < end; ++m) {
                      RngStream r1(seed,
                                   substream_id(StreamDomain::kDistributionFull, 0, m));
                      const auto xT = tau_leap_final(net, x0, grid, r1);
                      full[m] = proj.apply_state_lattice(xT)[0];
                      RngStream r2(seed, substream_id(
                                             StreamDomain::kDistributionSurrogate, 0, m));
                      surrogate[m] = mp_process_simulate(model, s0, grid, r2)[0];
                    }
                  });

  std::int64_t lo = full[0], hi = full[0];
  for (auto v : full) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (auto v : surrogate) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  DistributionMatchReport rep;
  rep.bin_lo = lo;
  rep.paths = paths;
  const std::size_t bins = static_cast<std::size_t>(hi - lo + 1);
  rep.full_freq.assign(bins, 0.0);
  rep.surrogate_freq.assign(bins, 0.0);
  const double w = 1.0 / static_cast<double>(paths);
  for (auto v : full) rep.full_freq[static_cast<std::size_t>(v - lo)] += w;
  for (auto v : surrogate)
    rep.surrogate_freq[static_cast<std::size_t>(v - lo)] += w;
  double tv = 0.0;
  for (std::size_t b = 0; b < bins; ++b)
    tv += std::fabs(rep.full_freq[b] - rep.surrogate_freq[b]);
  rep.total_variation = 0.5 * tv;
  return rep;
}

int kurtosis_guard(ComparisonReport& report) {
  int flagged = 0;
  for (auto& row : report.rows) {
    const double k = row.is_report.kurtosis;
    const bool degenerate = !std::isfinite(k);
    const bool above_proxy =
        row.crude_proxy_kurtosis > 0.0 && k > row.crude_proxy_kurtosis;
    row.kurtosis_flagged = degenerate || above_proxy;
    if (row.kurtosis_flagged) ++flagged;
  }
  return flagged;
}

}  // namespace srn
