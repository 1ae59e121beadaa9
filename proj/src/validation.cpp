#include "srn/validation.hpp"

#include <cmath>
#include <sstream>

#include "srn/dp_oracle.hpp"
#include "srn/hjb.hpp"
#include "srn/mp_model.hpp"

namespace srn {

namespace {

ReactionNetwork linear_death() {
  return ReactionNetwork(1, {{1}}, {{0}}, {1.0}, {"X"});
}

double binomial_tail_above(int n, int k, double p) {
  double tail = 0.0;
  for (int j = k + 1; j <= n; ++j) {
    const double logc = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                        std::lgamma(n - j + 1.0);
    tail += std::exp(logc + j * std::log(p) + (n - j) * std::log1p(-p));
  }
  return tail;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

}  // namespace

CheckResult check_ssa_binomial_tail(std::uint64_t seed, unsigned threads) {
  // linear death theta=1, x0=20, T=1: X(T) ~ Binomial(20, e^-1);
  // estimate P(X(T) > 10) by exact SSA with 1e5 paths
  const auto net = linear_death();
  const double p_true = binomial_tail_above(20, 10, std::exp(-1.0));
  const auto g = Observable::indicator(0, 10.0);
  const std::uint64_t M = 100000;

  const auto r = mc_estimate(
      M,
      [&](std::uint64_t m) {
        RngStream rng(seed, substream_id(StreamDomain::kValidation, 1, m));
        McSample s;
        s.value = g(ssa_final_state(net, State{20}, 1.0, rng));
        return s;
      },
      0.95, "ssa-binomial", threads);

  const double se = std::sqrt(r.sample_variance / static_cast<double>(M));
  const double diff = std::fabs(r.mean - p_true);
  CheckResult res;
  res.name = "ssa-binomial-tail";
  res.pass = diff <= 3.0 * se;
  res.detail = "|" + fmt(r.mean) + " - " + fmt(p_true) + "| = " + fmt(diff) +
               " vs 3SE = " + fmt(3.0 * se);
  return res;
}

CheckResult check_tl_bias_ordering(std::uint64_t seed, unsigned threads) {
  // |bias| at dt = 2^-4 must exceed |bias| at dt = 2^-6 with 1e6 paths each
  const auto net = linear_death();
  const double p_true = binomial_tail_above(20, 10, std::exp(-1.0));
  const auto g = Observable::indicator(0, 10.0);
  const std::uint64_t M = 1000000;

  double bias[2];
  double se[2];
  const int steps[2] = {16, 64};
  for (int i = 0; i < 2; ++i) {
    const auto r = crude_tl_estimate(net, State{20}, TimeGrid{1.0, steps[i]}, g,
                                     M, seed, StreamDomain::kValidation,
                                     static_cast<std::uint64_t>(10 + i), threads);
    bias[i] = r.mean - p_true;
    se[i] = std::sqrt(r.sample_variance / static_cast<double>(M));
  }
  CheckResult res;
  res.name = "tl-bias-ordering";
  res.pass = std::fabs(bias[0]) > std::fabs(bias[1]) + 3.0 * (se[0] + se[1]);
  res.detail = "|bias(2^-4)| = " + fmt(std::fabs(bias[0])) +
               ", |bias(2^-6)| = " + fmt(std::fabs(bias[1]));
  return res;
}

CheckResult check_likelihood_identity(std::uint64_t seed) {
  // crude policy: every path weight exactly 1 and final states bitwise equal
  const auto mm = michaelis_menten_preset();
  const TimeGrid grid{1.0, 16};
  const auto policy = ControlPolicy::crude();

  bool ok = true;
  for (std::uint64_t m = 0; m < 1000 && ok; ++m) {
    RngStream r1(seed, substream_id(StreamDomain::kValidation, 2, m));
    RngStream r2(seed, substream_id(StreamDomain::kValidation, 2, m));
    const auto plain = tau_leap_final(mm.net, mm.x0, grid, r1);
    const auto ws = is_tau_leap_path(mm.net, mm.x0, grid, policy, r2);
    ok = ws.likelihood == 1.0 && ws.final_state == plain;
  }

  // and the aggregated estimates match bitwise for matched seeds
  const auto g = Observable::indicator(2, 5.0);
  const auto a = crude_tl_estimate(mm.net, mm.x0, grid, g, 5000, seed,
                                   StreamDomain::kValidation, 3, 1);
  const auto b = is_mc_estimate(mm.net, mm.x0, grid, policy, g, 5000, seed,
                                StreamDomain::kValidation, 3, 1);
  ok = ok && a.mean == b.mean && a.sample_variance == b.sample_variance;

  CheckResult res;
  res.name = "likelihood-identity";
  res.pass = ok;
  res.detail = ok ? "L = 1 on every path; estimates bitwise equal"
                  : "mismatch detected";
  return res;
}

CheckResult check_unbiasedness(std::uint64_t seed, unsigned threads) {
  // Example 5.1 at dt = 2^-4 with the suboptimal admissible tilt delta = 2a
  // against crude TL for the non-rare observable C(T) > 5, 1e5 paths each
  const auto mm = michaelis_menten_preset();
  const TimeGrid grid{1.0, 16};
  const auto g = Observable::indicator(2, 5.0);
  const std::uint64_t M = 100000;

  const auto crude = crude_tl_estimate(mm.net, mm.x0, grid, g, M, seed,
                                       StreamDomain::kCrudeBaseline, 20, threads);
  const auto is = is_mc_estimate(mm.net, mm.x0, grid,
                                 ControlPolicy::scaled_crude(2.0), g, M, seed,
                                 StreamDomain::kForward, 20, threads);

  const double se = std::sqrt(crude.sample_variance / static_cast<double>(M) +
                              is.sample_variance / static_cast<double>(M));
  const double diff = std::fabs(crude.mean - is.mean);
  CheckResult res;
  res.name = "unbiasedness";
  res.pass = diff <= 3.0 * se;
  res.detail = "|crude " + fmt(crude.mean) + " - is " + fmt(is.mean) +
               "| = " + fmt(diff) + " vs 3SE = " + fmt(3.0 * se);
  return res;
}

CheckResult check_orthonormality(std::uint64_t seed, unsigned threads) {
  // Example 5.1 fit ensemble: M = 1e4, dt = 2^-4, Lambda = {0,1,2}^2
  const auto mm = michaelis_menten_preset();
  const TimeGrid grid{1.0, 16};
  const auto proj = Projection::canonical(4, 2);
  const auto paths = PathEnsemble::generate(mm.net, mm.x0, grid, 10000, seed,
                                            StreamDomain::kRegressionFit, threads);
  const auto ortho = empirical_gram_schmidt(paths, BasisSpec::tensor(2, 2), proj);

  const std::size_t P = ortho.size();
  const std::size_t rows = static_cast<std::size_t>(paths.M) *
                           static_cast<std::size_t>(grid.N);
  std::vector<double> gram(P * P, 0.0);
  std::vector<double> phi(P);
  for (int m = 0; m < paths.M; ++m) {
    for (int n = 0; n < grid.N; ++n) {
      const auto x = paths.state(m, n);
      ortho.eval(grid.t(n), static_cast<double>(x[2]), phi);
      for (std::size_t p = 0; p < P; ++p)
        for (std::size_t q = 0; q < P; ++q) gram[p * P + q] += phi[p] * phi[q];
    }
  }

  // Gram within 1e-8 of I; D^T D = (T/dt) M I within relative 1e-8
  const double scale = static_cast<double>(rows);  // (T/dt) * M
  double worst_gram = 0.0, worst_normal = 0.0;
  for (std::size_t p = 0; p < P; ++p) {
    for (std::size_t q = 0; q < P; ++q) {
      const double target = p == q ? 1.0 : 0.0;
      worst_gram = std::max(worst_gram, std::fabs(gram[p * P + q] / scale - target));
      worst_normal = std::max(
          worst_normal, std::fabs(gram[p * P + q] - target * scale) / scale);
    }
  }
  CheckResult res;
  res.name = "orthonormality";
  res.pass = worst_gram < 1e-8 && worst_normal < 1e-8 && ortho.dropped == 0;
  res.detail = "max |Gram - I| = " + fmt(worst_gram) +
               ", max |DtD/(MN) - I| = " + fmt(worst_normal);
  return res;
}

CheckResult check_dp_hjb_agreement(std::uint64_t) {
  // 1-d birth-death, s_max = 30, dp oracle at dt = 2^-10 with p_max = 8
  ReactionNetwork bd(1, {{0}, {1}}, {{1}, {0}}, {2.0, 0.3}, {"X"});
  const auto sig = SigmoidFinal::for_threshold(10.0, 1.0);
  const auto g = Observable::function(
      [sig](const State& x) {
        const std::int64_t c[] = {x[0]};
        return sig(c);
      },
      "sigmoid(10.5, slope 1)");

  const auto dp = dp_value_oracle(bd, g, TimeGrid{1.0, 1024}, BoxLattice({30}), 8);

  HJBConfig cfg;
  cfg.s_max = {30};
  auto prop = [&bd](double, std::span<const std::int64_t> s, std::span<double> a) {
    State x(s.begin(), s.end());
    bd.propensities(x, a);
  };
  const auto hjb = solve_hjb_backward(prop, {{1}, {-1}}, sig, cfg, 1.0);

  double worst = 0.0;
  for (std::int64_t s = 0; s <= 30; ++s) {
    const std::int64_t c[] = {s};
    const double vd = dp.value(0, c);
    const double vh = hjb.value_at(0.0, c);
    worst = std::max(worst, std::fabs(vd - vh) / vh);
  }
  CheckResult res;
  res.name = "dp-hjb";
  res.pass = worst <= 0.05 && !dp.tail_warning;
  res.detail = "max per-state rel diff = " + fmt(worst) +
               " (tail bound " + fmt(dp.max_tail_rel) + ")";
  return res;
}

std::vector<CheckResult> run_validation_suite(const std::string& suite,
                                              std::uint64_t seed,
                                              unsigned threads) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "oracles") {
    out.push_back(check_ssa_binomial_tail(seed, threads));
    out.push_back(check_tl_bias_ordering(seed, threads));
    out.push_back(check_dp_hjb_agreement(seed));
  }
  if (all || suite == "orthonormality") {
    out.push_back(check_orthonormality(seed, threads));
  }
  if (all || suite == "unbiasedness") {
    out.push_back(check_likelihood_identity(seed));
    out.push_back(check_unbiasedness(seed, threads));
  }
  if (out.empty())
    throw config_error("validate: unknown suite '" + suite +
                       "' (oracles | orthonormality | unbiasedness | all)");
  return out;
}

}  // namespace srn
