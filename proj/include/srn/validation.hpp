#pragma once

#include <string>
#include <vector>

#include <cstdint>

namespace srn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Named self-checks with pinned parameters, runnable from the CLI.
//
//   ssa-binomial-tail    exact SSA vs the analytic linear-death law
//   tl-bias-ordering     tau-leap weak error decreases with dt (1e6 paths)
//   likelihood-identity  crude policy: L = 1 and bitwise-equal estimates
//   unbiasedness         IS under delta = 2a matches crude at matched dt
//   orthonormality       Gram and normal-matrix identities on the fit ensemble
//   dp-hjb               dynamic-programming oracle vs backward HJB solve
CheckResult check_ssa_binomial_tail(std::uint64_t seed, unsigned threads);
CheckResult check_tl_bias_ordering(std::uint64_t seed, unsigned threads);
CheckResult check_likelihood_identity(std::uint64_t seed);
CheckResult check_unbiasedness(std::uint64_t seed, unsigned threads);
CheckResult check_orthonormality(std::uint64_t seed, unsigned threads);
CheckResult check_dp_hjb_agreement(std::uint64_t seed);

// Suites: "oracles" (ssa + bias + dp-hjb), "orthonormality",
// "unbiasedness" (likelihood identity + cross-check), "all".
std::vector<CheckResult> run_validation_suite(const std::string& suite,
                                              std::uint64_t seed,
                                              unsigned threads);

}  // namespace srn
