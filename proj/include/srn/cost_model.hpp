#pragma once

#include <cstdint>
#include <optional>

#include "srn/simulate.hpp"

namespace srn {

// Unit operation costs.  Negative entries select the derived defaults:
// c_polynomial = |Lambda|, c_inner from the inner-product cost formula.
struct UnitCosts {
  double c_poisson = 1.0;
  double c_propensity = 1.0;
  double c_polynomial = -1.0;
  double c_inner = -1.0;
  double c_likelihood = 1.0;
  double c_control = 1.0;
};

struct CostModelParams {
  std::size_t lambda_size = 9;
  double T = 1.0;
  double dt = 0.0625;
  std::uint64_t M = 10000;       // regression paths
  int J = 1;
  int J_mp = 1;
  int d = 1;
  std::uint64_t M_fw = 0;        // forward paths (0: skip forward term)
  UnitCosts unit;
};

// Operation-count model of the offline stage and the IS forward run:
//   W_MP = M W_TL + W_GS + W_L2,  W_forward = M_fw (T/dt)(J C_Poi + C_lik + |J_MP| C_delta).
struct CostReport {
  double c_pol = 0.0;
  double c_inner = 0.0;
  double w_tl_per_path = 0.0;
  double w_tl_total = 0.0;
  double w_gram_schmidt = 0.0;
  double w_l2 = 0.0;
  double w_mp_total = 0.0;
  double w_forward = 0.0;
  // measured counters from an actual run, reported beside the model
  std::optional<WorkCounters> measured;
};

CostReport mp_cost_model(const CostModelParams& params,
                         std::optional<WorkCounters> measured = std::nullopt);

}  // namespace srn
