#include "srn/cost_model.hpp"

#include "srn/errors.hpp"

namespace srn {

CostReport mp_cost_model(const CostModelParams& p,
                         std::optional<WorkCounters> measured) {
  if (p.lambda_size == 0 || p.T <= 0.0 || p.dt <= 0.0 || p.J < 1 || p.J_mp < 0 ||
      p.d < 1)
    throw config_error("cost model: invalid parameters");

  const double L = static_cast<double>(p.lambda_size);
  const double steps = p.T / p.dt;
  const double M = static_cast<double>(p.M);

  CostReport r;
  r.measured = measured;
  r.c_pol = p.unit.c_polynomial >= 0.0 ? p.unit.c_polynomial : L;
  // one evaluation of the empirical inner product
  r.c_inner = p.unit.c_inner >= 0.0 ? p.unit.c_inner
                                    : steps * M * (2.0 + 2.0 * r.c_pol) + 3.0;

  r.w_tl_per_path = steps * (p.unit.c_propensity +
                             static_cast<double>(p.J) * p.unit.c_poisson +
                             static_cast<double>(p.d) * (p.J + 2.0));
  r.w_tl_total = M * r.w_tl_per_path;

  r.w_gram_schmidt = L * (r.c_inner + L + 1.0) +
                     0.5 * (L - 1.0) * L * (2.0 * L + r.c_inner);

  const double jmp = static_cast<double>(p.J_mp);
  // derive D, derive rhs, form D^T D, J_MP matrix-vector products, solve
  r.w_l2 = M * steps * L * r.c_pol + jmp * M * steps * p.unit.c_propensity +
           L * L * M * steps + jmp * L * M * steps + jmp * L * L * L;

  r.w_mp_total = r.w_tl_total + r.w_gram_schmidt + r.w_l2;

  r.w_forward = static_cast<double>(p.M_fw) * steps *
                (static_cast<double>(p.J) * p.unit.c_poisson +
                 p.unit.c_likelihood + jmp * p.unit.c_control);
  return r;
}

}  // namespace srn
