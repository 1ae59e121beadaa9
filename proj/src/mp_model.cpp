#include "srn/mp_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "srn/parallel.hpp"

namespace srn {

namespace {

double falling_factorial(double s, int order) {
  double v = 1.0;
  for (int r = 0; r < order; ++r) v *= s - static_cast<double>(r);
  return v;
}

void write_doubles(std::ostream& os, std::span<const double> row) {
  char buf[32];
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
    os << buf << (i + 1 == row.size() ? "" : " ");
  }
  os << "\n";
}

}  // namespace

BasisSpec BasisSpec::tensor(int t_degree, int s_degree) {
  BasisSpec b;
  for (int i1 = 0; i1 <= t_degree; ++i1)
    for (int i2 = 0; i2 <= s_degree; ++i2) b.exponents.push_back({i1, i2});
  std::sort(b.exponents.begin(), b.exponents.end(),
            [](const std::array<int, 2>& x, const std::array<int, 2>& y) {
              const int tx = x[0] + x[1], ty = y[0] + y[1];
              if (tx != ty) return tx < ty;
              return x < y;
            });
  return b;
}

PathEnsemble PathEnsemble::generate(const ReactionNetwork& net, const State& x0,
                                    const TimeGrid& grid, int M,
                                    std::uint64_t seed, StreamDomain domain,
                                    unsigned threads) {
  PathEnsemble e;
  e.grid = grid;
  e.M = M;
  e.d = net.species_count();
  const std::size_t stride = static_cast<std::size_t>(grid.N + 1) *
                             static_cast<std::size_t>(e.d);
  e.states.assign(static_cast<std::size_t>(M) * stride, 0);

  parallel_chunks(static_cast<std::uint64_t>(M), kPathChunk, threads,
                  [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t m = begin; m < end; ++m) {
                      RngStream rng(seed, substream_id(domain, 0, m));
                      auto* base = e.states.data() + m * stride;
                      tau_leap_scan(
                          net, x0, grid, rng,
                          [&](int k, const State& x) {
                            std::copy(x.begin(), x.end(),
                                      base + static_cast<std::size_t>(k) *
                                                 static_cast<std::size_t>(e.d));
                          },
                          nullptr);
                    }
                  });
  return e;
}

void OrthoBasis::eval(double t, double s, std::span<double> out) const {
  // raw monomial values t^{i1} s^{i2}
  double mono[64];
  for (std::size_t q = 0; q < monomials.size(); ++q) {
    double v = 1.0;
    for (int r = 0; r < monomials[q][0]; ++r) v *= t;
    for (int r = 0; r < monomials[q][1]; ++r) v *= s;
    mono[q] = v;
  }
  for (std::size_t p = 0; p < kept.size(); ++p) {
    double acc = 0.0;
    for (std::size_t q = 0; q < monomials.size(); ++q)
      acc += weights[p][q] * mono[q];
    out[p] = acc;
  }
}

Classification classify_reactions(const ReactionNetwork& net,
                                  const Projection& proj) {
  if (!proj.is_canonical())
    throw config_error(
        "classify_reactions: only canonical unit-row projections are "
        "classified structurally; declare the factorization for general P");
  const int J = net.reaction_count();
  const auto& selected = proj.selected_species();

  Classification cls;
  cls.kinds.resize(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) {
    const auto nu_real = proj.apply_stoich(net.stoich_row(j));
    std::vector<std::int64_t> nu_bar(nu_real.size());
    bool zero = true;
    for (std::size_t r = 0; r < nu_real.size(); ++r) {
      nu_bar[r] = static_cast<std::int64_t>(std::llround(nu_real[r]));
      if (nu_bar[r] != 0) zero = false;
    }
    cls.nu_bar.push_back(std::move(nu_bar));

    if (zero) {
      cls.kinds[static_cast<std::size_t>(j)] = ReactionKind::kExcluded;
      continue;
    }

    // mass-action a_j factors through P iff every reactant species is a
    // projected coordinate
    bool factors = true;
    ClosedFormPropensity cf;
    cf.theta = net.rate(j);
    for (int i = 0; i < net.species_count() && factors; ++i) {
      const int order = net.reactant_coeff(j, i);
      if (order == 0) continue;
      int row = -1;
      for (std::size_t r = 0; r < selected.size(); ++r)
        if (selected[r] == i) row = static_cast<int>(r);
      if (row < 0)
        factors = false;
      else
        cf.orders.emplace_back(row, order);
    }
    if (factors) {
      cls.kinds[static_cast<std::size_t>(j)] = ReactionKind::kClosedForm;
      cls.closed_forms[j] = std::move(cf);
    } else {
      cls.kinds[static_cast<std::size_t>(j)] = ReactionKind::kRegressed;
      cls.regressed.push_back(j);
    }
  }
  return cls;
}

OrthoBasis empirical_gram_schmidt(const PathEnsemble& paths, const BasisSpec& basis,
                                  const Projection& proj) {
  if (proj.reduced_dim() != 1)
    throw config_error("empirical_gram_schmidt: regression basis needs dbar = 1");
  if (basis.size() > 64) throw config_error("basis too large");

  const std::size_t rows = static_cast<std::size_t>(paths.M) *
                           static_cast<std::size_t>(paths.grid.N);
  if (rows < basis.size())
    throw config_error("gram-schmidt: fewer data rows than basis functions");

  // projected states and times for rows (m, n), n = 0..N-1
  std::vector<double> svals(rows), tvals(rows);
  double s_abs_max = 1.0;
  {
    std::vector<double> sred(1);
    std::size_t k = 0;
    for (int m = 0; m < paths.M; ++m) {
      for (int n = 0; n < paths.grid.N; ++n, ++k) {
        const auto x = paths.state(m, n);
        double acc = 0.0;
        for (int i = 0; i < paths.d; ++i)
          acc += proj.rows()[0][static_cast<std::size_t>(i)] *
                 static_cast<double>(x[static_cast<std::size_t>(i)]);
        svals[k] = acc;
        tvals[k] = paths.grid.t(n);
        s_abs_max = std::max(s_abs_max, std::fabs(acc));
      }
    }
  }
  const double t_scale = std::max(paths.grid.T, 1e-12);
  const double s_scale = s_abs_max;

  // scaled monomial data columns
  const std::size_t Q = basis.size();
  std::vector<std::vector<double>> cols(Q, std::vector<double>(rows));
  std::vector<double> col_scale(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    const int i1 = basis.exponents[q][0];
    const int i2 = basis.exponents[q][1];
    double sc = 1.0;
    for (int r = 0; r < i1; ++r) sc /= t_scale;
    for (int r = 0; r < i2; ++r) sc /= s_scale;
    col_scale[q] = sc;
    for (std::size_t k = 0; k < rows; ++k) {
      double v = 1.0;
      for (int r = 0; r < i1; ++r) v *= tvals[k];
      for (int r = 0; r < i2; ++r) v *= svals[k];
      cols[q][k] = v * sc;
    }
  }

  const double inv_rows = 1.0 / static_cast<double>(rows);
  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rows; ++k) acc += u[k] * v[k];
    return acc * inv_rows;
  };

  OrthoBasis out;
  out.monomials = basis.exponents;

  std::vector<std::vector<double>> q_cols;          // orthonormal data columns
  std::vector<std::vector<double>> q_coeffs;        // over scaled monomials
  double first_norm = 0.0;

  for (std::size_t q = 0; q < Q; ++q) {
    std::vector<double> v = cols[q];
    std::vector<double> c(Q, 0.0);
    c[q] = 1.0;
    // modified Gram-Schmidt with one re-orthogonalization pass
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t r = 0; r < q_cols.size(); ++r) {
        const double pr = dot(v, q_cols[r]);
        for (std::size_t k = 0; k < rows; ++k) v[k] -= pr * q_cols[r][k];
        for (std::size_t qq = 0; qq < Q; ++qq) c[qq] -= pr * q_coeffs[r][qq];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (q == 0) first_norm = norm;
    if (norm < 1e-10 * first_norm) {
      ++out.dropped;  // degenerate pivot: drop this basis element
      continue;
    }
    const double inv_norm = 1.0 / norm;
    for (std::size_t k = 0; k < rows; ++k) v[k] *= inv_norm;
    for (std::size_t qq = 0; qq < Q; ++qq) c[qq] *= inv_norm;
    q_cols.push_back(std::move(v));
    q_coeffs.push_back(std::move(c));
    out.kept.push_back(static_cast<int>(q));
  }

  // fold the monomial scaling into the recorded triangular map so the
  // record applies to raw monomials t^{i1} s^{i2}
  for (auto& c : q_coeffs) {
    std::vector<double> w(Q, 0.0);
    for (std::size_t qq = 0; qq < Q; ++qq) w[qq] = c[qq] * col_scale[qq];
    out.weights.push_back(std::move(w));
  }
  return out;
}

MPModel::MPModel(Projection proj, Classification cls, OrthoBasis basis, double T)
    : proj_(std::move(proj)), cls_(std::move(cls)), basis_(std::move(basis)), T_(T) {}

MPModel::MPModel(MPModel&& o) noexcept
    : proj_(std::move(o.proj_)),
      cls_(std::move(o.cls_)),
      basis_(std::move(o.basis_)),
      T_(o.T_),
      coeffs_(std::move(o.coeffs_)),
      residual_rms_(std::move(o.residual_rms_)),
      s_seen_min_(o.s_seen_min_),
      s_seen_max_(o.s_seen_max_),
      fit_paths_(o.fit_paths_),
      fit_grid_(o.fit_grid_),
      extrapolations_(o.extrapolations_.load(std::memory_order_relaxed)) {}

MPModel& MPModel::operator=(MPModel&& o) noexcept {
  proj_ = std::move(o.proj_);
  cls_ = std::move(o.cls_);
  basis_ = std::move(o.basis_);
  T_ = o.T_;
  coeffs_ = std::move(o.coeffs_);
  residual_rms_ = std::move(o.residual_rms_);
  s_seen_min_ = o.s_seen_min_;
  s_seen_max_ = o.s_seen_max_;
  fit_paths_ = o.fit_paths_;
  fit_grid_ = o.fit_grid_;
  extrapolations_.store(o.extrapolations_.load(std::memory_order_relaxed),
                        std::memory_order_relaxed);
  return *this;
}

void MPModel::set_coefficients(int j, std::vector<double> c) {
  if (c.size() != basis_.size())
    throw config_error("mp model: coefficient length mismatch");
  coeffs_[j] = std::move(c);
}

const std::vector<double>& MPModel::coefficients(int j) const {
  const auto it = coeffs_.find(j);
  if (it == coeffs_.end())
    throw config_error("mp model: no coefficients for reaction " + std::to_string(j));
  return it->second;
}

double MPModel::residual_rms(int j) const {
  const auto it = residual_rms_.find(j);
  return it == residual_rms_.end() ? 0.0 : it->second;
}

double MPModel::propensity(int j, double t, std::span<const double> s) const {
  switch (cls_.kinds[static_cast<std::size_t>(j)]) {
    case ReactionKind::kExcluded:
      return 0.0;
    case ReactionKind::kClosedForm: {
      const auto& cf = cls_.closed_forms.at(j);
      double a = cf.theta;
      for (const auto& [row, order] : cf.orders)
        a *= falling_factorial(s[static_cast<std::size_t>(row)], order);
      return std::max(a, 0.0);
    }
    case ReactionKind::kRegressed: {
      const auto it = coeffs_.find(j);
      if (it == coeffs_.end())
        throw config_error("mp model: unfitted regressed reaction queried");
      if (s[0] < s_seen_min_ || s[0] > s_seen_max_)
        extrapolations_.fetch_add(1, std::memory_order_relaxed);
      double phi[64];
      basis_.eval(t, s[0], {phi, basis_.size()});
      double a = 0.0;
      for (std::size_t p = 0; p < basis_.size(); ++p) a += it->second[p] * phi[p];
      return std::max(a, 0.0);  // negative fits are meaningless rates
    }
  }
  return 0.0;
}

void MPModel::propensities(double t, std::span<const double> s,
                           std::span<double> out) const {
  for (int j = 0; j < reaction_count(); ++j)
    out[static_cast<std::size_t>(j)] = propensity(j, t, s);
}

MPModel fit_mp(const PathEnsemble& paths, const BasisSpec& basis,
               const Projection& proj, const ReactionNetwork& net,
               std::optional<std::vector<int>> force_regress) {
  Classification cls = classify_reactions(net, proj);
  std::vector<int> targets = force_regress.value_or(cls.regressed);
  if (force_regress) {
    // forced targets evaluate through the fitted expansion
    for (int j : targets) {
      cls.kinds[static_cast<std::size_t>(j)] = ReactionKind::kRegressed;
      cls.closed_forms.erase(j);
    }
    cls.regressed = targets;
  }
  OrthoBasis ortho = empirical_gram_schmidt(paths, basis, proj);

  const std::size_t rows = static_cast<std::size_t>(paths.M) *
                           static_cast<std::size_t>(paths.grid.N);
  const std::size_t P = ortho.size();

  // design matrix from the recorded orthobasis (same ensemble as the inner
  // product, so D^T D is diagonal with entries (T/dt) M)
  std::vector<double> design(rows * P);
  std::vector<double> diag(P, 0.0);
  double s_min = std::numeric_limits<double>::infinity();
  double s_max = -std::numeric_limits<double>::infinity();
  {
    std::vector<double> phi(P);
    std::size_t k = 0;
    for (int m = 0; m < paths.M; ++m) {
      for (int n = 0; n < paths.grid.N; ++n, ++k) {
        const auto x = paths.state(m, n);
        double s = 0.0;
        for (int i = 0; i < paths.d; ++i)
          s += proj.rows()[0][static_cast<std::size_t>(i)] *
               static_cast<double>(x[static_cast<std::size_t>(i)]);
        s_min = std::min(s_min, s);
        s_max = std::max(s_max, s);
        ortho.eval(paths.grid.t(n), s, phi);
        for (std::size_t p = 0; p < P; ++p) {
          design[k * P + p] = phi[p];
          diag[p] += phi[p] * phi[p];
        }
      }
    }
  }

  MPModel model(proj, std::move(cls), std::move(ortho), paths.grid.T);
  model.set_sampled_hull(s_min, s_max);
  model.set_fit_info(paths.M, paths.grid);

  std::vector<double> psi(rows);
  State x(static_cast<std::size_t>(paths.d));
  for (int j : targets) {
    std::size_t k = 0;
    for (int m = 0; m < paths.M; ++m) {
      for (int n = 0; n < paths.grid.N; ++n, ++k) {
        const auto xs = paths.state(m, n);
        for (int i = 0; i < paths.d; ++i) x[static_cast<std::size_t>(i)] = xs[static_cast<std::size_t>(i)];
        psi[k] = net.propensity(j, x);
      }
    }
    // normal equations: diagonal system, solved by direct division
    std::vector<double> c(P, 0.0);
    for (std::size_t k2 = 0; k2 < rows; ++k2)
      for (std::size_t p = 0; p < P; ++p) c[p] += design[k2 * P + p] * psi[k2];
    for (std::size_t p = 0; p < P; ++p) c[p] /= diag[p];

    double rss = 0.0;
    for (std::size_t k2 = 0; k2 < rows; ++k2) {
      double fit = 0.0;
      for (std::size_t p = 0; p < P; ++p) fit += design[k2 * P + p] * c[p];
      const double r = psi[k2] - fit;
      rss += r * r;
    }
    model.set_coefficients(j, std::move(c));
    model.set_residual_rms(j, std::sqrt(rss / static_cast<double>(rows)));
  }
  return model;
}

std::vector<std::int64_t> mp_process_simulate(const MPModel& model,
                                              const std::vector<std::int64_t>& s0,
                                              const TimeGrid& grid, RngStream& rng,
                                              WorkCounters* work) {
  const int J = model.reaction_count();
  const int dbar = model.projection().reduced_dim();
  std::vector<std::int64_t> s = s0;
  std::vector<double> sd(static_cast<std::size_t>(dbar));
  const double dt = grid.dt();

  for (int n = 0; n < grid.N; ++n) {
    for (int i = 0; i < dbar; ++i)
      sd[static_cast<std::size_t>(i)] = static_cast<double>(s[static_cast<std::size_t>(i)]);
    const double t = grid.t(n);
    for (int j = 0; j < J; ++j) {
      if (model.classification().kinds[static_cast<std::size_t>(j)] ==
          ReactionKind::kExcluded)
        continue;
      const double rate = model.propensity(j, t, sd);
      const std::int64_t p = rng.poisson(rate * dt);
      if (work) work->poisson_draws += 1;
      if (p == 0) continue;
      const auto& nu = model.nu_bar(j);
      for (int i = 0; i < dbar; ++i)
        s[static_cast<std::size_t>(i)] += p * nu[static_cast<std::size_t>(i)];
    }
    if (work) work->propensity_evals += 1;
    for (auto& si : s) si = std::max<std::int64_t>(si, 0);
  }
  return s;
}

ControlPolicy alternative_controls(std::shared_ptr<const ValueFunctionGrid> grid,
                                   std::shared_ptr<const MPModel> model,
                                   double delta_floor) {
  return ControlPolicy(
      "mp-alternative",
      [grid, model, delta_floor](double t, const State& x,
                                 std::span<const double> a,
                                 std::span<double> delta) {
        const auto& lattice = grid->lattice();
        const auto& proj = model->projection();
        const auto s = proj.apply_state_lattice(x);
        const std::int64_t here = lattice.clamped_index(s);
        const double u_here = grid->value(t, here);

        const int dbar = proj.reduced_dim();
        double sd[8];
        for (int i = 0; i < dbar; ++i)
          sd[i] = static_cast<double>(s[static_cast<std::size_t>(i)]);

        for (std::size_t j = 0; j < a.size(); ++j) {
          if (a[j] == 0.0) {
            delta[j] = 0.0;
            continue;
          }
          const auto& nu = model->nu_bar(static_cast<int>(j));
          bool zero_jump = true;
          for (auto v : nu)
            if (v != 0) zero_jump = false;
          if (zero_jump) {
            // channel absent from the surrogate: measure unchanged
            delta[j] = a[j];
            continue;
          }
          const double abar =
              model->propensity(static_cast<int>(j), t, {sd, static_cast<std::size_t>(dbar)});
          const std::int64_t nb = lattice.clamped_neighbor(s, nu);
          const double ratio = std::sqrt(grid->value(t, nb) / u_here);
          delta[j] = std::max(abar * ratio, delta_floor);
        }
      });
}

void MPModel::save(std::ostream& os) const {
  os << "srn-mp-model v1\n";
  os << "projection " << proj_.full_dim() << " " << proj_.reduced_dim() << "\n";
  for (const auto& row : proj_.rows()) write_doubles(os, row);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", T_);
  os << "final_time " << buf << "\n";
  os << "fit " << fit_paths_ << " " << fit_grid_.N << " ";
  std::snprintf(buf, sizeof(buf), "%.17g", fit_grid_.T);
  os << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g %.17g", s_seen_min_, s_seen_max_);
  os << "hull " << buf << "\n";

  os << "basis " << basis_.monomials.size() << " " << basis_.kept.size() << " "
     << basis_.dropped << "\n";
  for (const auto& e : basis_.monomials) os << e[0] << " " << e[1] << "\n";
  for (std::size_t p = 0; p < basis_.kept.size(); ++p) {
    os << basis_.kept[p] << " ";
    write_doubles(os, basis_.weights[p]);
  }

  os << "reactions " << cls_.kinds.size() << "\n";
  for (std::size_t j = 0; j < cls_.kinds.size(); ++j) {
    os << j << " ";
    switch (cls_.kinds[j]) {
      case ReactionKind::kExcluded:
        os << "excluded";
        break;
      case ReactionKind::kClosedForm:
        os << "closed-form";
        break;
      case ReactionKind::kRegressed:
        os << "regressed";
        break;
    }
    os << " nu";
    for (auto v : cls_.nu_bar[j]) os << " " << v;
    os << "\n";
    if (cls_.kinds[j] == ReactionKind::kClosedForm) {
      const auto& cf = cls_.closed_forms.at(static_cast<int>(j));
      std::snprintf(buf, sizeof(buf), "%.17g", cf.theta);
      os << "theta " << buf << " orders " << cf.orders.size();
      for (const auto& [row, order] : cf.orders) os << " " << row << " " << order;
      os << "\n";
    } else if (cls_.kinds[j] == ReactionKind::kRegressed) {
      const auto it = coeffs_.find(static_cast<int>(j));
      if (it == coeffs_.end()) {
        os << "coeff 0\n";
      } else {
        os << "coeff " << it->second.size() << " ";
        write_doubles(os, it->second);
      }
    }
  }
}

MPModel MPModel::load(std::istream& is) {
  std::string magic, version, key;
  is >> magic >> version;
  if (magic != "srn-mp-model" || version != "v1")
    throw config_error("mp model: unrecognized file header");

  int d = 0, dbar = 0;
  is >> key >> d >> dbar;
  if (key != "projection") throw config_error("mp model: bad projection line");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(dbar),
                                        std::vector<double>(static_cast<std::size_t>(d)));
  for (auto& row : rows)
    for (auto& v : row) is >> v;
  Projection proj(d, std::move(rows));

  double T = 0.0;
  is >> key >> T;
  if (key != "final_time") throw config_error("mp model: bad final_time line");
  int fit_paths = 0, fit_N = 0;
  double fit_T = 0.0;
  is >> key >> fit_paths >> fit_N >> fit_T;
  if (key != "fit") throw config_error("mp model: bad fit line");
  double hull_min = 0.0, hull_max = 0.0;
  is >> key >> hull_min >> hull_max;
  if (key != "hull") throw config_error("mp model: bad hull line");

  std::size_t n_mono = 0, n_kept = 0;
  int dropped = 0;
  is >> key >> n_mono >> n_kept >> dropped;
  if (key != "basis") throw config_error("mp model: bad basis line");
  OrthoBasis basis;
  basis.dropped = dropped;
  for (std::size_t q = 0; q < n_mono; ++q) {
    int i1 = 0, i2 = 0;
    is >> i1 >> i2;
    basis.monomials.push_back({i1, i2});
  }
  for (std::size_t p = 0; p < n_kept; ++p) {
    int kq = 0;
    is >> kq;
    basis.kept.push_back(kq);
    std::vector<double> w(n_mono);
    for (auto& v : w) is >> v;
    basis.weights.push_back(std::move(w));
  }

  std::size_t J = 0;
  is >> key >> J;
  if (key != "reactions") throw config_error("mp model: bad reactions line");
  Classification cls;
  cls.kinds.resize(J);
  std::map<int, std::vector<double>> coeffs;
  for (std::size_t j = 0; j < J; ++j) {
    std::size_t jj = 0;
    std::string kind;
    is >> jj >> kind >> key;
    if (key != "nu") throw config_error("mp model: bad reaction line");
    std::vector<std::int64_t> nu(static_cast<std::size_t>(dbar));
    for (auto& v : nu) is >> v;
    cls.nu_bar.push_back(std::move(nu));
    if (kind == "excluded") {
      cls.kinds[j] = ReactionKind::kExcluded;
    } else if (kind == "closed-form") {
      cls.kinds[j] = ReactionKind::kClosedForm;
      ClosedFormPropensity cf;
      std::size_t n_orders = 0;
      is >> key >> cf.theta;
      if (key != "theta") throw config_error("mp model: bad theta line");
      is >> key >> n_orders;
      if (key != "orders") throw config_error("mp model: bad orders line");
      for (std::size_t o = 0; o < n_orders; ++o) {
        int row = 0, order = 0;
        is >> row >> order;
        cf.orders.emplace_back(row, order);
      }
      cls.closed_forms[static_cast<int>(j)] = std::move(cf);
    } else if (kind == "regressed") {
      cls.kinds[j] = ReactionKind::kRegressed;
      cls.regressed.push_back(static_cast<int>(j));
      std::size_t n_c = 0;
      is >> key >> n_c;
      if (key != "coeff") throw config_error("mp model: bad coeff line");
      std::vector<double> c(n_c);
      for (auto& v : c) is >> v;
      if (n_c > 0) coeffs[static_cast<int>(j)] = std::move(c);
    } else {
      throw config_error("mp model: unknown reaction kind '" + kind + "'");
    }
  }
  if (!is) throw config_error("mp model: truncated file");

  MPModel model(std::move(proj), std::move(cls), std::move(basis), T);
  for (auto& [j, c] : coeffs) model.set_coefficients(j, std::move(c));
  model.set_sampled_hull(hull_min, hull_max);
  model.set_fit_info(fit_paths, TimeGrid{fit_T, fit_N});
  return model;
}

std::uint64_t MPModel::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&h](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& row : proj_.rows())
    mix_bytes(row.data(), row.size() * sizeof(double));
  for (const auto& w : basis_.weights) mix_bytes(w.data(), w.size() * sizeof(double));
  for (const auto& [j, c] : coeffs_) {
    mix_bytes(&j, sizeof(j));
    mix_bytes(c.data(), c.size() * sizeof(double));
  }
  for (const auto& nu : cls_.nu_bar)
    mix_bytes(nu.data(), nu.size() * sizeof(std::int64_t));
  return h;
}

}  // namespace srn
