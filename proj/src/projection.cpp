#include "srn/projection.hpp"

#include <cmath>

namespace srn {

Projection::Projection(int full_dim, std::vector<std::vector<double>> rows)
    : d_(full_dim), dbar_(static_cast<int>(rows.size())), rows_(std::move(rows)) {
  if (dbar_ < 1) throw config_error("projection: needs at least one row");
  for (const auto& r : rows_)
    if (static_cast<int>(r.size()) != d_)
      throw config_error("projection: row length does not match d");

  canonical_ = true;
  for (const auto& r : rows_) {
    int ones = 0, sel = -1;
    for (int i = 0; i < d_; ++i) {
      if (r[static_cast<std::size_t>(i)] == 1.0) {
        ++ones;
        sel = i;
      } else if (r[static_cast<std::size_t>(i)] != 0.0) {
        canonical_ = false;
      }
    }
    if (ones != 1) canonical_ = false;
    selected_.push_back(sel);
  }
  if (!canonical_) selected_.clear();
}

Projection Projection::canonical(int full_dim, int species) {
  std::vector<double> row(static_cast<std::size_t>(full_dim), 0.0);
  row[static_cast<std::size_t>(species)] = 1.0;
  return Projection(full_dim, {row});
}

Projection Projection::identity(int full_dim) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < full_dim; ++i) {
    std::vector<double> row(static_cast<std::size_t>(full_dim), 0.0);
    row[static_cast<std::size_t>(i)] = 1.0;
    rows.push_back(std::move(row));
  }
  return Projection(full_dim, rows);
}

void Projection::apply(std::span<const double> x, std::span<double> out) const {
  for (int r = 0; r < dbar_; ++r) {
    double acc = 0.0;
    for (int i = 0; i < d_; ++i)
      acc += rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] *
             x[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(r)] = acc;
  }
}

std::vector<double> Projection::apply_state(const State& x) const {
  std::vector<double> xd(x.begin(), x.end());
  std::vector<double> out(static_cast<std::size_t>(dbar_));
  apply(xd, out);
  return out;
}

std::vector<double> Projection::apply_stoich(std::span<const int> nu) const {
  std::vector<double> xd(nu.begin(), nu.end());
  std::vector<double> out(static_cast<std::size_t>(dbar_));
  apply(xd, out);
  return out;
}

std::vector<std::int64_t> Projection::apply_state_lattice(const State& x) const {
  if (canonical_) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(dbar_));
    for (int r = 0; r < dbar_; ++r)
      out[static_cast<std::size_t>(r)] =
          x[static_cast<std::size_t>(selected_[static_cast<std::size_t>(r)])];
    return out;
  }
  const auto real = apply_state(x);
  std::vector<std::int64_t> out(real.size());
  for (std::size_t i = 0; i < real.size(); ++i)
    out[i] = static_cast<std::int64_t>(std::llround(real[i]));
  return out;
}

}  // namespace srn
