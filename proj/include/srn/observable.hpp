#pragma once

#include <functional>
#include <string>

#include "srn/reaction_network.hpp"

namespace srn {

// Scalar function of the final state.  The indicator form 1{x_i > gamma}
// is the rare-event case; arbitrary scalar functions are supported for
// oracles and smoothed terminal conditions.
class Observable {
 public:
  // Indicator 1{x[species] > threshold}.
  static Observable indicator(int species, double threshold);

  // Generic scalar observable with a descriptive tag.
  static Observable function(std::function<double(const State&)> f,
                             std::string tag);

  double operator()(const State& x) const { return f_(x); }

  bool is_indicator() const { return is_indicator_; }
  int species() const { return species_; }
  double threshold() const { return threshold_; }
  const std::string& tag() const { return tag_; }

 private:
  std::function<double(const State&)> f_;
  bool is_indicator_ = false;
  int species_ = -1;
  double threshold_ = 0.0;
  std::string tag_;
};

}  // namespace srn
