#include "srn/observable.hpp"

namespace srn {

Observable Observable::indicator(int species, double threshold) {
  Observable g;
  g.is_indicator_ = true;
  g.species_ = species;
  g.threshold_ = threshold;
  g.tag_ = "indicator(x[" + std::to_string(species) + "]>" +
           std::to_string(threshold) + ")";
  g.f_ = [species, threshold](const State& x) {
    return x[static_cast<std::size_t>(species)] > threshold ? 1.0 : 0.0;
  };
  return g;
}

Observable Observable::function(std::function<double(const State&)> f,
                                std::string tag) {
  Observable g;
  g.f_ = std::move(f);
  g.tag_ = std::move(tag);
  return g;
}

}  // namespace srn
