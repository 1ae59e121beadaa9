#pragma once

#include <cstdint>
#include <functional>

#include "srn/observable.hpp"
#include "srn/statistics.hpp"

namespace srn {

// Substream layout: the high bits of the 64-bit substream id carry the
// stage, the low 32 bits the path index.  Stages share one master seed
// yet never reuse a stream ("matched seeds, independent substreams").
enum class StreamDomain : std::uint64_t {
  kForward = 1,
  kCrudeBaseline = 2,
  kRegressionFit = 3,
  kPilot = 4,
  kDistributionFull = 5,
  kDistributionSurrogate = 6,
  kValidation = 7,
};

inline std::uint64_t substream_id(StreamDomain domain, std::uint64_t variant,
                                  std::uint64_t path_index) {
  return (static_cast<std::uint64_t>(domain) << 40) | (variant << 32) |
         path_index;
}

// One Monte Carlo sample: value fed to the moment accumulator plus the
// operation counts spent producing it.
struct McSample {
  double value = 0.0;
  WorkCounters work;
};

// Generic chunk-parallel Monte Carlo estimator.  sample(m) must be pure
// given m (per-path substreams); chunk results merge in fixed chunk order
// so reports are independent of the thread count.
EstimatorReport mc_estimate(std::uint64_t paths,
                            const std::function<McSample(std::uint64_t)>& sample,
                            double confidence_level, std::string context,
                            unsigned threads);

// Crude tau-leap Monte Carlo of E[g(X_N)].
EstimatorReport crude_tl_estimate(const ReactionNetwork& net, const State& x0,
                                  const TimeGrid& grid, const Observable& g,
                                  std::uint64_t paths, std::uint64_t seed,
                                  StreamDomain domain, std::uint64_t variant,
                                  unsigned threads);

}  // namespace srn
