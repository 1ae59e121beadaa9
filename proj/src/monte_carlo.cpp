#include "srn/monte_carlo.hpp"

#include <chrono>
#include <vector>

#include "srn/parallel.hpp"

namespace srn {

EstimatorReport mc_estimate(std::uint64_t paths,
                            const std::function<McSample(std::uint64_t)>& sample,
                            double confidence_level, std::string context,
                            unsigned threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t n_chunks = (paths + kPathChunk - 1) / kPathChunk;
  std::vector<RunningMoments> moments(n_chunks);
  std::vector<WorkCounters> work(n_chunks);

  parallel_chunks(paths, kPathChunk, threads,
                  [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
                    RunningMoments m;
                    WorkCounters w;
                    for (std::uint64_t i = begin; i < end; ++i) {
                      McSample s = sample(i);
                      m.push(s.value);
                      w += s.work;
                    }
                    moments[c] = m;
                    work[c] = w;
                  });

  RunningMoments total;
  WorkCounters total_work;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    total.merge(moments[c]);
    total_work += work[c];
  }
  EstimatorReport r =
      finalize_report(total, confidence_level, total_work, std::move(context));
  r.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

EstimatorReport crude_tl_estimate(const ReactionNetwork& net, const State& x0,
                                  const TimeGrid& grid, const Observable& g,
                                  std::uint64_t paths, std::uint64_t seed,
                                  StreamDomain domain, std::uint64_t variant,
                                  unsigned threads) {
  const std::string context =
      "crude-tl:" + g.tag() + ":N=" + std::to_string(grid.N);
  return mc_estimate(
      paths,
      [&](std::uint64_t m) {
        RngStream rng(seed, substream_id(domain, variant, m));
        McSample s;
        const State xT = tau_leap_final(net, x0, grid, rng, &s.work);
        s.value = g(xT);
        return s;
      },
      0.95, context, threads);
}

}  // namespace srn
