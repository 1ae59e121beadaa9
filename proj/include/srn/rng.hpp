#pragma once

#include <cstdint>
#include <cmath>

namespace srn {

// Reproducible random stream addressed by (seed, substream).  Identical
// (seed, substream, call sequence) yields identical variates on every
// platform, which is why the generator and all variate transforms live
// here instead of <random>: libstdc++ distributions are not pinned across
// versions.
//
// Generator: xoshiro256++ (Blackman & Vigna), state seeded through
// SplitMix64 so that nearby (seed, substream) pairs land in unrelated
// regions of the state space.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t substream) {
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * (substream + 1));
    for (auto& w : s_) w = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform double in (0,1], safe as a log() argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Poisson variate.  Inversion by sequential search below mean 10,
  // Hormann's transformed rejection (PTRS) above; rates in tau-leap steps
  // span both regimes.  mean == 0 returns 0 without consuming randomness.
  std::int64_t poisson(double mean);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
};

}  // namespace srn
