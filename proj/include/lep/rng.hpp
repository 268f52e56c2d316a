#pragma once

#include <cstdint>

namespace lep {

// Deterministic generator with a portable sampling scheme: std::*_distribution
// is not guaranteed to produce identical streams across standard libraries,
// so sampling is done from raw uniforms only.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // number of successes in n Bernoulli(p) trials
  long binomial(long n, double p) {
    long k = 0;
    for (long i = 0; i < n; ++i)
      if (uniform() < p) ++k;
    return k;
  }
};

// Stable seed derivation for parallel substreams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 g(a ^ (0x632be59bd9b4e019ULL + (b << 1)));
  g.next();
  return g.next();
}

}  // namespace lep
