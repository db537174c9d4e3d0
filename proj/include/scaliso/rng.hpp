#pragma once
// Counter-based seed splitting: every consumer derives an independent
// stream from (master seed, stream index), so results do not depend on
// worker count or scheduling.

#include <cmath>
#include <cstdint>

namespace scaliso {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_stream(uint64_t seed, uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

struct SplitMix {
  uint64_t state;
  explicit SplitMix(uint64_t s) : state(s) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1), 53-bit
  double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
};

// standard normal via the polar method; deterministic per stream
struct GaussianStream {
  SplitMix rng;
  bool has_spare = false;
  double spare = 0;
  explicit GaussianStream(uint64_t seed) : rng(seed) {}
  double next();
};

inline double GaussianStream::next() {
  if (has_spare) {
    has_spare = false;
    return spare;
  }
  for (;;) {
    double u = 2.0 * rng.uniform01() - 1.0;
    double v = 2.0 * rng.uniform01() - 1.0;
    double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      double f = std::sqrt(-2.0 * std::log(s) / s);
      spare = v * f;
      has_spare = true;
      return u * f;
    }
  }
}

}  // namespace scaliso
