#pragma once

#include <cstdint>

namespace finsler {

// Counter-based pseudo-random stream: every draw is a pure function of (seed, counter), so
// samples are reproducible no matter how the consuming loops are ordered or parallelized.
inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Uniform in [0,1).
inline double u01(uint64_t seed, uint64_t counter) {
  return static_cast<double>(splitmix64(seed ^ splitmix64(counter + 0x632be59bd9b4e019ull)) >> 11)
         * 0x1.0p-53;
}

// Uniform in [lo,hi).
inline double uniform(uint64_t seed, uint64_t counter, double lo, double hi) {
  return lo + (hi - lo) * u01(seed, counter);
}

// Convenience stream: a seed plus an auto-incrementing counter.
class Rng {
public:
  explicit Rng(uint64_t seed, uint64_t start = 0) : seed_(seed), ctr_(start) {}
  double u01() { return ::finsler::u01(seed_, ctr_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  uint64_t counter() const { return ctr_; }

private:
  uint64_t seed_;
  uint64_t ctr_;
};

} // namespace finsler
