#ifndef MODICA_RNG_HPP
#define MODICA_RNG_HPP

#include <cmath>
#include <cstdint>

#include "modica/smallvec.hpp"

namespace modica {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-seeded generator. Monte-Carlo loops construct one stream per
/// sample index, so results do not depend on how samples are split across
/// threads.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // decorrelate nearby seeds
    splitmix64(state_);
    splitmix64(state_);
  }
  static Rng stream(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return Rng(s);
  }

  uint64_t next() { return splitmix64(state_); }

  /// uniform in [0, 1)
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  double gauss() {
    // Box-Muller; discards the spare to keep the stream stateless.
    double u1 = u01(), u2 = u01();
    while (u1 <= 0.0) u1 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  SmallVec unit_vector(int n) {
    SmallVec d(n);
    double r2 = 0.0;
    do {
      for (int i = 0; i < n; ++i) d[i] = gauss();
      r2 = norm2(d);
    } while (r2 < 1e-300);
    double inv = 1.0 / std::sqrt(r2);
    for (int i = 0; i < n; ++i) d[i] *= inv;
    return d;
  }

 private:
  uint64_t state_;
};

}  // namespace modica

#endif
