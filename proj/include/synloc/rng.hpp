#ifndef SYNLOC_RNG_HPP
#define SYNLOC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace synloc {

// mt19937_64 with explicit sample transforms, so that seeded runs are
// reproducible independent of the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, no caching.
  double normal() {
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double normal(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    return mean + stddev * normal();
  }

  double exponential(double rate) {
    const double u = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    return -std::log(u) / rate;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 step; used to derive independent per-trial seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace synloc

#endif
