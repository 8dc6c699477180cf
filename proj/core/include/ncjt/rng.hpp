#pragma once

#include <cstdint>
#include <random>

#include "ncjt/common.hpp"

namespace ncjt {

uint64_t splitmix64(uint64_t x);

/// Seeded pseudo-random source with self-contained transforms.
///
/// mt19937_64 output is fully specified by the standard; the Gaussian,
/// exponential and Poisson transforms are implemented here instead of using
/// std::*_distribution (whose output is implementation-defined), so a seed
/// produces the same stream on any conforming toolchain.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(splitmix64(seed)), seed_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly-symmetric complex normal, unit variance: E|z|^2 = 1.
  Complex cgaussian() {
    return Complex(gaussian() * M_SQRT1_2, gaussian() * M_SQRT1_2);
  }

  /// Poisson count by inversion of the uniform product (fine for small means).
  int poisson(double mean) {
    double limit = std::exp(-mean);
    double prod = uniform();
    int count = 0;
    while (prod > limit) {
      prod *= uniform();
      ++count;
    }
    return count;
  }

  /// Independent substream derived from this rng's seed and a fixed tag.
  Rng fork(uint64_t tag) const { return Rng(splitmix64(seed_ ^ splitmix64(tag))); }

 private:
  std::mt19937_64 gen_;
  uint64_t seed_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncjt
