#pragma once

#include <cstdint>
#include <random>

#include "aqedc/linalg.hpp"

namespace aqedc {

// Splittable deterministic generator. Children are derived by hashing the parent
// seed with a label, so parallel consumers never share a stream. All outputs are
// produced from the standardized mt19937_64 sequence; identical seeds give
// bit-identical results on one platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng derive(std::uint64_t label) const { return Rng(mix(seed_ ^ mix(label + 0x9e3779b97f4a7c15ULL))); }

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t uniform_u64() { return engine_(); }

  long uniform_int(long n) {  // {0, ..., n-1}
    return static_cast<long>(engine_() % static_cast<std::uint64_t>(n));
  }

  double gaussian() {  // Box-Muller, one value per call
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  Complex cgauss() { return Complex(gaussian(), gaussian()); }

  ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cgauss();
    return m;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aqedc
