// Seeded random-number helpers built on mt19937_64 with explicit bit-to-
// double conversion, so streams are identical across standard libraries and
// platforms (std::uniform_real_distribution makes no such promise).
#pragma once

#include <cstdint>
#include <random>

namespace fairprop {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1): top 53 bits of the engine output.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Bernoulli draw as 0/1.
  int bernoulli(double p) { return uniform() < p ? 1 : 0; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fairprop
