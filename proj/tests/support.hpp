// Shared helpers for the unit tests: a seeded generator and a few samplers.
#pragma once

#include "dimer/core.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 12345) : eng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  std::complex<double> cnormal() { return {normal(), normal()}; }

  // uniform on the radius-1/2 sphere
  dimer::BlochVector sphere() {
    const double z = uniform(-1.0, 1.0);
    const double ph = uniform(0.0, 2.0 * dimer::kPi);
    const double r = std::sqrt(1.0 - z * z);
    return {0.5 * r * std::cos(ph), 0.5 * r * std::sin(ph), 0.5 * z};
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline double cabs_diff(std::complex<double> a, std::complex<double> b) { return std::abs(a - b); }

}  // namespace testing
