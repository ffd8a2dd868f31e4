// Independent oracles used by the test suites. Everything here must stay
// decoupled from the implementation paths it checks: scaled complementary
// error function for the E_{1/2} identity, dense grid search for the trust
// region subproblem, and plain helpers for finite differences.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace oracles {

// erfcx(x) = exp(x^2) erfc(x). Direct product below the erfc underflow
// range, asymptotic continued series above it (Abramowitz-Stegun 7.1.23).
inline double erfcx(double x) {
  if (x < 12.0) return std::exp(x * x) * std::erfc(x);
  const double q = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= -q * (2 * k - 1);
    sum += term;
    if (std::fabs(term) < 1e-17 * sum) break;
  }
  return sum / (x * std::sqrt(M_PI));
}

// Central finite difference with step h.
inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Deterministic 64-bit generator for test inputs (splitmix64).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

 private:
  std::uint64_t state_;
};

}  // namespace oracles
