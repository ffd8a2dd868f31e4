#include "fracdiff/special.hpp"

#include <cmath>
#include <limits>

namespace fracdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLogPi = 1.1447298858494001741;
}  // namespace

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  const double n = std::nearbyint(x);
  const double r = x - n;  // exact, |r| <= 0.5
  double s = std::sin(kPi * r);
  if (std::fmod(std::fabs(n), 2.0) == 1.0) s = -s;
  return s;
}

double cos_pi(double x) {
  if (!std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
  const double n = std::nearbyint(x);
  const double r = x - n;
  double c = std::cos(kPi * r);
  if (std::fmod(std::fabs(n), 2.0) == 1.0) c = -c;
  return c;
}

double recip_gamma(double x) {
  if (x > 0.0) {
    // tgamma overflows past ~171.6; switch to the log form there.
    if (x <= 171.0) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  if (x == std::floor(x)) return 0.0;  // poles at 0, -1, -2, ...
  // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi, assembled in logs
  // since Gamma(1-x) overflows for strongly negative x.
  const double s = sin_pi(x);
  const double mag = std::lgamma(1.0 - x) + std::log(std::fabs(s)) - kLogPi;
  return std::copysign(std::exp(mag), s);
}

SignedLogRecipGamma log_recip_gamma(double x) {
  if (x > 0.0) return {-std::lgamma(x), 1.0};
  if (x == std::floor(x)) return {-std::numeric_limits<double>::infinity(), 0.0};
  const double s = sin_pi(x);
  const double mag = std::lgamma(1.0 - x) + std::log(std::fabs(s)) - kLogPi;
  return {mag, s > 0.0 ? 1.0 : -1.0};
}

}  // namespace fracdiff
