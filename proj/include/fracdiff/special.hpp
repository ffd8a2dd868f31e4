// Gamma-function helpers shared by the Mittag-Leffler evaluator and the
// Caputo L1 scheme: reciprocal gamma (finite, zero at the poles), a signed
// log form for overflow-safe series terms, and trig functions of pi*x with
// exact argument reduction.
#pragma once

namespace fracdiff {

// sin(pi*x). The reduction x = n + r with |r| <= 1/2 is exact in floating
// point, so half-integer and integer arguments map to exactly +-1 and +-0.
double sin_pi(double x);

// cos(pi*x) with the same exact reduction.
double cos_pi(double x);

// 1/Gamma(x) for any real x; returns 0 at the poles x = 0, -1, -2, ...
double recip_gamma(double x);

// log|1/Gamma(x)| with separate sign; sign == 0 marks a pole.
struct SignedLogRecipGamma {
  double log_abs;
  double sign;
};
SignedLogRecipGamma log_recip_gamma(double x);

}  // namespace fracdiff
