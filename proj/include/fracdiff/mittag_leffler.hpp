// Two-parameter Mittag-Leffler function E_{beta,nu}(z) and its z-derivative
// for real arguments. Evaluation is region-switched: truncated power series
// near the origin, a certified asymptotic expansion far out on the negative
// axis, and a Gorenflo-Loutchko-Luchko style integral representation in the
// band between. Targets ~1e-13 absolute error on the negative axis for
// orders beta in (0,1); beta = 1 and beta = 2 use closed forms.
#pragma once

#include <stdexcept>
#include <string>

namespace fracdiff {

enum class MlRegion { Taylor, Asymptotic, Integral };

// Raised when no evaluation region reaches the accuracy target. Carries the
// region that gave up and its best estimate.
class MlConvergenceError : public std::runtime_error {
 public:
  MlConvergenceError(MlRegion region, double partial_estimate,
                     const std::string& message)
      : std::runtime_error(message),
        region_(region),
        partial_(partial_estimate) {}

  MlRegion region() const noexcept { return region_; }
  double partial_estimate() const noexcept { return partial_; }

 private:
  MlRegion region_;
  double partial_;
};

// E_{beta,nu}(z); requires beta > 0, nu > 0, z finite.
double mittag_leffler(double beta, double nu, double z);

// One-parameter shorthand E_beta(z) = E_{beta,1}(z).
inline double mittag_leffler(double beta, double z) {
  return mittag_leffler(beta, 1.0, z);
}

// d/dz E_{beta,nu}(z) = sum_{k>=1} k z^{k-1} / Gamma(beta k + nu).
double mittag_leffler_deriv(double beta, double nu, double z);

}  // namespace fracdiff
