// Observation sets for the inverse problem: uniform time nodes on (0, T],
// trapezoidal quadrature weights, clean or noise-perturbed center-trace
// values, and the seeded noise stream.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracdiff/spectral.hpp"

namespace fracdiff {

class DegenerateSignalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ObservationSet {
  std::vector<double> times;    // strictly increasing, in (0, T]
  std::vector<double> weights;  // trapezoid weights for `times`
  std::vector<double> values;   // phi(t_i)
  double noise_level = 0.0;     // delta (NaN when loaded from file)
  std::uint64_t seed = 0;
  double signal_norm = 0.0;     // ||u(a*)||_{L2(0,T)} on the same nodes

  std::size_t size() const { return times.size(); }
  void validate() const;
};

// Trapezoid weights on the stored nodes: w_1 = (t_2-t_1)/2,
// w_i = (t_{i+1}-t_{i-1})/2, w_m = (t_m-t_{m-1})/2.
std::vector<double> trapezoid_weights(std::span<const double> times);

// Observations phi(t_i) = u(a*)(t_i, 0) + (delta/||u(a*)||) xi_i at the
// uniform nodes t_i = i T/m. The perturbations are i.i.d. uniform on (-1,1):
// xi = 2*((mt19937_64(seed) >> 11) * 2^-53) - 1, one draw per node in time
// order. signal_norm is the trapezoid L2 norm of the clean trace on the same
// nodes.
ObservationSet make_observations(const SpectralExpansion& exp,
                                 const FractionalTriple& a_star, int m,
                                 double horizon, double delta,
                                 std::uint64_t seed);

}  // namespace fracdiff
