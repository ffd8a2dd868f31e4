// Discrepancy functional, Tikhonov objective, weighted residual vector, and
// Jacobians (forward-difference primary, analytic alpha/gamma cross-check)
// for the exponent-recovery problem.
#pragma once

#include <Eigen/Core>
#include <array>
#include <stdexcept>

#include "fracdiff/observations.hpp"
#include "fracdiff/spectral.hpp"

namespace fracdiff {

// Raised when a finite-difference step would leave the admissible open set;
// the caller shrinks the step and retries.
class FdStepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResidualModel {
  ObservationSet observations;
  SpectralExpansion expansion;
  ParameterBox box = ParameterBox::standard();
  double lambda = 0.0;
  std::array<double, 3> fd_steps{1e-7, 1e-7, 1e-7};  // d beta, d alpha, d gamma

  void validate() const;
};

// I(a) = 1/2 sum_i w_i [u(a)(t_i,0) - phi(t_i)]^2.
double discrepancy(const ResidualModel& model, const FractionalTriple& a);

// r_i(a) = sqrt(w_i) [u(a)(t_i,0) - phi(t_i)]; 1/2 ||r||^2 = I(a).
Eigen::VectorXd residual_vector(const ResidualModel& model,
                                const FractionalTriple& a);

// F(a) = I(a) + (lambda/2) ||a||^2.
double objective(const ResidualModel& model, const FractionalTriple& a);

// Forward differences of the residual columns in (beta, alpha, gamma) order.
Eigen::Matrix<double, Eigen::Dynamic, 3> jacobian_fd(const ResidualModel& model,
                                                     const FractionalTriple& a);

// Analytic d/d alpha and d/d gamma columns,
//   d_alpha r_i = sqrt(w_i) (-t_i^beta) sum_{odd n} (n pi/2)^alpha
//                 ln(n pi/2) E'_beta(-mu_n t_i^beta) c_n psi_n(0),
// used as a cross-check of the FD columns.
Eigen::Matrix<double, Eigen::Dynamic, 2> jacobian_analytic_space(
    const ResidualModel& model, const FractionalTriple& a);

}  // namespace fracdiff
