// Box-constrained trust-region least squares with the Levenberg-Marquardt
// Hessian model: l-infinity trust region, projection-based subproblem solve
// with an exact active-set fallback, quarter/double radius rules, and
// projected-gradient termination.
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "fracdiff/inverse.hpp"

namespace fracdiff {

struct TrustRegionConfig {
  double initial_radius = 0.5;
  double max_radius = 1.0;
  double eta = 0.125;  // acceptance threshold, in [0, 1/4)
  int max_iterations = 100;
  double gradient_tolerance = 1e-8;  // on the projected gradient

  void validate() const;
};

// Quadratic model m(p) = f0 + g.p + p^T B p / 2 with B = J^T J + lambda I.
struct QuadraticModel {
  double f0 = 0.0;
  Eigen::Vector3d gradient = Eigen::Vector3d::Zero();
  Eigen::Matrix3d hessian = Eigen::Matrix3d::Zero();

  double value(const Eigen::Vector3d& p) const {
    return f0 + gradient.dot(p) + 0.5 * p.dot(hessian * p);
  }
};

// Minimizes the model over {lo <= p <= hi} (the intersection of the trust
// region and the shifted box, itself a box containing 0). Primary path is
// the projection procedure: unconstrained Newton step, clamp the violating
// components, re-minimize over the free ones (at most 3 rounds). If the
// result fails its KKT check, fall back to exact enumeration of the 27
// activity patterns. B must be positive definite.
Eigen::Vector3d solve_trust_region_subproblem(const Eigen::Vector3d& gradient,
                                              const Eigen::Matrix3d& hessian,
                                              const Eigen::Vector3d& lo,
                                              const Eigen::Vector3d& hi);

struct IterationRecord {
  int iteration = 0;
  FractionalTriple iterate;            // a_k at the start of the iteration
  double objective_value = 0.0;        // F(a_k)
  double discrepancy_value = 0.0;      // I(a_k)
  double projected_gradient_norm = 0.0;
  double radius = 0.0;                 // R_k
  double rho = 0.0;                    // NaN for the terminal record
  double step_inf_norm = 0.0;
  bool accepted = false;
  bool step_on_radius = false;
  bool model_degenerate = false;
};

struct EstimateReport {
  FractionalTriple final_triple;   // canonical (alpha <= gamma)
  double final_discrepancy = 0.0;  // I at the canonical triple
  double final_objective = 0.0;
  double lambda = 0.0;
  bool converged = false;
  std::string termination;  // "gradient" or "max_iterations"
  int total_iterations = 0;
  int accepted_iterations = 0;
  std::vector<IterationRecord> trace;
  double wall_seconds = 0.0;
};

// Mutable solver state; step() advances it by one trust-region iteration.
struct TrustRegionState {
  FractionalTriple iterate;
  double radius = 0.0;
  int iteration = 0;
  int accepted = 0;
  bool gradient_converged = false;
  bool model_floor = false;  // predicted reduction below F's float accuracy
  std::vector<IterationRecord> history;

  // model cache at `iterate`
  bool model_valid = false;
  Eigen::VectorXd residual;
  Eigen::Matrix<double, Eigen::Dynamic, 3> jacobian;
  Eigen::Vector3d gradient;
  double objective_value = 0.0;
  double discrepancy_value = 0.0;
};

TrustRegionState make_state(const ResidualModel& model,
                            const FractionalTriple& a0,
                            const TrustRegionConfig& config);

// One iteration of the constrained trust-region loop: evaluate the model at
// a_k, solve the subproblem, form rho_k, apply the radius rules and the
// acceptance test, and append a history record.
void trust_region_step(const ResidualModel& model, TrustRegionState& state,
                       const TrustRegionConfig& config);

// Full solve from a0 (must lie in the box). Runs until the projected
// gradient drops below the tolerance or the iteration cap; a capped run is
// reported as not converged rather than an error.
EstimateReport estimate(const ResidualModel& model, const FractionalTriple& a0,
                        const TrustRegionConfig& config);

}  // namespace fracdiff
