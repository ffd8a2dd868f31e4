#include "fracdiff/trust_region.hpp"

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <limits>

namespace fracdiff {

namespace {

constexpr double kActiveTol = 1e-12;

Eigen::Vector3d triple_vec(const FractionalTriple& a) {
  return {a.beta, a.alpha, a.gamma};
}

FractionalTriple vec_triple(const Eigen::Vector3d& v) {
  return {v[0], v[1], v[2]};
}

// Solve B_FF p_F = -(g_F + B_FC p_C) for the free coordinates.
void solve_reduced(const Eigen::Vector3d& g, const Eigen::Matrix3d& B,
                   const bool fixed[3], Eigen::Vector3d& p) {
  int free_idx[3];
  int nf = 0;
  for (int i = 0; i < 3; ++i) {
    if (!fixed[i]) free_idx[nf++] = i;
  }
  if (nf == 0) return;
  Eigen::MatrixXd bff(nf, nf);
  Eigen::VectorXd rhs(nf);
  for (int r = 0; r < nf; ++r) {
    rhs[r] = -g[free_idx[r]];
    for (int c = 0; c < nf; ++c) bff(r, c) = B(free_idx[r], free_idx[c]);
    for (int i = 0; i < 3; ++i) {
      if (fixed[i]) rhs[r] -= B(free_idx[r], i) * p[i];
    }
  }
  const Eigen::VectorXd sol = bff.ldlt().solve(rhs);
  for (int r = 0; r < nf; ++r) p[free_idx[r]] = sol[r];
}

bool kkt_ok(const Eigen::Vector3d& g, const Eigen::Matrix3d& B,
            const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
            const Eigen::Vector3d& p) {
  const Eigen::Vector3d grad = g + B * p;
  const double scale = 1.0 + g.lpNorm<Eigen::Infinity>() +
                       (B * p).lpNorm<Eigen::Infinity>();
  const double tol = 1e-10 * scale;
  for (int i = 0; i < 3; ++i) {
    const double span = hi[i] - lo[i];
    const double atol = kActiveTol * (1.0 + std::fabs(lo[i]) + std::fabs(hi[i]));
    const bool at_lo = p[i] <= lo[i] + atol && span > atol;
    const bool at_hi = p[i] >= hi[i] - atol;
    if (at_lo) {
      if (grad[i] < -tol) return false;
    } else if (at_hi) {
      if (grad[i] > tol) return false;
    } else if (std::fabs(grad[i]) > tol) {
      return false;
    }
  }
  return true;
}

// Exact minimizer by enumerating the 27 activity patterns (free/lo/hi per
// coordinate); the global optimum of an SPD quadratic over a box realizes
// one of them with a feasible free part.
Eigen::Vector3d enumerate_box_qp(const Eigen::Vector3d& g,
                                 const Eigen::Matrix3d& B,
                                 const Eigen::Vector3d& lo,
                                 const Eigen::Vector3d& hi,
                                 Eigen::Vector3d best, double best_val) {
  const auto value = [&](const Eigen::Vector3d& p) {
    return g.dot(p) + 0.5 * p.dot(B * p);
  };
  for (int pattern = 0; pattern < 27; ++pattern) {
    int digits[3] = {pattern % 3, (pattern / 3) % 3, pattern / 9};
    bool fixed[3];
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) {
      fixed[i] = digits[i] != 0;
      if (digits[i] == 1) p[i] = lo[i];
      if (digits[i] == 2) p[i] = hi[i];
    }
    solve_reduced(g, B, fixed, p);
    bool feasible = true;
    for (int i = 0; i < 3; ++i) {
      const double atol =
          kActiveTol * (1.0 + std::fabs(lo[i]) + std::fabs(hi[i]));
      if (p[i] < lo[i] - atol || p[i] > hi[i] + atol) feasible = false;
    }
    if (!feasible) continue;
    for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    const double val = value(p);
    if (val < best_val) {
      best_val = val;
      best = p;
    }
  }
  return best;
}

}  // namespace

void TrustRegionConfig::validate() const {
  const bool ok = initial_radius > 0.0 && initial_radius <= max_radius &&
                  eta >= 0.0 && eta < 0.25 && max_iterations >= 1 &&
                  gradient_tolerance > 0.0;
  if (!ok) {
    throw std::invalid_argument(
        "trust region config: need 0 < R0 <= R_max, eta in [0, 1/4), "
        "max_iterations >= 1, gradient tolerance > 0");
  }
}

Eigen::Vector3d solve_trust_region_subproblem(const Eigen::Vector3d& gradient,
                                              const Eigen::Matrix3d& hessian,
                                              const Eigen::Vector3d& lo,
                                              const Eigen::Vector3d& hi) {
  for (int i = 0; i < 3; ++i) {
    if (!(lo[i] <= 0.0 && hi[i] >= 0.0)) {
      throw std::invalid_argument(
          "subproblem: bounds must contain the zero step");
    }
  }
  // Paper procedure: unconstrained minimizer, then clamp-and-reduce.
  bool fixed[3] = {false, false, false};
  Eigen::Vector3d p = hessian.llt().solve(-gradient);
  for (int round = 0; round < 3; ++round) {
    bool clamped = false;
    for (int i = 0; i < 3; ++i) {
      if (fixed[i]) continue;
      if (p[i] < lo[i]) {
        p[i] = lo[i];
        fixed[i] = true;
        clamped = true;
      } else if (p[i] > hi[i]) {
        p[i] = hi[i];
        fixed[i] = true;
        clamped = true;
      }
    }
    if (!clamped) break;
    solve_reduced(gradient, hessian, fixed, p);
  }
  for (int i = 0; i < 3; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);

  if (kkt_ok(gradient, hessian, lo, hi, p)) return p;
  // The clamp heuristic picked a wrong active set; fall back to the exact
  // enumeration (27 tiny solves).
  const double val = gradient.dot(p) + 0.5 * p.dot(hessian * p);
  return enumerate_box_qp(gradient, hessian, lo, hi, p, val);
}

namespace {

Eigen::Matrix<double, Eigen::Dynamic, 3> jacobian_with_retry(
    const ResidualModel& model, const FractionalTriple& a) {
  std::array<double, 3> steps = model.fd_steps;
  for (int attempt = 0;; ++attempt) {
    try {
      ResidualModel scaled = model;
      scaled.fd_steps = steps;
      return jacobian_fd(scaled, a);
    } catch (const FdStepError&) {
      if (attempt >= 3) throw;
      for (double& h : steps) h /= 10.0;
    }
  }
}

void ensure_model(const ResidualModel& model, TrustRegionState& state) {
  if (state.model_valid) return;
  state.residual = residual_vector(model, state.iterate);
  state.jacobian = jacobian_with_retry(model, state.iterate);
  const Eigen::Vector3d a = triple_vec(state.iterate);
  state.gradient = state.jacobian.transpose() * state.residual + model.lambda * a;
  state.discrepancy_value = 0.5 * state.residual.squaredNorm();
  state.objective_value =
      state.discrepancy_value + 0.5 * model.lambda * a.squaredNorm();
  state.model_valid = true;
}

double projected_gradient_norm(const ResidualModel& model,
                               const TrustRegionState& state) {
  const Eigen::Vector3d a = triple_vec(state.iterate);
  const Eigen::Vector3d moved = a - state.gradient;
  const FractionalTriple projected = model.box.project(vec_triple(moved));
  return (triple_vec(projected) - a).norm();
}

}  // namespace

TrustRegionState make_state(const ResidualModel& model,
                            const FractionalTriple& a0,
                            const TrustRegionConfig& config) {
  config.validate();
  model.validate();
  if (!model.box.contains(a0)) {
    throw std::invalid_argument("estimate: initial guess outside the box");
  }
  TrustRegionState state;
  state.iterate = a0;
  state.radius = config.initial_radius;
  return state;
}

void trust_region_step(const ResidualModel& model, TrustRegionState& state,
                       const TrustRegionConfig& config) {
  ensure_model(model, state);

  IterationRecord rec;
  rec.iteration = state.iteration;
  rec.iterate = state.iterate;
  rec.objective_value = state.objective_value;
  rec.discrepancy_value = state.discrepancy_value;
  rec.projected_gradient_norm = projected_gradient_norm(model, state);
  rec.radius = state.radius;
  rec.rho = std::numeric_limits<double>::quiet_NaN();

  Eigen::Matrix3d hess =
      state.jacobian.transpose() * state.jacobian +
      model.lambda * Eigen::Matrix3d::Identity();
  if (model.lambda == 0.0) {
    hess += 1e-12 * Eigen::Matrix3d::Identity();  // eigenvalue floor
  }

  const Eigen::Vector3d a = triple_vec(state.iterate);
  Eigen::Vector3d lo, hi;
  lo[0] = std::max(-state.radius, model.box.beta_lo - a[0]);
  hi[0] = std::min(state.radius, model.box.beta_hi - a[0]);
  lo[1] = std::max(-state.radius, model.box.alpha_lo - a[1]);
  hi[1] = std::min(state.radius, model.box.alpha_hi - a[1]);
  lo[2] = std::max(-state.radius, model.box.gamma_lo - a[2]);
  hi[2] = std::min(state.radius, model.box.gamma_hi - a[2]);

  const Eigen::Vector3d p =
      solve_trust_region_subproblem(state.gradient, hess, lo, hi);
  rec.step_inf_norm = p.lpNorm<Eigen::Infinity>();
  rec.step_on_radius =
      rec.step_inf_norm >= state.radius - 1e-13 * std::max(1.0, state.radius);

  if (rec.step_inf_norm == 0.0) {
    // Constrained stationary point of the model: nothing to try.
    state.gradient_converged = true;
    state.history.push_back(rec);
    ++state.iteration;
    return;
  }

  const double predicted = -(state.gradient.dot(p) + 0.5 * p.dot(hess * p));
  if (predicted <= 0.0) {
    // Treated as a rejection with radius shrink.
    rec.model_degenerate = true;
    state.radius *= 0.25;
    state.history.push_back(rec);
    ++state.iteration;
    return;
  }
  if (predicted <= 4e-16 * (1.0 + std::fabs(state.objective_value))) {
    // The model's own predicted decrease is below the floating accuracy of
    // F: nothing measurable left to gain (the FD-gradient noise floor).
    state.model_floor = true;
    state.history.push_back(rec);
    ++state.iteration;
    return;
  }

  // a + p can land one ulp outside the box when p_i = hi_i exactly; the
  // projection restores exact feasibility without changing the step.
  const FractionalTriple trial = model.box.project(vec_triple(a + p));
  const double f_trial = objective(model, trial);
  const double rho = (state.objective_value - f_trial) / predicted;
  rec.rho = rho;

  if (rho < 0.25) {
    state.radius *= 0.25;
  } else if (rho > 0.75 && rec.step_on_radius) {
    state.radius = std::min(2.0 * state.radius, config.max_radius);
  }
  if (rho > config.eta) {
    state.iterate = trial;
    state.model_valid = false;
    rec.accepted = true;
    ++state.accepted;
  }
  state.history.push_back(rec);
  ++state.iteration;
}

EstimateReport estimate(const ResidualModel& model, const FractionalTriple& a0,
                        const TrustRegionConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  TrustRegionState state = make_state(model, a0, config);

  bool converged = false;
  bool floored = false;
  while (state.iteration < config.max_iterations) {
    ensure_model(model, state);
    if (projected_gradient_norm(model, state) <= config.gradient_tolerance) {
      converged = true;
      break;
    }
    trust_region_step(model, state, config);
    if (state.gradient_converged) {
      converged = true;
      break;
    }
    if (state.model_floor) {
      converged = true;
      floored = true;
      break;
    }
  }

  ensure_model(model, state);
  IterationRecord final_rec;
  final_rec.iteration = state.iteration;
  final_rec.iterate = state.iterate;
  final_rec.objective_value = state.objective_value;
  final_rec.discrepancy_value = state.discrepancy_value;
  final_rec.projected_gradient_norm = projected_gradient_norm(model, state);
  final_rec.radius = state.radius;
  final_rec.rho = std::numeric_limits<double>::quiet_NaN();
  state.history.push_back(final_rec);

  EstimateReport report;
  report.final_triple = state.iterate.canonical();
  report.final_discrepancy = discrepancy(model, report.final_triple);
  const Eigen::Vector3d af = triple_vec(report.final_triple);
  report.final_objective =
      report.final_discrepancy + 0.5 * model.lambda * af.squaredNorm();
  report.lambda = model.lambda;
  report.converged = converged;
  report.termination =
      converged ? (floored ? "model_floor" : "gradient") : "max_iterations";
  report.total_iterations = state.iteration;
  report.accepted_iterations = state.accepted;
  report.trace = std::move(state.history);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace fracdiff
