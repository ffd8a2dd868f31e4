#include "fracdiff/inverse.hpp"

#include <cmath>

#include "fracdiff/mittag_leffler.hpp"

namespace fracdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_admissible(const FractionalTriple& a) {
  if (!a.admissible()) {
    throw std::domain_error(
        "inverse: parameters must lie in (0,1) x (0,2) x (0,2)");
  }
}
}  // namespace

void ResidualModel::validate() const {
  observations.validate();
  box.validate();
  if (lambda < 0.0) {
    throw std::invalid_argument("inverse: lambda must be >= 0");
  }
  for (double h : fd_steps) {
    if (!(h > 0.0)) {
      throw std::invalid_argument("inverse: fd steps must be > 0");
    }
  }
  if (expansion.empty()) {
    throw std::invalid_argument("inverse: expansion has no modes");
  }
}

double discrepancy(const ResidualModel& model, const FractionalTriple& a) {
  check_admissible(a);
  const ObservationSet& obs = model.observations;
  const std::vector<double> u = trace_at_center(model.expansion, a, obs.times);
  double acc = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double d = u[i] - obs.values[i];
    acc += obs.weights[i] * d * d;
  }
  return 0.5 * acc;
}

Eigen::VectorXd residual_vector(const ResidualModel& model,
                                const FractionalTriple& a) {
  check_admissible(a);
  const ObservationSet& obs = model.observations;
  const std::vector<double> u = trace_at_center(model.expansion, a, obs.times);
  Eigen::VectorXd r(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    r[static_cast<Eigen::Index>(i)] =
        std::sqrt(obs.weights[i]) * (u[i] - obs.values[i]);
  }
  return r;
}

double objective(const ResidualModel& model, const FractionalTriple& a) {
  const double reg =
      a.beta * a.beta + a.alpha * a.alpha + a.gamma * a.gamma;
  return discrepancy(model, a) + 0.5 * model.lambda * reg;
}

Eigen::Matrix<double, Eigen::Dynamic, 3> jacobian_fd(
    const ResidualModel& model, const FractionalTriple& a) {
  check_admissible(a);
  const std::array<FractionalTriple, 3> bumped = {
      FractionalTriple{a.beta + model.fd_steps[0], a.alpha, a.gamma},
      FractionalTriple{a.beta, a.alpha + model.fd_steps[1], a.gamma},
      FractionalTriple{a.beta, a.alpha, a.gamma + model.fd_steps[2]}};
  for (const FractionalTriple& b : bumped) {
    if (!b.admissible()) {
      throw FdStepError(
          "jacobian_fd: forward step leaves the admissible open set");
    }
  }
  const Eigen::VectorXd base = residual_vector(model, a);
  Eigen::Matrix<double, Eigen::Dynamic, 3> jac(base.size(), 3);
  for (int j = 0; j < 3; ++j) {
    const Eigen::VectorXd shifted = residual_vector(model, bumped[j]);
    jac.col(j) = (shifted - base) / model.fd_steps[static_cast<std::size_t>(j)];
  }
  return jac;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> jacobian_analytic_space(
    const ResidualModel& model, const FractionalTriple& a) {
  check_admissible(a);
  const ObservationSet& obs = model.observations;
  Eigen::Matrix<double, Eigen::Dynamic, 2> jac(
      static_cast<Eigen::Index>(obs.size()), 2);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double tb = std::pow(obs.times[i], a.beta);
    const double sw = std::sqrt(obs.weights[i]);
    double d_alpha = 0.0;
    double d_gamma = 0.0;
    for (const SpectralMode& m : model.expansion.modes()) {
      if (m.n % 2 == 0) continue;
      const double sign = (((m.n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      const double h = 0.5 * m.n * kPi;
      const double lh = std::log(h);
      const double deriv =
          mittag_leffler_deriv(a.beta, 1.0, -mode_eigenvalue(m.n, a) * tb);
      const double common = deriv * m.coeff * sign;
      d_alpha += std::pow(h, a.alpha) * lh * common;
      d_gamma += std::pow(h, a.gamma) * lh * common;
    }
    jac(static_cast<Eigen::Index>(i), 0) = sw * (-tb) * d_alpha;
    jac(static_cast<Eigen::Index>(i), 1) = sw * (-tb) * d_gamma;
  }
  return jac;
}

}  // namespace fracdiff
