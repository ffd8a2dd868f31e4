#include "fracdiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdiff/mittag_leffler.hpp"
#include "fracdiff/quadrature.hpp"
#include "fracdiff/special.hpp"

namespace fracdiff {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_mode_index(int n) {
  if (n < 1) throw std::invalid_argument("spectral: mode index must be >= 1");
}
}  // namespace

void ParameterBox::validate() const {
  const bool ok = 0.0 < beta_lo && beta_lo <= beta_hi && beta_hi < 1.0 &&
                  0.0 < alpha_lo && alpha_lo <= alpha_hi && alpha_hi < 2.0 &&
                  0.0 < gamma_lo && gamma_lo <= gamma_hi && gamma_hi < 2.0;
  if (!ok) {
    throw std::invalid_argument(
        "parameter box must satisfy 0 < beta_lo <= beta_hi < 1 and "
        "0 < lo <= hi < 2 for alpha and gamma");
  }
}

FractionalTriple ParameterBox::project(const FractionalTriple& a) const {
  return {std::clamp(a.beta, beta_lo, beta_hi),
          std::clamp(a.alpha, alpha_lo, alpha_hi),
          std::clamp(a.gamma, gamma_lo, gamma_hi)};
}

double eigenfunction(int n, double x) {
  check_mode_index(n);
  if (x == 1.0 || x == -1.0) return 0.0;
  return sin_pi(0.5 * static_cast<double>(n) * (x + 1.0));
}

double helmholtz_eigenvalue(int n) {
  check_mode_index(n);
  const double h = 0.5 * static_cast<double>(n) * kPi;
  return h * h;
}

double mode_eigenvalue(int n, const FractionalTriple& a) {
  check_mode_index(n);
  const double h = 0.5 * static_cast<double>(n) * kPi;
  return std::pow(h, a.alpha) + std::pow(h, a.gamma);
}

SpectralExpansion SpectralExpansion::from_coefficients(
    std::span<const double> coeffs) {
  std::vector<SpectralMode> modes;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) modes.push_back({static_cast<int>(i) + 1, coeffs[i]});
  }
  return from_modes(std::move(modes));
}

SpectralExpansion SpectralExpansion::from_modes(std::vector<SpectralMode> modes,
                                                double coeff_tolerance) {
  std::sort(modes.begin(), modes.end(),
            [](const SpectralMode& a, const SpectralMode& b) { return a.n < b.n; });
  for (std::size_t i = 0; i < modes.size(); ++i) {
    check_mode_index(modes[i].n);
    if (i > 0 && modes[i].n == modes[i - 1].n) {
      throw std::invalid_argument("spectral: duplicate mode index");
    }
  }
  SpectralExpansion out;
  out.modes_ = std::move(modes);
  out.coeff_tolerance_ = coeff_tolerance;
  return out;
}

SpectralExpansion SpectralExpansion::expand(
    const std::function<double(double)>& f, int truncation, double quad_tol) {
  if (truncation < 1) {
    throw std::invalid_argument("spectral: truncation must be >= 1");
  }
  if (!(quad_tol > 0.0)) {
    throw std::invalid_argument("spectral: quadrature tolerance must be > 0");
  }
  std::vector<SpectralMode> modes;
  modes.reserve(static_cast<std::size_t>(truncation));
  for (int n = 1; n <= truncation; ++n) {
    // One panel per half-wave keeps the oscillatory factor resolved before
    // the adaptive refinement starts.
    const int panels = std::max(4, n);
    std::vector<double> breaks(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) {
      breaks[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / panels;
    }
    const auto integrand = [&f, n](double x) {
      return f(x) * eigenfunction(n, x);
    };
    const double c = integrate_segmented(integrand, breaks, quad_tol).value;
    modes.push_back({n, c});
  }
  return from_modes(std::move(modes), quad_tol);
}

SpectralExpansion SpectralExpansion::expand_auto(
    const std::function<double(double)>& f, double quad_tol,
    double tail_target, int cap) {
  int truncation = std::min(50, cap);
  for (;;) {
    SpectralExpansion exp = expand(f, truncation, quad_tol);
    // Estimate the omitted-coefficient mass from a power-law fit |c_n| ~ n^-p
    // over the last computed decade.
    const int decade_lo = std::max(1, truncation - truncation / 10);
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    int count = 0;
    for (const SpectralMode& m : exp.modes_) {
      if (m.n < decade_lo || std::fabs(m.coeff) <= quad_tol) continue;
      const double lx = std::log(static_cast<double>(m.n));
      const double ly = std::log(std::fabs(m.coeff));
      sxx += lx * lx;
      sxy += lx * ly;
      sx += lx;
      sy += ly;
      ++count;
    }
    double tail;
    if (count == 0) {
      tail = 0.0;  // the whole decade is below the quadrature floor
    } else if (count == 1) {
      tail = std::fabs(sy) * static_cast<double>(truncation);  // no slope info
    } else {
      const double denom = count * sxx - sx * sx;
      const double p = denom > 0.0 ? -(count * sxy - sx * sy) / denom : 0.0;
      const double c_at_n = std::exp((sy + p * sx) / count);
      tail = p > 1.0
                 ? c_at_n * std::pow(static_cast<double>(truncation), 1.0 - p) /
                       (p - 1.0)
                 : std::numeric_limits<double>::infinity();
    }
    if (tail < tail_target || truncation >= cap) return exp;
    truncation = std::min(2 * truncation, cap);
  }
}

SpectralExpansion SpectralExpansion::truncated(int truncation) const {
  std::vector<SpectralMode> kept;
  for (const SpectralMode& m : modes_) {
    if (m.n <= truncation) kept.push_back(m);
  }
  return from_modes(std::move(kept), coeff_tolerance_);
}

double SpectralExpansion::initial_value(double x) const {
  double sum = 0.0;
  for (const SpectralMode& m : modes_) sum += m.coeff * eigenfunction(m.n, x);
  return sum;
}

double solution(const SpectralExpansion& exp, const FractionalTriple& a,
                double t, double x) {
  if (exp.empty()) {
    throw std::invalid_argument("spectral: expansion has no modes");
  }
  if (t < 0.0) throw std::invalid_argument("spectral: t must be >= 0");
  if (x < -1.0 || x > 1.0) {
    throw std::invalid_argument("spectral: x must lie in [-1, 1]");
  }
  if (x == 1.0 || x == -1.0) return 0.0;
  const double tb = std::pow(t, a.beta);
  double sum = 0.0;
  for (const SpectralMode& m : exp.modes()) {
    const double decay = mittag_leffler(a.beta, 1.0, -mode_eigenvalue(m.n, a) * tb);
    sum += decay * m.coeff * eigenfunction(m.n, x);
  }
  return sum;
}

std::vector<double> trace_at_center(const SpectralExpansion& exp,
                                    const FractionalTriple& a,
                                    std::span<const double> times) {
  if (exp.empty()) {
    throw std::invalid_argument("spectral: expansion has no modes");
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw std::invalid_argument("spectral: t must be >= 0");
    const double tb = std::pow(t, a.beta);
    double sum = 0.0;
    for (const SpectralMode& m : exp.modes()) {
      if (m.n % 2 == 0) continue;  // psi_n(0) = 0 for even n
      const double sign = (((m.n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
      const double decay =
          mittag_leffler(a.beta, 1.0, -mode_eigenvalue(m.n, a) * tb);
      sum += sign * decay * m.coeff;
    }
    out.push_back(sum);
  }
  return out;
}

std::vector<double> graded_mesh(double horizon, int points, double beta) {
  if (!(horizon > 0.0) || points < 1 || !(beta > 0.0)) {
    throw std::invalid_argument("graded_mesh: need horizon > 0, points >= 1, beta > 0");
  }
  std::vector<double> mesh(static_cast<std::size_t>(points));
  const double r = 2.0 / beta;
  for (int j = 1; j <= points; ++j) {
    mesh[static_cast<std::size_t>(j) - 1] =
        horizon * std::pow(static_cast<double>(j) / points, r);
  }
  return mesh;
}

CaputoResult caputo_check(const FractionalTriple& a, double mu,
                          std::span<const double> t_grid) {
  if (mu < 0.0) throw std::invalid_argument("caputo_check: mu must be >= 0");
  if (t_grid.empty() || t_grid.front() <= 0.0) {
    throw std::invalid_argument("caputo_check: mesh must start above 0");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] <= t_grid[i - 1]) {
      throw std::invalid_argument("caputo_check: mesh must be strictly increasing");
    }
  }
  const double beta = a.beta;
  const double horizon = t_grid.back();

  // Nodes with t_0 = 0 prepended; q_j = E_beta(-mu t_j^beta).
  std::vector<double> t(t_grid.size() + 1);
  std::vector<double> q(t_grid.size() + 1);
  t[0] = 0.0;
  q[0] = 1.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    t[i + 1] = t_grid[i];
    q[i + 1] = mittag_leffler(beta, 1.0, -mu * std::pow(t_grid[i], beta));
  }

  CaputoResult out;
  out.times.assign(t_grid.begin(), t_grid.end());
  out.residuals.resize(t_grid.size());
  for (std::size_t i = 1; i < t.size(); ++i) {
    out.max_step = std::max(out.max_step, t[i] - t[i - 1]);
  }

  // L1 scheme on a nonuniform mesh:
  //   d_t^beta q(t_j) ~ 1/Gamma(2-beta) * sum_{i=1..j} (q_i - q_{i-1})/h_i *
  //                     [(t_j - t_{i-1})^{1-beta} - (t_j - t_i)^{1-beta}]
  const double inv_g = recip_gamma(2.0 - beta);
  const double pw = 1.0 - beta;
  for (std::size_t j = 1; j < t.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= j; ++i) {
      const double slope = (q[i] - q[i - 1]) / (t[i] - t[i - 1]);
      const double wl = std::pow(t[j] - t[i - 1], pw);
      const double wr = (i == j) ? 0.0 : std::pow(t[j] - t[i], pw);
      acc += slope * (wl - wr);
    }
    const double l1 = acc * inv_g;
    out.residuals[j - 1] = std::fabs(l1 + mu * q[j]);
  }

  for (std::size_t i = 0; i < out.residuals.size(); ++i) {
    out.max_residual = std::max(out.max_residual, out.residuals[i]);
    if (out.times[i] >= 0.25 * horizon) {
      out.interior_max_residual =
          std::max(out.interior_max_residual, out.residuals[i]);
    }
  }

  // A priori scale: the first-node constant mu |1 - 1/(Gamma(1+beta)Gamma(2-beta))|
  // plus the smooth-region truncation ~ mu h^{min(1, 2-beta)}.
  const double corner =
      mu *
      std::fabs(1.0 - 1.0 / (std::tgamma(1.0 + beta) * std::tgamma(2.0 - beta)));
  out.expected_truncation =
      corner +
      mu * std::pow(out.max_step / horizon, std::min(1.0, 2.0 - beta));
  // The estimate presumes the first node still sees the initial transient;
  // a first node with mu t_1^beta >= 1 has skipped it entirely.
  const bool transient_skipped = mu * std::pow(t[1], beta) >= 1.0;
  out.mesh_too_coarse =
      out.max_residual > 10.0 * out.expected_truncation || transient_skipped;
  return out;
}

}  // namespace fracdiff
