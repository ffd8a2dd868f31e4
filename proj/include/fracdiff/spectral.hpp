// Spectral forward solver for the double-order fractional diffusion problem
// on (-1,1) with homogeneous Dirichlet boundary: Helmholtz eigenpairs,
// truncated expansions of the initial condition, evaluation of the
// eigenfunction-series solution, and an L1-scheme validation check of the
// Caputo eigen-relation.
#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracdiff {

// The parameter point a = (beta, alpha, gamma); admissible region is the
// open set (0,1) x (0,2) x (0,2).
struct FractionalTriple {
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;

  bool admissible() const {
    return beta > 0.0 && beta < 1.0 && alpha > 0.0 && alpha < 2.0 &&
           gamma > 0.0 && gamma < 2.0;
  }
  // Reporting form with alpha <= gamma; the forward map is invariant under
  // the swap, so this is a pure relabeling.
  FractionalTriple canonical() const {
    return alpha <= gamma ? *this : FractionalTriple{beta, gamma, alpha};
  }
};

// Box Gamma = [beta_lo,beta_hi] x [alpha_lo,alpha_hi] x [gamma_lo,gamma_hi].
struct ParameterBox {
  double beta_lo = 0.01, beta_hi = 0.99;
  double alpha_lo = 0.01, alpha_hi = 1.99;
  double gamma_lo = 0.01, gamma_hi = 1.99;

  static ParameterBox standard() { return {}; }
  void validate() const;
  bool contains(const FractionalTriple& a) const {
    return a.beta >= beta_lo && a.beta <= beta_hi && a.alpha >= alpha_lo &&
           a.alpha <= alpha_hi && a.gamma >= gamma_lo && a.gamma <= gamma_hi;
  }
  FractionalTriple project(const FractionalTriple& a) const;
};

// psi_n(x) = sin(n pi (x+1)/2); exactly zero at x = +-1 and exactly +-1/0
// at x = 0 (argument reduction happens in units of pi).
double eigenfunction(int n, double x);

// Helmholtz eigenvalue (n pi / 2)^2.
double helmholtz_eigenvalue(int n);

// mu_n = (n pi/2)^alpha + (n pi/2)^gamma; symmetric in alpha <-> gamma.
double mode_eigenvalue(int n, const FractionalTriple& a);

struct SpectralMode {
  int n = 0;        // mode index >= 1
  double coeff = 0.0;  // <f, psi_n>
};

// Truncated expansion of an initial condition. Modes are sorted by index and
// unique; omitted modes are treated as exactly zero. Immutable once built.
class SpectralExpansion {
 public:
  // Dense coefficient list c_1..c_N (zeros are dropped).
  static SpectralExpansion from_coefficients(std::span<const double> coeffs);
  static SpectralExpansion from_modes(std::vector<SpectralMode> modes,
                                      double coeff_tolerance = 0.0);
  // c_n = int_{-1}^{1} f psi_n dx by adaptive quadrature, n = 1..truncation.
  static SpectralExpansion expand(const std::function<double(double)>& f,
                                  int truncation, double quad_tol);
  // Grows the truncation until the estimated coefficient tail drops below
  // tail_target (power-law fit on the last computed decade), capped.
  static SpectralExpansion expand_auto(const std::function<double(double)>& f,
                                       double quad_tol,
                                       double tail_target = 1e-8,
                                       int cap = 400);

  const std::vector<SpectralMode>& modes() const { return modes_; }
  double coeff_tolerance() const { return coeff_tolerance_; }
  int max_mode() const { return modes_.empty() ? 0 : modes_.back().n; }
  bool empty() const { return modes_.empty(); }
  // Prefix restriction to modes with n <= truncation (truncation studies).
  SpectralExpansion truncated(int truncation) const;
  // Value of the represented initial condition at x.
  double initial_value(double x) const;

 private:
  std::vector<SpectralMode> modes_;
  double coeff_tolerance_ = 0.0;
};

// u(a)(t, x) = sum_n E_beta(-mu_n t^beta) c_n psi_n(x).
double solution(const SpectralExpansion& exp, const FractionalTriple& a,
                double t, double x);

// Center trace u(a)(t_i, 0); only odd modes contribute, with the sign
// psi_n(0) = (-1)^{(n-1)/2}.
std::vector<double> trace_at_center(const SpectralExpansion& exp,
                                    const FractionalTriple& a,
                                    std::span<const double> times);

// Graded mesh t_j = T (j/M)^{2/beta}, j = 1..M.
std::vector<double> graded_mesh(double horizon, int points, double beta);

// Residual of the Caputo eigen-relation d_t^beta q + mu q = 0 for
// q(t) = E_beta(-mu t^beta), with d_t^beta discretized by the L1 scheme on
// the given mesh (t = 0 is prepended internally). The max over the full mesh
// is dominated by a refinement-independent constant at the first node, where
// the q' ~ t^{beta-1} singularity defeats linear interpolation; the interior
// maximum (t >= T/4) is the quantity that converges.
struct CaputoResult {
  std::vector<double> times;
  std::vector<double> residuals;
  double max_residual = 0.0;           // over the full mesh
  double interior_max_residual = 0.0;  // over nodes with t >= T/4
  double max_step = 0.0;               // includes the initial cell [0, t_1]
  double expected_truncation = 0.0;
  bool mesh_too_coarse = false;        // residual > 10x expected
};
CaputoResult caputo_check(const FractionalTriple& a, double mu,
                          std::span<const double> t_grid);

}  // namespace fracdiff
