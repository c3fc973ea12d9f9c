#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nodal/metrics.hpp"

namespace nodal {

// ---- potentials -------------------------------------------------------------

/// Potential q on the closed unit disc with its sup norm and the growth
/// quantity N = max (|q| + rho |q_rho|), both measured on a 64 x 128 polar grid.
struct Potential {
  std::string name;
  std::function<double(std::complex<double>)> q;
  double sup_norm = 0.0;
  double radial_derivative_bound = 0.0;

  double operator()(std::complex<double> z) const { return q(z); }
  Potential scaled(double t) const;
};

/// Wraps an evaluator and measures its norms.
Potential make_potential(std::string name, std::function<double(std::complex<double>)> q);

Potential constant_potential(double c);
Potential gaussian_bump_potential(double amplitude, std::complex<double> center = {0.2, -0.1},
                                  double width = 0.3);
/// sum_{a,b <= degree} c_ab cos(a x + b y + phase_ab), rescaled to the given sup norm.
Potential seeded_trig_potential(double sup_norm, std::uint64_t seed, int degree = 2);

/// Registry names: "constant", "gaussian-bump", "seeded-trig".
Potential potential_from_name(const std::string& name, double amplitude, std::uint64_t seed = 0);

/// CSV grid: a header line "n_rho,n_theta" followed by n_rho * n_theta values
/// in row-major polar order, rho_i = i / (n_rho - 1), theta_k = 2 pi k / n_theta.
/// Bilinear interpolation, periodic in theta.
Potential potential_from_csv_text(const std::string& text, const std::string& name = "csv");
Potential potential_from_csv(const std::string& path);

// ---- polar spectral fields --------------------------------------------------

/// Chebyshev-Lobatto radii rho_i = (1 - cos(pi i / (n_rho - 1))) / 2 and
/// equispaced angles. Angular modes |m| < n_theta / 2 are kept.
struct SolverGrid {
  int n_rho = 48;
  int n_theta = 64;

  double rho(int i) const;
  double theta(int k) const;
  int modes() const { return n_theta / 2; }
};

/// Real field on a SolverGrid, interpolated barycentrically in rho and by
/// Fourier series in theta.
class PolarField {
public:
  PolarField() = default;
  PolarField(SolverGrid grid, std::vector<double> values);

  static PolarField from_function(const RealField& f, SolverGrid grid = {});

  const SolverGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double at(int i, int k) const { return values_[static_cast<std::size_t>(i) * grid_.n_theta + k]; }

  double operator()(std::complex<double> z) const;
  /// (f_x, f_y) at z != 0.
  std::complex<double> gradient(std::complex<double> z) const;
  /// Laplacian at the grid nodes; the rho = 0 row is left at 0.
  std::vector<double> laplacian_at_nodes() const;
  std::vector<double> radial_derivative_at_nodes() const;
  std::vector<double> angular_derivative_at_nodes() const;

  double sup_norm() const;
  RealField as_field() const;

  /// Angular Fourier coefficient m of row i.
  std::complex<double> mode(int i, int m) const { return modes_[static_cast<std::size_t>(i) * grid_.modes() + m]; }

private:
  SolverGrid grid_;
  std::vector<double> values_;
  std::vector<std::complex<double>> modes_;  // row-major, m = 0..modes()-1
  std::vector<std::complex<double>> dmodes_;  // radial derivative of the modes

  std::vector<double> synthesize(const std::vector<std::complex<double>>& modes) const;
};

/// Green operator of the unit disc, F = (1/2 pi) int log|(1 - z conj w) / (z - w)| g(w) dA(w),
/// so Delta F = -g and F = 0 on the circle. Each angular mode is integrated
/// against the exact mode kernel, with the radial integral split at s = rho.
class GreenSolver {
public:
  explicit GreenSolver(SolverGrid grid = {}, int gauss_nodes = 48);
  const SolverGrid& grid() const noexcept { return grid_; }
  PolarField apply(const PolarField& g) const;

private:
  SolverGrid grid_;
  std::shared_ptr<const std::vector<std::vector<double>>> kernels_;  // per mode, n_rho x n_rho; shared per grid
};

PolarField green_potential(const RealField& g, SolverGrid grid = {});

/// max |Delta F + g| / max(|g|) over nodes with rho > 0.
double poisson_residual(const PolarField& F, const PolarField& g);

// ---- positive solution ------------------------------------------------------

struct PositiveSolutionOptions {
  double epsilon0 = 0.1;
  double tolerance = 1e-12;
  int max_iterations = 200;
  SolverGrid grid{};
};

struct PositiveSolution {
  PolarField phi;
  double residual_norm = 0.0;  // max |Delta phi + q phi| / max |phi|
  int iteration_count = 0;
  std::vector<double> iterate_norms;  // ||F_i||, i = 0, 1, ...
  double q_norm = 0.0;
  double c0_measured = 0.0;  // max ||F_{i+1}|| / (||q|| ||F_i||)
  double c1_measured = 0.0;  // (1 - min phi) / ||q||
  double min_phi = 1.0;
  double max_phi = 1.0;
};

/// F_0 = 1, F_{i+1} = Green(q F_i), psi = sum F_i, phi = psi / max psi.
PositiveSolution positive_solution(const Potential& q, const PositiveSolutionOptions& opt = {});

/// max |Delta F + q F| / max |F| over nodes with rho > 0.
double schrodinger_residual(const PolarField& F, const Potential& q);

/// Solution of Delta F + q F = 0 with F = boundary on the circle: harmonic
/// extension plus Green iteration.
PolarField solve_dirichlet(const Potential& q, const RealField& boundary, SolverGrid grid = {},
                           double tolerance = 1e-13, int max_iterations = 400);

/// Solution with boundary values phi * Re W, W(z) = sum_n w_n z^n.
PolarField manufactured_solution(const Potential& q, const PolarField& phi,
                                 const std::vector<std::complex<double>>& W);

struct SeededSolution {
  Potential q;
  PolarField F;
  std::vector<std::complex<double>> W;
};

/// Seeded trig potential of the given norm and a seeded boundary polynomial
/// of degree <= max_degree with W(0) = 0.
SeededSolution seeded_solution(std::uint64_t seed, double q_norm, int max_degree = 5,
                               SolverGrid grid = {});

// ---- Beltrami coefficient ---------------------------------------------------

struct BeltramiField {
  int n_r = 0, n_theta = 0;                // cell centres rho = (i + 1/2) / n_r
  std::vector<std::complex<double>> mu;    // 0 on excluded cells
  std::vector<double> phi;
  std::vector<char> excluded;
  std::size_t excluded_count = 0;
  double sup_mu = 0.0;
  double K = 1.0;                           // (1 + sup|mu|) / (1 - sup|mu|)
  double modulus_identity_error = 0.0;      // max ||mu| - (1 - phi^2) / (1 + phi^2)|
};

/// mu = ((1 - phi^2) / (1 + phi^2)) (u_x + i u_y) / (u_x - i u_y), u = F / phi,
/// on cells with |grad u| >= threshold * max |grad u|.
BeltramiField beltrami_field(const PolarField& F, const PolarField& phi, PolarGridSpec cells = {100, 100},
                             double threshold = 1e-8);

/// max |div(phi^2 grad u)| / max |phi^2 grad u| over nodes with rho > 0, u = F / phi.
double divergence_residual(const PolarField& F, const PolarField& phi);

// ---- frequency function -----------------------------------------------------

struct FrequencyOptions {
  int n_tau = 64;
  int n_phi = 128;
};

/// J(r) = int_0^r cosh^2(gamma sqrt(r^2 - s^2)) s / sqrt(r^2 - s^2) (int F(s, .)^2) ds,
/// integrated in s = r sin(tau).
double frequency_J(const RealField& F, double gamma, double r, const FrequencyOptions& opt = {});
double frequency_J(const RealField& F, const Potential& q, double r, const FrequencyOptions& opt = {});

struct FrequencyProfile {
  std::vector<double> radii;  // geometric
  std::vector<double> J;
  double gamma = 0.0;
  double quad_error = 0.0;    // max relative change of J under doubled quadrature
};

FrequencyProfile frequency_profile(const RealField& F, double gamma, double r_min = 1.0 / 64,
                                   double r_max = 0.5, int count = 16, const FrequencyOptions& opt = {});

/// max over interior k of -(log J_{k+1} - 2 log J_k + log J_{k-1}) / (Delta log r)^2.
double log_convexity_check(const FrequencyProfile& profile);
/// 1e-6 plus the profile's quadrature error.
double convexity_tolerance(const FrequencyProfile& profile);

// ---- three circles and elliptic bounds --------------------------------------

struct ThreeCircles {
  double lhs = 0.0;       // M(2s) / M(s)
  double rhs_core = 0.0;  // M(8r) / M(r)
  double N = 0.0;
};

ThreeCircles three_circles_check(const RealField& F, const Potential& q, double s, double r,
                                 PolarGridSpec grid = {64, 256});

/// lhs <= c1 exp(c2 sqrt N) rhs_core.
struct ThreeCirclesFit {
  double c1 = 1.0;
  double c2 = 1.0;
  bool complies(const ThreeCircles& t) const;
};

/// c2 fixed; c1 is twice the smallest constant covering the corpus.
ThreeCirclesFit calibrate_three_circles(const std::vector<ThreeCircles>& corpus, double c2 = 1.0);

struct EllipticSandwich {
  double r = 0.0;
  double lower_core = 0.0;  // exp(-sqrt N r) sqrt(J(r) / r)
  double M = 0.0;           // max over r D of |F|
  double upper_core = 0.0;  // N sqrt(J(2r) / 2r)
  double ratio_lower() const { return M / lower_core; }
  double ratio_upper() const { return M / upper_core; }
};

EllipticSandwich elliptic_sandwich_check(const RealField& F, const Potential& q, double r,
                                         PolarGridSpec grid = {64, 256});

// ---- ODE model --------------------------------------------------------------

/// Dense symmetric matrix, row-major.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  static SymMatrix identity(int n, double scale = 1.0);
};

/// A A^T / n with A standard Gaussian.
SymMatrix random_psd(int n, std::uint64_t seed);

struct ToyODEResult {
  double max_violation = 0.0;   // max of -(second difference of log(|h|^2 / 2))
  double final_log_norm = 0.0;  // log |h(0)|
  int steps = 0;
};

/// h'' = L(t) h on [-T, 0], h(-T) = eps v, h'(-T) = eps L(-T)^{1/2} v, v the
/// normalised all-ones vector; RK4 with log-space renormalisation.
ToyODEResult toy_ode_convexity(const std::function<SymMatrix(double)>& L, int dim, double T,
                               double eps = 1e-10, int steps = 4000);
/// L(t) = L0 + (t + T) L1.
ToyODEResult toy_ode_convexity(const SymMatrix& L0, const SymMatrix& L1, double T,
                               double eps = 1e-10, int steps = 4000);

}  // namespace nodal
