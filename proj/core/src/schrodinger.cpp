#include "nodal/schrodinger.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/parallel.hpp"
#include "nodal/quadrature.hpp"

namespace nodal {
namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

// Chebyshev-Lobatto data on [0, 1]: nodes, barycentric weights and the
// differentiation matrix.
struct Chebyshev {
  std::vector<double> x, w, D;
};

const Chebyshev& chebyshev(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Chebyshev>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto c = std::make_unique<Chebyshev>();
    c->x.resize(n);
    c->w.resize(n);
    for (int i = 0; i < n; ++i) {
      c->x[i] = 0.5 * (1.0 - std::cos(kPi * i / (n - 1)));
      c->w[i] = (i % 2 == 0 ? 1.0 : -1.0) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }
    c->D.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      double diag = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double d = (c->w[j] / c->w[i]) / (c->x[i] - c->x[j]);
        c->D[static_cast<std::size_t>(i) * n + j] = d;
        diag -= d;
      }
      c->D[static_cast<std::size_t>(i) * n + i] = diag;
    }
    slot = std::move(c);
  }
  return *slot;
}

// Barycentric interpolation weights l_j(x).
std::vector<double> lagrange_weights(const Chebyshev& c, double x) {
  const int n = static_cast<int>(c.x.size());
  std::vector<double> l(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (std::abs(x - c.x[j]) < 1e-15) {
      l[j] = 1.0;
      return l;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    l[j] = c.w[j] / (x - c.x[j]);
    denom += l[j];
  }
  for (auto& v : l) v /= denom;
  return l;
}

std::vector<double> node_values(const RealField& f, const SolverGrid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.n_rho) * g.n_theta);
  parallel_for(static_cast<std::size_t>(g.n_rho), [&](std::size_t i) {
    for (int k = 0; k < g.n_theta; ++k) {
      v[i * g.n_theta + k] = f(std::polar(g.rho(static_cast<int>(i)), g.theta(k)));
    }
  });
  return v;
}

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void check_grid(const SolverGrid& g) {
  if (g.n_rho < 4 || g.n_theta < 8 || g.n_theta % 2 != 0) {
    throw DomainError("SolverGrid: need n_rho >= 4 and even n_theta >= 8");
  }
}

}  // namespace

// ---- potentials ---------------------------------------------------------------

Potential make_potential(std::string name, std::function<double(std::complex<double>)> q) {
  Potential p;
  p.name = std::move(name);
  p.q = std::move(q);
  const int nr = 64, nt = 128;
  const double h = 1e-6;
  for (int i = 0; i < nr; ++i) {
    const double rho = static_cast<double>(i) / (nr - 1);
    for (int k = 0; k < nt; ++k) {
      const double th = 2.0 * kPi * k / nt;
      const double v = p.q(std::polar(rho, th));
      const double lo = std::max(rho - h, 0.0), hi = std::min(rho + h, 1.0);
      const double qr = (p.q(std::polar(hi, th)) - p.q(std::polar(lo, th))) / (hi - lo);
      p.sup_norm = std::max(p.sup_norm, std::abs(v));
      p.radial_derivative_bound = std::max(p.radial_derivative_bound, std::abs(v) + rho * std::abs(qr));
    }
  }
  return p;
}

Potential Potential::scaled(double t) const {
  Potential p = *this;
  auto base = q;
  p.q = [base, t](cplx z) { return t * base(z); };
  p.sup_norm *= std::abs(t);
  p.radial_derivative_bound *= std::abs(t);
  p.name = name + "*" + std::to_string(t);
  return p;
}

Potential constant_potential(double c) {
  Potential p;
  p.name = "constant";
  p.q = [c](cplx) { return c; };
  p.sup_norm = std::abs(c);
  p.radial_derivative_bound = std::abs(c);
  return p;
}

Potential gaussian_bump_potential(double amplitude, std::complex<double> center, double width) {
  if (!(width > 0.0)) throw DomainError("gaussian_bump_potential: width must be positive");
  return make_potential("gaussian-bump", [=](cplx z) {
    return amplitude * std::exp(-std::norm(z - center) / (2.0 * width * width));
  });
}

Potential seeded_trig_potential(double sup_norm, std::uint64_t seed, int degree) {
  if (degree < 0) throw DomainError("seeded_trig_potential: negative degree");
  auto rng = substream(seed, 0x7129);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  struct Term {
    int a, b;
    double c, p;
  };
  std::vector<Term> terms;
  for (int a = 0; a <= degree; ++a) {
    for (int b = -degree; b <= degree; ++b) {
      const double c = gauss(rng) / (1.0 + a + std::abs(b));
      terms.push_back({a, b, c, phase(rng)});
    }
  }
  auto raw = [terms](cplx z) {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * std::cos(t.a * z.real() + t.b * z.imag() + t.p);
    return s;
  };
  Potential base = make_potential("seeded-trig", raw);
  if (sup_norm == 0.0 || base.sup_norm == 0.0) return constant_potential(0.0);
  Potential p = base.scaled(sup_norm / base.sup_norm);
  p.name = "seeded-trig";
  return p;
}

Potential potential_from_name(const std::string& name, double amplitude, std::uint64_t seed) {
  if (name == "constant") return constant_potential(amplitude);
  if (name == "gaussian-bump") return gaussian_bump_potential(amplitude);
  if (name == "seeded-trig") return seeded_trig_potential(amplitude, seed);
  throw DomainError("unknown potential '" + name + "' (constant, gaussian-bump, seeded-trig)");
}

Potential potential_from_csv_text(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DomainError("potential csv: empty input");
  int n_rho = 0, n_theta = 0;
  {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream h(line);
    if (!(h >> n_rho >> n_theta) || n_rho < 2 || n_theta < 1) {
      throw DomainError("potential csv: header must be 'n_rho,n_theta' with n_rho >= 2");
    }
  }
  std::vector<double> v;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::string tok;
    while (row >> tok) {
      try {
        v.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw DomainError("potential csv: bad value '" + tok + "'");
      }
    }
  }
  if (v.size() != static_cast<std::size_t>(n_rho) * n_theta) {
    throw DomainError("potential csv: expected " + std::to_string(n_rho * n_theta) + " values, got " +
                      std::to_string(v.size()));
  }
  auto eval = [v, n_rho, n_theta](cplx z) {
    const double rho = std::min(std::abs(z), 1.0) * (n_rho - 1);
    double th = std::arg(z);
    if (th < 0.0) th += 2.0 * kPi;
    th *= n_theta / (2.0 * kPi);
    const int i = std::min(static_cast<int>(rho), n_rho - 2);
    const int k = static_cast<int>(th) % n_theta;
    const double fr = rho - i, ft = th - std::floor(th);
    auto at = [&](int a, int b) { return v[static_cast<std::size_t>(a) * n_theta + (b % n_theta)]; };
    return (1 - fr) * ((1 - ft) * at(i, k) + ft * at(i, k + 1)) + fr * ((1 - ft) * at(i + 1, k) + ft * at(i + 1, k + 1));
  };
  return make_potential(name, eval);
}

Potential potential_from_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("potential csv: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return potential_from_csv_text(ss.str(), path);
}

// ---- polar fields -------------------------------------------------------------

double SolverGrid::rho(int i) const { return chebyshev(n_rho).x[i]; }
double SolverGrid::theta(int k) const { return 2.0 * kPi * k / n_theta; }

PolarField::PolarField(SolverGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  check_grid(grid_);
  if (values_.size() != static_cast<std::size_t>(grid_.n_rho) * grid_.n_theta) {
    throw DomainError("PolarField: value count does not match the grid");
  }
  const int n = grid_.n_rho, M = grid_.modes();
  modes_.assign(static_cast<std::size_t>(n) * M, 0.0);
  std::vector<cplx> row(grid_.n_theta);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < grid_.n_theta; ++k) row[k] = at(i, k);
    fft_inplace(row, true);
    for (int m = 0; m < M; ++m) modes_[static_cast<std::size_t>(i) * M + m] = row[m] / static_cast<double>(grid_.n_theta);
  }
  const auto& D = chebyshev(n).D;
  dmodes_.assign(modes_.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = D[static_cast<std::size_t>(i) * n + j];
      for (int m = 0; m < M; ++m) dmodes_[static_cast<std::size_t>(i) * M + m] += d * modes_[static_cast<std::size_t>(j) * M + m];
    }
  }
}

PolarField PolarField::from_function(const RealField& f, SolverGrid grid) {
  check_grid(grid);
  return PolarField(grid, node_values(f, grid));
}

std::vector<double> PolarField::synthesize(const std::vector<cplx>& modes) const {
  const int n = grid_.n_rho, M = grid_.modes(), nt = grid_.n_theta;
  std::vector<double> out(static_cast<std::size_t>(n) * nt);
  std::vector<cplx> row(nt);
  for (int i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = modes[static_cast<std::size_t>(i) * M].real();
    for (int m = 1; m < M; ++m) {
      row[m] = modes[static_cast<std::size_t>(i) * M + m];
      row[nt - m] = std::conj(row[m]);
    }
    fft_inplace(row, false);
    for (int k = 0; k < nt; ++k) out[static_cast<std::size_t>(i) * nt + k] = row[k].real();
  }
  return out;
}

double PolarField::operator()(std::complex<double> z) const {
  const double rho = std::abs(z);
  if (rho > 1.0 + 1e-12) throw DomainError("PolarField: evaluation outside the unit disc");
  const auto l = lagrange_weights(chebyshev(grid_.n_rho), std::min(rho, 1.0));
  const int M = grid_.modes();
  const double th = std::arg(z);
  double acc = 0.0;
  for (int m = 0; m < M; ++m) {
    cplx fm = 0.0;
    for (int i = 0; i < grid_.n_rho; ++i) {
      if (l[i] != 0.0) fm += l[i] * modes_[static_cast<std::size_t>(i) * M + m];
    }
    acc += m == 0 ? fm.real() : 2.0 * (fm * std::polar(1.0, m * th)).real();
  }
  return acc;
}

std::complex<double> PolarField::gradient(std::complex<double> z) const {
  const double rho = std::abs(z);
  if (rho == 0.0 || rho > 1.0 + 1e-12) throw DomainError("PolarField::gradient: need 0 < |z| <= 1");
  const auto l = lagrange_weights(chebyshev(grid_.n_rho), std::min(rho, 1.0));
  const int M = grid_.modes();
  const double th = std::arg(z);
  double fr = 0.0, ft = 0.0;
  for (int m = 0; m < M; ++m) {
    cplx fm = 0.0, dm = 0.0;
    for (int i = 0; i < grid_.n_rho; ++i) {
      if (l[i] == 0.0) continue;
      fm += l[i] * modes_[static_cast<std::size_t>(i) * M + m];
      dm += l[i] * dmodes_[static_cast<std::size_t>(i) * M + m];
    }
    const cplx e = std::polar(1.0, m * th);
    fr += m == 0 ? dm.real() : 2.0 * (dm * e).real();
    if (m > 0) ft += 2.0 * (cplx(0.0, m) * fm * e).real();
  }
  const double c = std::cos(th), s = std::sin(th);
  return {c * fr - s * ft / rho, s * fr + c * ft / rho};
}

std::vector<double> PolarField::laplacian_at_nodes() const {
  const int n = grid_.n_rho, M = grid_.modes();
  const auto& C = chebyshev(n);
  std::vector<cplx> lap(modes_.size(), 0.0);
  for (int i = 1; i < n; ++i) {
    const double r = C.x[i];
    for (int m = 0; m < M; ++m) {
      cplx d2 = 0.0;
      for (int j = 0; j < n; ++j) d2 += C.D[static_cast<std::size_t>(i) * n + j] * dmodes_[static_cast<std::size_t>(j) * M + m];
      const std::size_t idx = static_cast<std::size_t>(i) * M + m;
      lap[idx] = d2 + dmodes_[idx] / r - static_cast<double>(m) * m * modes_[idx] / (r * r);
    }
  }
  return synthesize(lap);
}

std::vector<double> PolarField::radial_derivative_at_nodes() const { return synthesize(dmodes_); }

std::vector<double> PolarField::angular_derivative_at_nodes() const {
  std::vector<cplx> d(modes_.size());
  const int M = grid_.modes();
  for (std::size_t idx = 0; idx < modes_.size(); ++idx) d[idx] = cplx(0.0, static_cast<double>(idx % M)) * modes_[idx];
  return synthesize(d);
}

double PolarField::sup_norm() const { return sup_abs(values_); }

RealField PolarField::as_field() const {
  auto self = std::make_shared<const PolarField>(*this);
  return [self](cplx z) { return (*self)(z); };
}

// ---- Green operator -------------------------------------------------------------

namespace {

// Panels for [a, b], graded geometrically towards 0 (where the mode-0 kernel
// has its log singularity) and away from a > 0.
std::vector<std::pair<double, double>> graded_panels(double a, double b) {
  std::vector<std::pair<double, double>> out;
  if (a == 0.0) {
    double hi = b;
    while (hi > 1e-12) {
      out.emplace_back(0.5 * hi, hi);
      hi *= 0.5;
    }
    out.emplace_back(0.0, hi);
  } else {
    double lo = a;
    while (2.0 * lo < b) {
      out.emplace_back(lo, 2.0 * lo);
      lo *= 2.0;
    }
    out.emplace_back(lo, b);
  }
  return out;
}

using KernelSet = std::vector<std::vector<double>>;

std::shared_ptr<const KernelSet> build_kernels(const SolverGrid& grid, int gauss_nodes) {
  const int n = grid.n_rho, M = grid.modes();
  const auto& C = chebyshev(n);
  auto kernels = std::make_shared<KernelSet>(static_cast<std::size_t>(M), std::vector<double>(static_cast<std::size_t>(n) * n, 0.0));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    const double rho = C.x[i];
    std::vector<std::pair<double, double>> panels;
    if (rho > 0.0) panels = graded_panels(0.0, rho);
    if (rho < 1.0) {
      const auto outer = graded_panels(rho, 1.0);
      panels.insert(panels.end(), outer.begin(), outer.end());
    }
    for (const auto& [a, b] : panels) {
      const auto rule = gauss_legendre(gauss_nodes, a, b);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = rule.nodes[q];
        const auto l = lagrange_weights(C, s);
        const double lo = std::min(rho, s), hi = std::max(rho, s);
        for (int m = 0; m < M; ++m) {
          const double k = m == 0 ? -std::log(hi) : (std::pow(lo / hi, m) - std::pow(rho * s, m)) / (2.0 * m);
          const double w = rule.weights[q] * s * k;
          if (w == 0.0) continue;
          auto& K = (*kernels)[m];
          for (int j = 0; j < n; ++j) K[static_cast<std::size_t>(i) * n + j] += w * l[j];
        }
      }
    }
  });
  return kernels;
}

}  // namespace

GreenSolver::GreenSolver(SolverGrid grid, int gauss_nodes) : grid_(grid) {
  check_grid(grid_);
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const KernelSet>> cache;
  const auto key = std::make_tuple(grid_.n_rho, grid_.n_theta, gauss_nodes);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
      kernels_ = it->second;
      return;
    }
  }
  auto built = build_kernels(grid_, gauss_nodes);
  std::lock_guard<std::mutex> lock(mutex);
  kernels_ = cache.emplace(key, built).first->second;
}

PolarField GreenSolver::apply(const PolarField& g) const {
  if (g.grid().n_rho != grid_.n_rho || g.grid().n_theta != grid_.n_theta) {
    throw DomainError("GreenSolver: field grid does not match the solver grid");
  }
  const int n = grid_.n_rho, M = grid_.modes(), nt = grid_.n_theta;
  std::vector<double> out(static_cast<std::size_t>(n) * nt);
  std::vector<cplx> F(static_cast<std::size_t>(n) * M, 0.0);
  for (int m = 0; m < M; ++m) {
    const auto& K = (*kernels_)[m];
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += K[static_cast<std::size_t>(i) * n + j] * g.mode(j, m);
      F[static_cast<std::size_t>(i) * M + m] = acc;
    }
  }
  std::vector<cplx> row(nt);
  for (int i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = F[static_cast<std::size_t>(i) * M].real();
    for (int m = 1; m < M; ++m) {
      row[m] = F[static_cast<std::size_t>(i) * M + m];
      row[nt - m] = std::conj(row[m]);
    }
    fft_inplace(row, false);
    for (int k = 0; k < nt; ++k) out[static_cast<std::size_t>(i) * nt + k] = row[k].real();
  }
  return PolarField(grid_, std::move(out));
}

PolarField green_potential(const RealField& g, SolverGrid grid) {
  return GreenSolver(grid).apply(PolarField::from_function(g, grid));
}

double poisson_residual(const PolarField& F, const PolarField& g) {
  const auto lap = F.laplacian_at_nodes();
  const int nt = F.grid().n_theta;
  double m = 0.0;
  for (std::size_t idx = nt; idx < lap.size(); ++idx) m = std::max(m, std::abs(lap[idx] + g.values()[idx]));
  const double scale = g.sup_norm();
  return scale > 0.0 ? m / scale : m;
}

// ---- positive solution ------------------------------------------------------------

double schrodinger_residual(const PolarField& F, const Potential& q) {
  const auto lap = F.laplacian_at_nodes();
  const auto& g = F.grid();
  double m = 0.0;
  for (int i = 1; i < g.n_rho; ++i) {
    for (int k = 0; k < g.n_theta; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * g.n_theta + k;
      m = std::max(m, std::abs(lap[idx] + q(std::polar(g.rho(i), g.theta(k))) * F.values()[idx]));
    }
  }
  const double scale = F.sup_norm();
  return scale > 0.0 ? m / scale : m;
}

PositiveSolution positive_solution(const Potential& q, const PositiveSolutionOptions& opt) {
  if (!(q.sup_norm < opt.epsilon0)) {
    throw PreconditionError("positive_solution: ||q|| = " + std::to_string(q.sup_norm) +
                            " is not below epsilon0 = " + std::to_string(opt.epsilon0));
  }
  const SolverGrid& g = opt.grid;
  const GreenSolver G(g);
  const auto qv = node_values(q.q, g);
  std::vector<double> Fi(qv.size(), 1.0), psi(qv.size(), 1.0);
  PositiveSolution out;
  out.q_norm = q.sup_norm;
  out.iterate_norms.push_back(1.0);
  for (int it = 1;; ++it) {
    if (it > opt.max_iterations) {
      throw DivergenceError("positive_solution: no convergence in " + std::to_string(opt.max_iterations) + " iterations");
    }
    std::vector<double> src(qv.size());
    for (std::size_t k = 0; k < src.size(); ++k) src[k] = qv[k] * Fi[k];
    Fi = G.apply(PolarField(g, std::move(src))).values();
    const double norm = sup_abs(Fi);
    if (!std::isfinite(norm)) throw DivergenceError("positive_solution: iterates overflow");
    if (out.q_norm > 0.0) out.c0_measured = std::max(out.c0_measured, norm / (out.q_norm * out.iterate_norms.back()));
    out.iterate_norms.push_back(norm);
    for (std::size_t k = 0; k < psi.size(); ++k) psi[k] += Fi[k];
    out.iteration_count = it;
    if (norm < opt.tolerance) break;
  }
  const double top = *std::max_element(psi.begin(), psi.end());
  for (auto& v : psi) v /= top;
  out.min_phi = *std::min_element(psi.begin(), psi.end());
  out.max_phi = *std::max_element(psi.begin(), psi.end());
  out.phi = PolarField(g, std::move(psi));
  out.c1_measured = out.q_norm > 0.0 ? (1.0 - out.min_phi) / out.q_norm : 0.0;
  out.residual_norm = schrodinger_residual(out.phi, q);
  return out;
}

PolarField solve_dirichlet(const Potential& q, const RealField& boundary, SolverGrid g, double tolerance,
                           int max_iterations) {
  check_grid(g);
  const int n = g.n_rho, nt = g.n_theta, M = g.modes();
  std::vector<cplx> b(nt);
  for (int k = 0; k < nt; ++k) b[k] = boundary(std::polar(1.0, g.theta(k)));
  fft_inplace(b, true);
  std::vector<double> H(static_cast<std::size_t>(n) * nt);
  for (int i = 0; i < n; ++i) {
    const double r = g.rho(i);
    for (int k = 0; k < nt; ++k) {
      double v = b[0].real() / nt;
      for (int m = 1; m < M; ++m) v += 2.0 * (b[m] / static_cast<double>(nt) * std::polar(std::pow(r, m), m * g.theta(k))).real();
      H[static_cast<std::size_t>(i) * nt + k] = v;
    }
  }
  const GreenSolver G(g);
  const auto qv = node_values(q.q, g);
  std::vector<double> F = H;
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> src(F.size());
    for (std::size_t k = 0; k < src.size(); ++k) src[k] = qv[k] * F[k];
    const auto psi = G.apply(PolarField(g, std::move(src))).values();
    double change = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
      const double next = H[k] + psi[k];
      change = std::max(change, std::abs(next - F[k]));
      F[k] = next;
    }
    const double scale = std::max(sup_abs(F), 1e-300);
    if (!std::isfinite(change)) break;
    if (change <= tolerance * scale) return PolarField(g, std::move(F));
  }
  throw DivergenceError("solve_dirichlet: Green iteration did not converge (||q|| too large?)");
}

PolarField manufactured_solution(const Potential& q, const PolarField& phi, const std::vector<std::complex<double>>& W) {
  auto boundary = [&](cplx z) {
    cplx w = 0.0;
    for (std::size_t k = W.size(); k-- > 0;) w = w * z + W[k];
    return phi(z) * w.real();
  };
  return solve_dirichlet(q, boundary, phi.grid());
}

SeededSolution seeded_solution(std::uint64_t seed, double q_norm, int max_degree, SolverGrid grid) {
  SeededSolution out;
  out.q = seeded_trig_potential(q_norm, seed);
  auto rng = substream(seed, 0x51ed);
  std::uniform_int_distribution<int> deg(1, std::max(max_degree, 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = deg(rng);
  out.W.assign(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 1; k <= d; ++k) out.W[k] = cplx(gauss(rng), gauss(rng));
  PositiveSolutionOptions opt;
  opt.grid = grid;
  opt.epsilon0 = std::max(opt.epsilon0, 2.0 * q_norm);
  const auto pos = positive_solution(out.q, opt);
  out.F = manufactured_solution(out.q, pos.phi, out.W);
  return out;
}

// ---- Beltrami ---------------------------------------------------------------------

BeltramiField beltrami_field(const PolarField& F, const PolarField& phi, PolarGridSpec cells, double threshold) {
  const auto& g = F.grid();
  std::vector<double> uv(F.values().size());
  for (std::size_t k = 0; k < uv.size(); ++k) uv[k] = F.values()[k] / phi.values()[k];
  const PolarField u(g, std::move(uv));
  BeltramiField out;
  out.n_r = cells.n_radial;
  out.n_theta = cells.n_angular;
  const std::size_t count = static_cast<std::size_t>(out.n_r) * out.n_theta;
  std::vector<cplx> grad(count);
  out.phi.resize(count);
  parallel_for(static_cast<std::size_t>(out.n_r), [&](std::size_t i) {
    const double rho = (static_cast<double>(i) + 0.5) / out.n_r;
    for (int k = 0; k < out.n_theta; ++k) {
      const cplx z = std::polar(rho, 2.0 * kPi * (k + 0.5) / out.n_theta);
      grad[i * out.n_theta + k] = u.gradient(z);
      out.phi[i * out.n_theta + k] = phi(z);
    }
  });
  double gmax = 0.0;
  for (const auto& v : grad) gmax = std::max(gmax, std::abs(v));
  // Rounding-level gradients count as zero (u constant).
  if (!(gmax > 1e-12 * std::max(1.0, u.sup_norm()))) {
    throw DegenerateInputError("beltrami_field: grad u vanishes on every cell");
  }
  out.mu.assign(count, 0.0);
  out.excluded.assign(count, 0);
  for (std::size_t c = 0; c < count; ++c) {
    if (std::abs(grad[c]) < threshold * gmax) {
      out.excluded[c] = 1;
      ++out.excluded_count;
      continue;
    }
    const double p2 = out.phi[c] * out.phi[c];
    const double factor = (1.0 - p2) / (1.0 + p2);
    const cplx a(grad[c].real(), grad[c].imag()), b(grad[c].real(), -grad[c].imag());
    out.mu[c] = factor * a / b;
    out.sup_mu = std::max(out.sup_mu, std::abs(out.mu[c]));
    out.modulus_identity_error = std::max(out.modulus_identity_error, std::abs(std::abs(out.mu[c]) - factor));
  }
  if (out.excluded_count == count) throw DegenerateInputError("beltrami_field: all cells excluded");
  out.K = (1.0 + out.sup_mu) / (1.0 - out.sup_mu);
  return out;
}

double divergence_residual(const PolarField& F, const PolarField& phi) {
  const auto& g = F.grid();
  std::vector<double> uv(F.values().size());
  for (std::size_t k = 0; k < uv.size(); ++k) uv[k] = F.values()[k] / phi.values()[k];
  const PolarField u(g, std::move(uv));
  const auto ur = u.radial_derivative_at_nodes();
  const auto ut = u.angular_derivative_at_nodes();
  std::vector<double> A(ur.size()), B(ur.size());
  double scale = 0.0;
  for (int i = 0; i < g.n_rho; ++i) {
    const double r = g.rho(i);
    for (int k = 0; k < g.n_theta; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * g.n_theta + k;
      const double p2 = phi.values()[idx] * phi.values()[idx];
      A[idx] = r * p2 * ur[idx];
      B[idx] = p2 * ut[idx];
      if (i > 0) scale = std::max(scale, p2 * std::hypot(ur[idx], ut[idx] / r));
    }
  }
  const auto dA = PolarField(g, A).radial_derivative_at_nodes();
  const auto dB = PolarField(g, B).angular_derivative_at_nodes();
  double m = 0.0;
  for (int i = 1; i < g.n_rho; ++i) {
    const double r = g.rho(i);
    for (int k = 0; k < g.n_theta; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * g.n_theta + k;
      m = std::max(m, std::abs(dA[idx] / r + dB[idx] / (r * r)));
    }
  }
  return scale > 0.0 ? m / scale : m;
}

// ---- frequency function -----------------------------------------------------------

double frequency_J(const RealField& F, double gamma, double r, const FrequencyOptions& opt) {
  if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("frequency_J: need 0 < r <= 1");
  const auto rule = gauss_legendre(opt.n_tau, 0.0, 0.5 * kPi);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double tau = rule.nodes[q];
    const double s = r * std::sin(tau);
    double circle = 0.0;
    for (int k = 0; k < opt.n_phi; ++k) {
      const double v = F(std::polar(s, 2.0 * kPi * k / opt.n_phi));
      circle += v * v;
    }
    circle *= 2.0 * kPi / opt.n_phi;
    const double ch = std::cosh(gamma * r * std::cos(tau));
    acc += rule.weights[q] * ch * ch * s * circle;
  }
  return acc;
}

double frequency_J(const RealField& F, const Potential& q, double r, const FrequencyOptions& opt) {
  return frequency_J(F, std::sqrt(q.radial_derivative_bound), r, opt);
}

FrequencyProfile frequency_profile(const RealField& F, double gamma, double r_min, double r_max, int count,
                                   const FrequencyOptions& opt) {
  if (count < 2 || !(r_min > 0.0 && r_min < r_max)) throw PreconditionError("frequency_profile: bad radius range");
  FrequencyProfile p;
  p.gamma = gamma;
  p.radii.resize(count);
  p.J.resize(count);
  std::vector<double> fine(count);
  const FrequencyOptions twice{2 * opt.n_tau, 2 * opt.n_phi};
  parallel_for(static_cast<std::size_t>(count), [&](std::size_t k) {
    const double r = r_min * std::pow(r_max / r_min, static_cast<double>(k) / (count - 1));
    p.radii[k] = r;
    p.J[k] = frequency_J(F, gamma, r, opt);
    fine[k] = frequency_J(F, gamma, r, twice);
  });
  for (int k = 0; k < count; ++k) {
    if (fine[k] != 0.0) p.quad_error = std::max(p.quad_error, std::abs(p.J[k] - fine[k]) / std::abs(fine[k]));
  }
  return p;
}

double log_convexity_check(const FrequencyProfile& p) {
  const std::size_t n = p.radii.size();
  if (n < 5) throw PreconditionError("log_convexity_check: need at least 5 radii");
  for (double j : p.J) {
    if (!(j > 0.0)) throw DegenerateInputError("log_convexity_check: J vanishes");
  }
  const double dt = std::log(p.radii[1] / p.radii[0]);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double d2 = std::log(p.J[k + 1]) - 2.0 * std::log(p.J[k]) + std::log(p.J[k - 1]);
    worst = std::max(worst, -d2 / (dt * dt));
  }
  return worst;
}

double convexity_tolerance(const FrequencyProfile& p) { return 1e-6 + p.quad_error; }

// ---- three circles ------------------------------------------------------------------

ThreeCircles three_circles_check(const RealField& F, const Potential& q, double s, double r, PolarGridSpec grid) {
  if (!(s > 0.0 && s <= r && r <= 0.125)) throw PreconditionError("three_circles_check: need 0 < s <= r <= 1/8");
  auto M = [&](double rho) { return max_on_disc_grid(F, Disc({0.0, 0.0}, rho), grid); };
  ThreeCircles t;
  const double Ms = M(s), Mr = M(r);
  if (!(Ms > 0.0 && Mr > 0.0)) throw DegenerateInputError("three_circles_check: F vanishes on a disc");
  t.lhs = M(2.0 * s) / Ms;
  t.rhs_core = M(8.0 * r) / Mr;
  t.N = q.radial_derivative_bound;
  return t;
}

bool ThreeCirclesFit::complies(const ThreeCircles& t) const {
  return t.lhs <= c1 * std::exp(c2 * std::sqrt(t.N)) * t.rhs_core;
}

ThreeCirclesFit calibrate_three_circles(const std::vector<ThreeCircles>& corpus, double c2) {
  ThreeCirclesFit fit;
  fit.c2 = c2;
  double log_c1 = 0.0;
  for (const auto& t : corpus) log_c1 = std::max(log_c1, std::log(t.lhs / t.rhs_core) - c2 * std::sqrt(t.N));
  fit.c1 = 2.0 * std::exp(log_c1);
  return fit;
}

EllipticSandwich elliptic_sandwich_check(const RealField& F, const Potential& q, double r, PolarGridSpec grid) {
  if (!(r > 0.0 && r <= 0.5)) throw PreconditionError("elliptic_sandwich_check: need 0 < r <= 1/2");
  const double N = q.radial_derivative_bound;
  if (!(N > 0.0)) throw PreconditionError("elliptic_sandwich_check: q vanishes identically");
  const double gamma = std::sqrt(N);
  EllipticSandwich e;
  e.r = r;
  e.lower_core = std::exp(-gamma * r) * std::sqrt(frequency_J(F, gamma, r) / r);
  e.M = max_on_disc_grid(F, Disc({0.0, 0.0}, r), grid);
  e.upper_core = N * std::sqrt(frequency_J(F, gamma, 2.0 * r) / (2.0 * r));
  return e;
}

// ---- ODE model ---------------------------------------------------------------------

SymMatrix SymMatrix::identity(int n, double scale) {
  SymMatrix m{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  for (int i = 0; i < n; ++i) m.a[static_cast<std::size_t>(i) * n + i] = scale;
  return m;
}

SymMatrix random_psd(int n, std::uint64_t seed) {
  auto rng = substream(seed, 0x95d);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
  }
  const Eigen::MatrixXd L = A * A.transpose() / n;
  SymMatrix m{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.a[static_cast<std::size_t>(i) * n + j] = 0.5 * (L(i, j) + L(j, i));
  }
  return m;
}

namespace {

Eigen::MatrixXd to_eigen(const SymMatrix& m, int dim) {
  if (m.n != dim || m.a.size() != static_cast<std::size_t>(dim) * dim) {
    throw DomainError("toy_ode_convexity: operator dimension mismatch");
  }
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m.a.data(), dim, dim);
}

}  // namespace

ToyODEResult toy_ode_convexity(const std::function<SymMatrix(double)>& L, int dim, double T, double eps, int steps) {
  if (dim < 1 || !(T > 0.0) || steps < 3) throw PreconditionError("toy_ode_convexity: need dim >= 1, T > 0, steps >= 3");
  const Eigen::MatrixXd L0 = to_eigen(L(-T), dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L0);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff())) {
    throw PreconditionError("toy_ode_convexity: L(-T) is not positive semidefinite");
  }
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sqrtL = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(dim) / std::sqrt(static_cast<double>(dim));

  Eigen::VectorXd h = eps * v, p = eps * (sqrtL * v);
  double log_scale = 0.0;
  const double dt = T / steps;
  std::vector<double> la;
  la.reserve(static_cast<std::size_t>(steps) + 1);
  auto record = [&]() { la.push_back(2.0 * (std::log(h.norm()) + log_scale) - std::log(2.0)); };
  record();
  for (int k = 0; k < steps; ++k) {
    const double t = -T + k * dt;
    const Eigen::MatrixXd La = to_eigen(L(t), dim), Lm = to_eigen(L(t + 0.5 * dt), dim), Lb = to_eigen(L(t + dt), dim);
    const Eigen::VectorXd k1h = p, k1p = La * h;
    const Eigen::VectorXd k2h = p + 0.5 * dt * k1p, k2p = Lm * (h + 0.5 * dt * k1h);
    const Eigen::VectorXd k3h = p + 0.5 * dt * k2p, k3p = Lm * (h + 0.5 * dt * k2h);
    const Eigen::VectorXd k4h = p + dt * k3p, k4p = Lb * (h + dt * k3h);
    h += dt / 6.0 * (k1h + 2.0 * k2h + 2.0 * k3h + k4h);
    p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    const double nh = h.norm();
    if (nh > 1e50 || nh < 1e-50) {
      h /= nh;
      p /= nh;
      log_scale += std::log(nh);
    }
    record();
  }
  ToyODEResult out;
  out.steps = steps;
  out.final_log_norm = std::log(h.norm()) + log_scale;
  for (std::size_t k = 1; k + 1 < la.size(); ++k) {
    out.max_violation = std::max(out.max_violation, -(la[k + 1] - 2.0 * la[k] + la[k - 1]));
  }
  return out;
}

ToyODEResult toy_ode_convexity(const SymMatrix& L0, const SymMatrix& L1, double T, double eps, int steps) {
  if (L0.n != L1.n) throw DomainError("toy_ode_convexity: L0 and L1 differ in size");
  const int n = L0.n;
  auto L = [&](double t) {
    SymMatrix m{n, L0.a};
    for (std::size_t k = 0; k < m.a.size(); ++k) m.a[k] += (t + T) * L1.a[k];
    return m;
  };
  return toy_ode_convexity(L, n, T, eps, steps);
}

}  // namespace nodal
