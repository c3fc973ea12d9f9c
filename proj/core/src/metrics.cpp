#include "nodal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"

namespace nodal {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> on_circle(std::complex<double> c, double r, double theta) {
  return c + std::polar(r, theta);
}

double wrap(double a) {
  a = std::remainder(a, kTwoPi);
  return a;
}

}  // namespace

Disc::Disc(std::complex<double> c, double r) : center(c), radius(r) {
  if (!(r > 0.0)) throw DomainError("Disc: radius must be positive");
}

double Disc::area() const { return std::numbers::pi * radius * radius; }

std::string to_string(AreaMethod m) {
  switch (m) {
    case AreaMethod::GridRefined: return "grid-refined";
    case AreaMethod::MonteCarlo: return "monte-carlo";
    case AreaMethod::PolarGrid: return "polar-grid";
    case AreaMethod::LatLongGrid: return "lat-long-grid";
  }
  return "unknown";
}

AreaMethod area_method_from_string(const std::string& s) {
  if (s == "grid-refined") return AreaMethod::GridRefined;
  if (s == "monte-carlo") return AreaMethod::MonteCarlo;
  if (s == "polar-grid") return AreaMethod::PolarGrid;
  if (s == "lat-long-grid") return AreaMethod::LatLongGrid;
  throw DomainError("unknown area method '" + s + "'");
}

bool agree_within_bars(const AreaEstimate& a, const AreaEstimate& b, double slack) {
  return std::abs(a.value - b.value) <= a.abs_error + b.abs_error + slack;
}

int ArgProfile::winding_number() const {
  if (phases.size() < 2) return 0;
  return static_cast<int>(std::lround((phases.back() - phases.front()) / kTwoPi));
}

// ---------------------------------------------------------------------------

std::vector<double> sign_change_angles(const RealField& f, std::complex<double> center, double r,
                                       int hint_degree) {
  if (!(r > 0.0)) throw DomainError("sign_change_angles: radius must be positive");
  const std::size_t M = 32 * static_cast<std::size_t>(std::max(hint_degree, 8));
  const double step = kTwoPi / static_cast<double>(M);
  std::vector<double> theta(M), value(M);
  for (std::size_t k = 0; k < M; ++k) {
    theta[k] = step * static_cast<double>(k);
    value[k] = f(on_circle(center, r, theta[k]));
    // An exact zero carries no sign; nudge the sample off it.
    for (int attempt = 1; value[k] == 0.0 && attempt <= 8; ++attempt) {
      const double shift = step * 1e-3 * attempt * (attempt % 2 ? 1.0 : -1.0);
      value[k] = f(on_circle(center, r, theta[k] + shift));
      if (value[k] != 0.0) theta[k] += shift;
    }
  }
  std::vector<double> crossings;
  for (std::size_t k = 0; k < M; ++k) {
    const std::size_t k1 = (k + 1) % M;
    const bool pos0 = value[k] > 0.0, pos1 = value[k1] > 0.0;
    if (pos0 == pos1) continue;
    double a = theta[k];
    double b = k1 == 0 ? theta[0] + kTwoPi : theta[k1];
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      const double fm = f(on_circle(center, r, m));
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if ((fm > 0.0) == pos0) a = m; else b = m;
    }
    double c = 0.5 * (a + b);
    if (c >= kTwoPi) c -= kTwoPi;
    crossings.push_back(c);
  }
  std::sort(crossings.begin(), crossings.end());
  for (std::size_t i = 0; i + 1 < crossings.size(); ++i) {
    if (crossings[i + 1] - crossings[i] < 1e-9) {
      std::clog << "nodal: warning: near-tangential sign change pair at theta = " << crossings[i]
                << "\n";
    }
  }
  return crossings;
}

int sign_changes_on_circle(const RealField& f, std::complex<double> center, double r,
                           int hint_degree) {
  return static_cast<int>(sign_change_angles(f, center, r, hint_degree).size());
}

int dense_scan_sign_changes(const RealField& f, std::complex<double> center, double r,
                            std::size_t n) {
  std::vector<char> positive(n);
  parallel_for(n, [&](std::size_t k) {
    positive[k] = f(on_circle(center, r, kTwoPi * static_cast<double>(k) / static_cast<double>(n))) > 0.0;
  });
  int count = 0;
  for (std::size_t k = 0; k < n; ++k) count += positive[k] != positive[(k + 1) % n];
  return count;
}

double max_on_circle(const RealField& f, std::complex<double> center, double r, int hint_degree) {
  if (!(r > 0.0)) throw DomainError("max_on_circle: radius must be positive");
  const std::size_t M = std::max<std::size_t>(4096, 64 * static_cast<std::size_t>(std::max(hint_degree, 0)));
  const double step = kTwoPi / static_cast<double>(M);
  std::vector<double> mag(M);
  for (std::size_t k = 0; k < M; ++k) mag[k] = std::abs(f(on_circle(center, r, step * static_cast<double>(k))));

  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < M; ++k) {
    if (mag[k] >= mag[(k + M - 1) % M] && mag[k] >= mag[(k + 1) % M]) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  if (peaks.size() > 4) peaks.resize(4);

  double best = *std::max_element(mag.begin(), mag.end());
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [&](double t) { return std::abs(f(on_circle(center, r, t))); };
  for (std::size_t k : peaks) {
    double a = step * (static_cast<double>(k) - 1.0), b = step * (static_cast<double>(k) + 1.0);
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double g1 = g(x1), g2 = g(x2);
    while (b - a > 1e-12) {
      if (g1 < g2) {
        a = x1; x1 = x2; g1 = g2;
        x2 = a + invphi * (b - a); g2 = g(x2);
      } else {
        b = x2; x2 = x1; g2 = g1;
        x1 = b - invphi * (b - a); g1 = g(x1);
      }
    }
    best = std::max({best, g1, g2});
  }
  return best;
}

double max_on_disc_grid(const RealField& f, const Disc& D, const PolarGridSpec& grid) {
  if (grid.n_radial < 2 || grid.n_angular < 1) throw DomainError("max_on_disc_grid: grid too small");
  std::vector<double> row_max(static_cast<std::size_t>(grid.n_radial), 0.0);
  parallel_for(row_max.size(), [&](std::size_t i) {
    const double rho = D.radius * static_cast<double>(i) / (grid.n_radial - 1);
    const int n_ang = i == 0 ? 1 : grid.n_angular;
    double m = 0.0;
    for (int k = 0; k < n_ang; ++k) m = std::max(m, std::abs(f(on_circle(D.center, rho, kTwoPi * k / n_ang))));
    row_max[i] = m;
  });
  return *std::max_element(row_max.begin(), row_max.end());
}

double doubling_exponent(const RealField& f, const Disc& D, const DoublingOptions& opt) {
  double big, small;
  if (opt.boundary_only) {
    big = max_on_circle(f, D.center, D.radius, opt.hint_degree);
    small = max_on_circle(f, D.center, 0.5 * D.radius, opt.hint_degree);
  } else {
    big = max_on_disc_grid(f, D, opt.grid);
    small = max_on_disc_grid(f, D.half(), opt.grid);
  }
  if (!(small >= 1e-300)) throw DegenerateInputError("doubling_exponent: max over the half disc vanishes");
  return std::log(big / small);
}

double doubling_sup(const RealField& f, const std::vector<std::complex<double>>& centers,
                    const std::vector<double>& radii, const DoublingOptions& opt) {
  if (centers.empty() || radii.empty()) throw DomainError("doubling_sup: empty disc family");
  std::vector<double> beta(centers.size() * radii.size());
  parallel_for(beta.size(), [&](std::size_t idx) {
    beta[idx] = doubling_exponent(f, Disc(centers[idx / radii.size()], radii[idx % radii.size()]), opt);
  });
  return *std::max_element(beta.begin(), beta.end());
}

// ---------------------------------------------------------------------------

ArgProfile arg_profile(const AnalyticField& f, std::complex<double> center, double r,
                       int hint_degree) {
  if (!(r > 0.0)) throw DomainError("arg_profile: radius must be positive");
  std::size_t M = std::max<std::size_t>(1024, 16 * static_cast<std::size_t>(std::max(hint_degree, 0)));
  constexpr std::size_t kMaxSamples = std::size_t{1} << 24;
  for (;;) {
    std::vector<std::complex<double>> v(M);
    for (std::size_t k = 0; k < M; ++k) v[k] = f(on_circle(center, r, kTwoPi * static_cast<double>(k) / static_cast<double>(M)));
    double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    std::size_t kmin = 0;
    for (std::size_t k = 0; k < M; ++k) {
      const double a = std::abs(v[k]);
      vmax = std::max(vmax, a);
      if (a < vmin) { vmin = a; kmin = k; }
    }
    if (!(vmin > 1e-12 * vmax)) {
      std::ostringstream msg;
      msg << "function (nearly) vanishes on the circle at angle "
          << kTwoPi * static_cast<double>(kmin) / static_cast<double>(M);
      throw PreconditionError(msg.str());
    }
    ArgProfile p;
    p.angles.resize(M + 1);
    p.phases.resize(M + 1);
    p.angles[0] = 0.0;
    p.phases[0] = std::arg(v[0]);
    bool coarse = false;
    for (std::size_t k = 1; k <= M; ++k) {
      const double step = wrap(std::arg(v[k % M]) - std::arg(v[k - 1]));
      if (std::abs(step) >= std::numbers::pi / 2) coarse = true;
      p.angles[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(M);
      p.phases[k] = p.phases[k - 1] + step;
    }
    if (!coarse || M >= kMaxSamples) return p;
    M *= 2;
  }
}

namespace {

// Vertex of the parabola through three samples; the middle value when the
// samples are collinear.
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
  const double a = (d12 - d01) / (x2 - x0);
  if (a == 0.0) return y1;
  // y = y0 + d01 (x - x0) + a (x - x0) (x - x1)
  const double xv = std::clamp(0.5 * (x0 + x1) - d01 / (2 * a), x0, x2);
  return y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
}

}  // namespace

double arg_oscillation(const ArgProfile& profile) {
  const std::size_t M = profile.phases.size() - 1;
  if (M < 1) return 0.0;
  const double turn = profile.phases[M] - profile.phases[0];
  const double period = profile.angles[M] - profile.angles[0];
  std::vector<double> ext(2 * M + 1), at(2 * M + 1);
  for (std::size_t j = 0; j <= M; ++j) {
    ext[j] = profile.phases[j];
    at[j] = profile.angles[j];
  }
  for (std::size_t j = 1; j <= M; ++j) {
    ext[M + j] = profile.phases[j] + turn;
    at[M + j] = profile.angles[j] + period;
  }
  // Local extrema of the lift are sharpened by parabolic interpolation.
  std::vector<double> hi(ext), lo(ext);
  for (std::size_t j = 1; j < 2 * M; ++j) {
    const bool peak = ext[j] >= ext[j - 1] && ext[j] >= ext[j + 1];
    const bool pit = ext[j] <= ext[j - 1] && ext[j] <= ext[j + 1];
    if (!peak && !pit) continue;
    const double v = parabola_vertex(at[j - 1], ext[j - 1], at[j], ext[j], at[j + 1], ext[j + 1]);
    if (peak) hi[j] = std::max(hi[j], v);
    if (pit) lo[j] = std::min(lo[j], v);
  }
  // Sliding maximum of hi over windows [i, i + M); the full turn separately.
  std::deque<std::size_t> window;
  double best = std::max(0.0, turn);
  std::size_t next = 0;
  for (std::size_t i = 0; i < M; ++i) {
    while (next < i + M) {
      while (!window.empty() && hi[window.back()] <= hi[next]) window.pop_back();
      window.push_back(next++);
    }
    while (window.front() < i) window.pop_front();
    best = std::max(best, hi[window.front()] - lo[i]);
  }
  return best;
}

double arg_oscillation(const AnalyticField& f, std::complex<double> center, double r,
                       int hint_degree) {
  return arg_oscillation(arg_profile(f, center, r, hint_degree));
}

int zero_count(const AnalyticField& f, std::complex<double> center, double r, int hint_degree) {
  return arg_profile(f, center, r, hint_degree).winding_number();
}

// ---------------------------------------------------------------------------

namespace {

struct GridAreaAccumulator {
  double value = 0.0;
  double mixed = 0.0;
};

class RefinedAreaScan {
public:
  RefinedAreaScan(const RealField& f, const Disc& D, int depth) : f_(f), D_(D), depth_(depth) {}

  bool positive(std::complex<double> z) const { return D_.contains(z) && f_(z) > 0.0; }

  // Corners ordered (x0,y0), (x1,y0), (x1,y1), (x0,y1).
  void cell(double x0, double y0, double h, const bool c[4], int level, GridAreaAccumulator& acc) const {
    const int npos = c[0] + c[1] + c[2] + c[3];
    const double area = h * h;
    if (npos == 0 || npos == 4) {
      if (npos == 4) acc.value += area;
      return;
    }
    if (level == depth_) {
      acc.value += area * npos / 4.0;
      acc.mixed += area;
      return;
    }
    const double hh = 0.5 * h;
    const bool mb = positive({x0 + hh, y0});
    const bool mr = positive({x0 + h, y0 + hh});
    const bool mt = positive({x0 + hh, y0 + h});
    const bool ml = positive({x0, y0 + hh});
    const bool mc = positive({x0 + hh, y0 + hh});
    const bool q0[4] = {c[0], mb, mc, ml};
    const bool q1[4] = {mb, c[1], mr, mc};
    const bool q2[4] = {mc, mr, c[2], mt};
    const bool q3[4] = {ml, mc, mt, c[3]};
    cell(x0, y0, hh, q0, level + 1, acc);
    cell(x0 + hh, y0, hh, q1, level + 1, acc);
    cell(x0 + hh, y0 + hh, hh, q2, level + 1, acc);
    cell(x0, y0 + hh, hh, q3, level + 1, acc);
  }

private:
  const RealField& f_;
  const Disc& D_;
  int depth_;
};

AreaEstimate grid_refined_area(const RealField& f, const Disc& D, const AreaOptions& opt) {
  const int n = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(opt.budget)))));
  const double h = 2.0 * D.radius / n;
  const double x0 = D.center.real() - D.radius, y0 = D.center.imag() - D.radius;
  RefinedAreaScan scan(f, D, opt.refine_depth);

  std::vector<char> node(static_cast<std::size_t>(n + 1) * (n + 1));
  parallel_for(static_cast<std::size_t>(n + 1), [&](std::size_t iy) {
    for (int ix = 0; ix <= n; ++ix) node[iy * (n + 1) + ix] = scan.positive({x0 + ix * h, y0 + static_cast<double>(iy) * h});
  });
  std::vector<GridAreaAccumulator> rows(static_cast<std::size_t>(n));
  parallel_for(rows.size(), [&](std::size_t iy) {
    for (int ix = 0; ix < n; ++ix) {
      const bool c[4] = {static_cast<bool>(node[iy * (n + 1) + ix]), static_cast<bool>(node[iy * (n + 1) + ix + 1]),
                         static_cast<bool>(node[(iy + 1) * (n + 1) + ix + 1]), static_cast<bool>(node[(iy + 1) * (n + 1) + ix])};
      scan.cell(x0 + ix * h, y0 + static_cast<double>(iy) * h, h, c, 0, rows[iy]);
    }
  });
  AreaEstimate est;
  est.method = AreaMethod::GridRefined;
  est.budget = static_cast<std::uint64_t>(n) * n;
  for (const auto& r : rows) {
    est.value += r.value;
    est.abs_error += 0.5 * r.mixed;
  }
  return est;
}

AreaEstimate monte_carlo_area(const RealField& f, const Disc& D, const AreaOptions& opt) {
  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t chunks = (opt.budget + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    auto rng = substream(opt.seed, c);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const std::uint64_t count = std::min<std::uint64_t>(kChunk, opt.budget - c * kChunk);
    std::uint64_t h = 0;
    for (std::uint64_t s = 0; s < count; ++s) {
      const double rho = D.radius * std::sqrt(U(rng));
      const double th = kTwoPi * U(rng);
      h += f(on_circle(D.center, rho, th)) > 0.0;
    }
    hits[c] = h;
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  const double n = static_cast<double>(opt.budget);
  const double p = static_cast<double>(total) / n;
  constexpr double z99 = 2.5758293035489004;
  AreaEstimate est;
  est.method = AreaMethod::MonteCarlo;
  est.budget = opt.budget;
  est.value = D.area() * p;
  // Rule-of-three style floor so that p = 0 or 1 still carries an error bar.
  est.abs_error = D.area() * std::max(z99 * std::sqrt(p * (1.0 - p) / n), 4.6 / n);
  return est;
}

AreaEstimate polar_grid_area(const RealField& f, const Disc& D, const AreaOptions& opt) {
  const int n_rad = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(opt.budget) / 8.0)));
  const int n_ang = 8 * n_rad;
  const double dr = D.radius / n_rad, dt = kTwoPi / n_ang;
  std::vector<char> sign(static_cast<std::size_t>(n_rad) * n_ang);
  parallel_for(static_cast<std::size_t>(n_rad), [&](std::size_t i) {
    const double rho = (static_cast<double>(i) + 0.5) * dr;
    for (int k = 0; k < n_ang; ++k) sign[i * n_ang + k] = f(on_circle(D.center, rho, (k + 0.5) * dt)) > 0.0;
  });
  AreaEstimate est;
  est.method = AreaMethod::PolarGrid;
  est.budget = static_cast<std::uint64_t>(n_rad) * n_ang;
  for (int i = 0; i < n_rad; ++i) {
    const double cell = (i + 0.5) * dr * dr * dt;
    for (int k = 0; k < n_ang; ++k) {
      const bool s = sign[static_cast<std::size_t>(i) * n_ang + k];
      if (s) est.value += cell;
      bool mixed = s != sign[static_cast<std::size_t>(i) * n_ang + (k + 1) % n_ang] ||
                   s != sign[static_cast<std::size_t>(i) * n_ang + (k + n_ang - 1) % n_ang];
      if (i > 0) mixed = mixed || s != sign[static_cast<std::size_t>(i - 1) * n_ang + k];
      if (i + 1 < n_rad) mixed = mixed || s != sign[static_cast<std::size_t>(i + 1) * n_ang + k];
      if (mixed) est.abs_error += 0.5 * cell;
    }
  }
  return est;
}

}  // namespace

AreaEstimate positivity_area(const RealField& f, const Disc& region, const AreaOptions& opt) {
  if (opt.budget < 10000) throw PreconditionError("positivity_area: budget must be at least 1e4");
  switch (opt.method) {
    case AreaMethod::GridRefined: return grid_refined_area(f, region, opt);
    case AreaMethod::MonteCarlo: return monte_carlo_area(f, region, opt);
    case AreaMethod::PolarGrid: return polar_grid_area(f, region, opt);
    case AreaMethod::LatLongGrid: break;
  }
  throw DomainError("positivity_area: unknown method");
}

// ---------------------------------------------------------------------------

PlanarGrid sample_planar(const RealField& f, const Disc& D, int n) {
  if (n < 2) throw DomainError("sample_planar: need at least 2 points per side");
  PlanarGrid g;
  g.nx = g.ny = n;
  g.x0 = D.center.real() - D.radius;
  g.y0 = D.center.imag() - D.radius;
  g.dx = g.dy = 2.0 * D.radius / (n - 1);
  g.values.resize(static_cast<std::size_t>(n) * n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t iy) {
    for (int ix = 0; ix < n; ++ix) g.values[iy * n + ix] = f({g.x0 + ix * g.dx, g.y0 + static_cast<double>(iy) * g.dy});
  });
  return g;
}

namespace {

struct Pt {
  double u, v;
};

// Marching-squares segments of one cell in unit cell coordinates. Corner
// values ordered (0,0), (1,0), (1,1), (0,1).
int cell_segments(const double val[4], Pt seg[4]) {
  const bool p[4] = {val[0] >= 0.0, val[1] >= 0.0, val[2] >= 0.0, val[3] >= 0.0};
  auto lerp = [&](int a, int b) { return val[a] / (val[a] - val[b]); };
  Pt cross[4];
  bool has[4] = {false, false, false, false};
  if (p[0] != p[1]) { cross[0] = {lerp(0, 1), 0.0}; has[0] = true; }
  if (p[1] != p[2]) { cross[1] = {1.0, lerp(1, 2)}; has[1] = true; }
  if (p[2] != p[3]) { cross[2] = {1.0 - lerp(2, 3), 1.0}; has[2] = true; }
  if (p[3] != p[0]) { cross[3] = {0.0, 1.0 - lerp(3, 0)}; has[3] = true; }
  const int n = has[0] + has[1] + has[2] + has[3];
  if (n == 2) {
    int k = 0;
    for (int e = 0; e < 4; ++e) if (has[e]) seg[k++] = cross[e];
    return 1;
  }
  if (n == 4) {
    const bool centre = 0.25 * (val[0] + val[1] + val[2] + val[3]) >= 0.0;
    if (centre == p[0]) {
      seg[0] = cross[0]; seg[1] = cross[1]; seg[2] = cross[2]; seg[3] = cross[3];
    } else {
      seg[0] = cross[3]; seg[1] = cross[0]; seg[2] = cross[1]; seg[3] = cross[2];
    }
    return 2;
  }
  return 0;
}

double clipped_length(double ax, double ay, double bx, double by, const Disc& D) {
  const double px = ax - D.center.real(), py = ay - D.center.imag();
  const double dx = bx - ax, dy = by - ay;
  const double a = dx * dx + dy * dy;
  if (a == 0.0) return 0.0;
  const double b = 2.0 * (px * dx + py * dy);
  const double c = px * px + py * py - D.radius * D.radius;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) return 0.0;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(0.0, (-b - sq) / (2.0 * a));
  const double t1 = std::min(1.0, (-b + sq) / (2.0 * a));
  return t1 > t0 ? (t1 - t0) * std::sqrt(a) : 0.0;
}

}  // namespace

double nodal_length(const PlanarGrid& grid, const Disc* clip) {
  std::vector<double> rows(static_cast<std::size_t>(std::max(grid.ny - 1, 0)), 0.0);
  parallel_for(rows.size(), [&](std::size_t iy) {
    double total = 0.0;
    for (int ix = 0; ix + 1 < grid.nx; ++ix) {
      const int y = static_cast<int>(iy);
      const double val[4] = {grid.at(ix, y), grid.at(ix + 1, y), grid.at(ix + 1, y + 1), grid.at(ix, y + 1)};
      Pt seg[4];
      const int ns = cell_segments(val, seg);
      for (int s = 0; s < ns; ++s) {
        const double ax = grid.x0 + (ix + seg[2 * s].u) * grid.dx, ay = grid.y0 + (y + seg[2 * s].v) * grid.dy;
        const double bx = grid.x0 + (ix + seg[2 * s + 1].u) * grid.dx, by = grid.y0 + (y + seg[2 * s + 1].v) * grid.dy;
        total += clip ? clipped_length(ax, ay, bx, by, *clip) : std::hypot(bx - ax, by - ay);
      }
    }
    rows[iy] = total;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

double SphereGrid::theta(int i) const { return (i + 0.5) * std::numbers::pi / n_theta; }
double SphereGrid::phi(int k) const { return kTwoPi * k / n_phi; }

double nodal_length(const SphereGrid& grid) {
  const double dth = std::numbers::pi / grid.n_theta, dph = kTwoPi / grid.n_phi;
  std::vector<double> rows(static_cast<std::size_t>(std::max(grid.n_theta - 1, 0)), 0.0);
  parallel_for(rows.size(), [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    const double s = std::sin(grid.theta(i) + 0.5 * dth);
    double total = 0.0;
    for (int k = 0; k < grid.n_phi; ++k) {
      const int k1 = (k + 1) % grid.n_phi;
      // u runs along phi, v along theta.
      const double val[4] = {grid.at(i, k), grid.at(i, k1), grid.at(i + 1, k1), grid.at(i + 1, k)};
      Pt seg[4];
      const int ns = cell_segments(val, seg);
      for (int q = 0; q < ns; ++q) {
        const double dphi = (seg[2 * q + 1].u - seg[2 * q].u) * dph;
        const double dtheta = (seg[2 * q + 1].v - seg[2 * q].v) * dth;
        total += std::sqrt(dtheta * dtheta + s * s * dphi * dphi);
      }
    }
    rows[iu] = total;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

int nodal_intersections(const RealField& f, std::complex<double> x, double r, int hint_degree) {
  return sign_changes_on_circle(f, x, r, hint_degree);
}

}  // namespace nodal
