#include "nodal/entire.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "nodal/parallel.hpp"
#include "nodal/quadrature.hpp"

namespace nodal {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> split(double a, double b, int pieces) {
  std::vector<double> out(pieces + 1);
  for (int i = 0; i <= pieces; ++i) out[i] = a + (b - a) * i / pieces;
  return out;
}

}  // namespace

bool in_half_strip(std::complex<double> z) {
  return z.real() >= 0.0 && std::abs(z.imag()) <= 0.5 * kPi;
}

EntireE::EntireE(CutoffSpec cutoff, EntireEOptions options) : cutoff_(cutoff), options_(options) {
  const double xs = cutoff_.x_ramp_start, xe = cutoff_.x_ramp_end;
  const double h = cutoff_.inner_half_width, H = cutoff_.outer_half_width;

  // Ramp in x: full height, with breaks at the y ramps.
  for (auto xa = split(xs, xe, 2); auto i : {0, 1}) {
    auto lower = split(-H, -h, 4), centre = split(-h, h, 8), upper = split(h, H, 4);
    for (int k = 0; k < 4; ++k) panels_.push_back({xa[i], xa[i + 1], lower[k], lower[k + 1], Piece::Ramp, Piece::RampLower});
    for (int k = 0; k < 8; ++k) panels_.push_back({xa[i], xa[i + 1], centre[k], centre[k + 1], Piece::Ramp, Piece::Flat});
    for (int k = 0; k < 4; ++k) panels_.push_back({xa[i], xa[i + 1], upper[k], upper[k + 1], Piece::Ramp, Piece::RampUpper});
  }
  // Bands h <= |y| <= H for x beyond the ramp; narrower panels where the
  // phase exp(x) sin y turns quickly.
  double x = xe;
  while (x < options_.x_cut - 1e-12) {
    const double w = x < 2.0 ? 0.5 : 0.25;
    const double x1 = std::min(x + w, options_.x_cut);
    const int ny = x1 <= 2.0 ? 4 : 8;
    for (double sign : {-1.0, 1.0}) {
      auto ys = split(h, H, ny);
      for (int k = 0; k < ny; ++k) {
        double a = sign * ys[k], b = sign * ys[k + 1];
        panels_.push_back({x, x1, std::min(a, b), std::max(a, b), Piece::Flat,
                           sign > 0 ? Piece::RampUpper : Piece::RampLower});
      }
    }
    x = x1;
  }

  const QuadratureRule unit = gauss_legendre(options_.nodes);
  offsets_.push_back(0);
  for (const auto& P : panels_) {
    const double cx = 0.5 * (P.x0 + P.x1), hx = 0.5 * (P.x1 - P.x0);
    const double cy = 0.5 * (P.y0 + P.y1), hy = 0.5 * (P.y1 - P.y0);
    for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
      for (std::size_t j = 0; j < unit.nodes.size(); ++j) {
        const std::complex<double> zeta(cx + hx * unit.nodes[i], cy + hy * unit.nodes[j]);
        const std::complex<double> g = panel_density(P, zeta);
        max_density_ = std::max(max_density_, std::abs(g));
        if (g == 0.0) continue;
        nodes_.push_back(zeta);
        weights_.push_back(g * (hx * hy * unit.weights[i] * unit.weights[j] / kPi));
      }
    }
    offsets_.push_back(nodes_.size());
  }
}

std::complex<double> EntireE::density(std::complex<double> zeta) const {
  const CutoffValue c = cutoff_chi(cutoff_, zeta);
  if (c.dbar_chi == 0.0) return 0.0;
  return double_exponential(zeta).to_complex() * c.dbar_chi;
}

std::complex<double> EntireE::panel_density(const Panel& P, std::complex<double> zeta) const {
  const double xw = cutoff_.x_ramp_end - cutoff_.x_ramp_start;
  const double yw = cutoff_.outer_half_width - cutoff_.inner_half_width;
  // Unclamped quintic 6t^5 - 15t^4 + 10t^3 and its derivative.
  auto poly = [](double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); };
  auto dpoly = [](double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); };
  double a = 1.0, da = 0.0, b = 1.0, db = 0.0;
  if (P.x_piece == Piece::Ramp) {
    const double tx = (zeta.real() - cutoff_.x_ramp_start) / xw;
    a = poly(tx);
    da = dpoly(tx) / xw;
  }
  if (P.y_piece == Piece::RampUpper || P.y_piece == Piece::RampLower) {
    const double sy = P.y_piece == Piece::RampUpper ? 1.0 : -1.0;
    const double ty = (sy * zeta.imag() - cutoff_.inner_half_width) / yw;
    b = 1.0 - poly(ty);
    db = -sy * dpoly(ty) / yw;
  }
  const std::complex<double> dbar = 0.5 * std::complex<double>(da * b, a * db);
  return double_exponential(zeta).to_complex() * dbar;
}

double EntireE::truncation_ratio() const {
  const QuadratureRule unit = gauss_legendre(options_.nodes);
  double edge = 0.0;
  for (double t : unit.nodes) {
    const double y = cutoff_.inner_half_width +
                     0.5 * (t + 1.0) * (cutoff_.outer_half_width - cutoff_.inner_half_width);
    edge = std::max({edge, std::abs(density({options_.x_cut, y})), std::abs(density({options_.x_cut, -y}))});
  }
  return max_density_ > 0.0 ? edge / max_density_ : 0.0;
}

std::complex<double> EntireE::panel_far(std::size_t p, std::complex<double> z) const {
  std::complex<double> s = 0.0;
  for (std::size_t k = offsets_[p]; k < offsets_[p + 1]; ++k) s += weights_[k] / (z - nodes_[k]);
  return s;
}

std::complex<double> EntireE::panel_near(const Panel& P, std::complex<double> z) const {
  const QuadratureRule unit = gauss_legendre(options_.nodes);
  const std::complex<double> c[4] = {{P.x0, P.y0}, {P.x1, P.y0}, {P.x1, P.y1}, {P.x0, P.y1}};
  std::complex<double> total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const std::complex<double> a = c[k], e = c[(k + 1) % 4] - c[k];
    const double cross = std::imag(std::conj(a - z) * e);
    if (std::abs(cross) < 1e-300) continue;
    const double t0 = std::real(std::conj(e) * (z - a)) / std::norm(e);
    std::vector<std::pair<double, double>> pieces;
    if (t0 > 1e-9 && t0 < 1.0 - 1e-9) pieces = {{0.0, t0}, {t0, 1.0}};
    else pieces = {{0.0, 1.0}};
    std::complex<double> edge_sum = 0.0;
    for (auto [ta, tb] : pieces) {
      for (std::size_t it = 0; it < unit.nodes.size(); ++it) {
        const double t = ta + 0.5 * (unit.nodes[it] + 1.0) * (tb - ta);
        const double wt = 0.5 * (tb - ta) * unit.weights[it];
        const std::complex<double> p = a + t * e;
        std::complex<double> inner = 0.0;
        for (std::size_t is = 0; is < unit.nodes.size(); ++is) {
          const double s = 0.5 * (unit.nodes[is] + 1.0);
          inner += 0.5 * unit.weights[is] * panel_density(P, z + s * (p - z));
        }
        edge_sum += wt * inner / (p - z);
      }
    }
    total -= cross / kPi * edge_sum;
  }
  return total;
}

std::complex<double> EntireE::u(std::complex<double> z) const {
  std::complex<double> total = 0.0;
  for (std::size_t p = 0; p < panels_.size(); ++p) {
    const Panel& P = panels_[p];
    const double dx = std::max({P.x0 - z.real(), 0.0, z.real() - P.x1});
    const double dy = std::max({P.y0 - z.imag(), 0.0, z.imag() - P.y1});
    const double diam = std::max(P.x1 - P.x0, P.y1 - P.y0);
    if (std::hypot(dx, dy) < options_.near_factor * diam) total += panel_near(P, z);
    else total += panel_far(p, z);
  }
  return total;
}

ScaledComplex EntireE::operator()(std::complex<double> z) const {
  const ScaledComplex minus_u = ScaledComplex::from_complex(-u(z));
  const double chi = cutoff_chi(cutoff_, z).chi;
  if (chi <= 0.0) return minus_u;
  const ScaledComplex ee = double_exponential(z);
  return ScaledComplex::from_log(ee.log_magnitude + std::log(chi), ee.phase) + minus_u;
}

std::string EntireE::describe() const {
  std::ostringstream s;
  s << "tensor Gauss-Legendre " << options_.nodes << "x" << options_.nodes << " on " << panels_.size()
    << " panels, x_cut=" << options_.x_cut << ", polar subdivision within " << options_.near_factor
    << " panel diameters";
  return s.str();
}

std::complex<double> dbar_potential(const EntireE& E, std::complex<double> z) { return E.u(z); }
ScaledComplex eval_E(const EntireE& E, std::complex<double> z) { return E(z); }

namespace {

// |E| from the defining formula, valid off Pi_+ and, by continuity, on its boundary.
double outside_modulus(const EntireE& E, std::complex<double> z) {
  ScaledComplex e = ScaledComplex::from_complex(-E.u(z));
  const double chi = cutoff_chi(E.cutoff(), z).chi;
  if (chi > 0.0) {
    const ScaledComplex ee = double_exponential(z);
    e = ScaledComplex::from_log(ee.log_magnitude + std::log(chi), ee.phase) + e;
  }
  return std::exp(e.log_magnitude);
}

bool outside_closure(std::complex<double> z) {
  return z.real() <= 0.0 || std::abs(z.imag()) >= 0.5 * kPi;
}

bool in_box(std::complex<double> z) {
  return z.real() >= -4.0 && z.real() <= 6.0 && std::abs(z.imag()) <= 5.0;
}

// Compass search for a local maximum of g inside the admissible set.
std::pair<double, std::complex<double>> polish(const std::function<double(std::complex<double>)>& g,
                                               const std::function<bool(std::complex<double>)>& admissible,
                                               std::complex<double> z, double value, double step) {
  const std::complex<double> dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (step > 1e-6) {
    bool moved = false;
    for (const auto& d : dirs) {
      const std::complex<double> w = z + step * d;
      if (!admissible(w)) continue;
      const double v = g(w);
      if (v > value) {
        value = v;
        z = w;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return {value, z};
}

}  // namespace

C4Measurement measure_c4(const EntireE& E, int grid) {
  const auto outside = [&](std::complex<double> z) { return outside_modulus(E, z); };
  const auto inside = [&](std::complex<double> z) { return std::abs(E.u(z)); };
  const auto admissible_out = [](std::complex<double> z) { return in_box(z) && outside_closure(z); };
  const auto admissible_in = [](std::complex<double> z) { return in_box(z) && in_half_strip(z); };

  // Grid over [-4, 6] x [-5, 5] plus the boundary of Pi_+, where the sup
  // outside is approached.
  std::vector<std::complex<double>> points;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      points.emplace_back(-4.0 + 10.0 * i / (grid - 1), -5.0 + 10.0 * j / (grid - 1));
    }
  }
  const int edge = 4 * grid;
  for (int k = 0; k < edge; ++k) {
    const double t = static_cast<double>(k) / (edge - 1);
    points.emplace_back(0.0, kPi * (t - 0.5));
    points.emplace_back(6.0 * t, 0.5 * kPi);
    points.emplace_back(6.0 * t, -0.5 * kPi);
  }
  struct Probe {
    double u = 0.0, outside = -1.0, inside = -1.0;
  };
  std::vector<Probe> probes(points.size());
  parallel_for(points.size(), [&](std::size_t idx) {
    const auto z = points[idx];
    Probe p;
    p.u = inside(z);
    if (in_half_strip(z)) p.inside = p.u;
    if (outside_closure(z)) p.outside = outside(z);
    probes[idx] = p;
  });

  C4Measurement m;
  m.probes = static_cast<int>(probes.size());
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (const auto& p : probes) m.sup_u = std::max(m.sup_u, p.u);

  // Local polish of the best few probes of each kind.
  const double step = 10.0 / (grid - 1);
  constexpr std::size_t kPolish = 4;
  auto best_of = [&](auto key) {
    std::vector<std::size_t> idx = order;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key(probes[a]) > key(probes[b]); });
    idx.resize(std::min(kPolish, idx.size()));
    return idx;
  };
  const auto top_out = best_of([](const Probe& p) { return p.outside; });
  const auto top_in = best_of([](const Probe& p) { return p.inside; });
  std::vector<double> polished(2 * kPolish, 0.0);
  parallel_for(polished.size(), [&](std::size_t k) {
    if (k < top_out.size()) {
      const auto i = top_out[k];
      if (probes[i].outside >= 0.0) polished[k] = polish(outside, admissible_out, points[i], probes[i].outside, step).first;
    } else if (k - kPolish < top_in.size()) {
      const auto i = top_in[k - kPolish];
      if (probes[i].inside >= 0.0) polished[k] = polish(inside, admissible_in, points[i], probes[i].inside, step).first;
    }
  });
  for (std::size_t k = 0; k < kPolish; ++k) {
    m.sup_outside = std::max(m.sup_outside, polished[k]);
    m.sup_inside = std::max(m.sup_inside, polished[kPolish + k]);
  }
  for (const auto& p : probes) {
    m.sup_outside = std::max(m.sup_outside, p.outside);
    m.sup_inside = std::max(m.sup_inside, p.inside);
  }
  m.c4 = std::max(m.sup_outside, m.sup_inside);
  return m;
}

}  // namespace nodal
