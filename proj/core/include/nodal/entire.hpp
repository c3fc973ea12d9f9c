#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "nodal/cutoff.hpp"
#include "nodal/scaled_complex.hpp"

namespace nodal {

struct EntireEOptions {
  /// The band part of supp(dbar chi) is truncated at x <= x_cut.
  double x_cut = 4.5;
  /// Gauss-Legendre nodes per panel and direction.
  int nodes = 16;
  /// Panels closer than this multiple of their diameter are integrated with
  /// polar (Duffy) triangles centred at the evaluation point.
  double near_factor = 0.6;
};

/// E(z) = chi(z) exp(exp(z)) - u(z), where u is the Cauchy transform of
/// exp(exp(zeta)) dbar chi(zeta) over the transition layer.
class EntireE {
public:
  explicit EntireE(CutoffSpec cutoff = {}, EntireEOptions options = {});

  const CutoffSpec& cutoff() const noexcept { return cutoff_; }
  const EntireEOptions& options() const noexcept { return options_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// u(z) = (1/pi) iint exp(exp(zeta)) dbar chi(zeta) / (z - zeta) dA.
  std::complex<double> u(std::complex<double> z) const;
  /// E(z).
  ScaledComplex operator()(std::complex<double> z) const;

  /// The integrand exp(exp(zeta)) dbar chi(zeta).
  std::complex<double> density(std::complex<double> zeta) const;

  /// max |density| over the panel nodes on the line x = x_cut, relative to
  /// the max over all nodes.
  double truncation_ratio() const;

  std::string describe() const;

private:
  enum class Piece { Flat, Ramp, RampUpper, RampLower };
  struct Panel {
    double x0, x1, y0, y1;
    Piece x_piece, y_piece;
  };
  // Density on a panel from the polynomial pieces of that panel, so that it
  // continues smoothly past the panel edges.
  std::complex<double> panel_density(const Panel& P, std::complex<double> zeta) const;
  std::complex<double> panel_far(std::size_t p, std::complex<double> z) const;
  std::complex<double> panel_near(const Panel& P, std::complex<double> z) const;

  CutoffSpec cutoff_;
  EntireEOptions options_;
  std::vector<Panel> panels_;
  std::vector<std::size_t> offsets_;  // panels_[p] owns nodes [offsets_[p], offsets_[p+1])
  std::vector<std::complex<double>> nodes_;
  std::vector<std::complex<double>> weights_;  // Gauss weight * density / pi
  double max_density_ = 0.0;
};

std::complex<double> dbar_potential(const EntireE& E, std::complex<double> z);
ScaledComplex eval_E(const EntireE& E, std::complex<double> z);

/// Empirical c4: sup |E| outside Pi_+ and sup |E - exp exp| on Pi_+ in the box
/// [-4, 6] x [-5, 5]. Grid and boundary probes, then a local compass search
/// from the best few.
struct C4Measurement {
  double c4 = 0.0;
  double sup_u = 0.0;
  double sup_outside = 0.0;  // max |E| over probes outside Pi_+
  double sup_inside = 0.0;   // max |E - exp exp| over probes in Pi_+
  int probes = 0;
};

C4Measurement measure_c4(const EntireE& E, int grid = 40);

/// Pi_+ = {x >= 0, |y| <= pi/2}.
bool in_half_strip(std::complex<double> z);

}  // namespace nodal
