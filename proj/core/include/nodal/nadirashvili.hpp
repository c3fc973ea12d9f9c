#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nodal/extremal.hpp"
#include "nodal/metrics.hpp"

namespace nodal {

/// u(r e^{i theta}) = sum_{n=1}^{n_max} r^n (p_n cos n theta + q_n sin n theta).
struct Candidate {
  std::vector<double> p, q;  // index n - 1
  int nu = -1;               // cached sign changes on the unit circle
  std::optional<AreaEstimate> area;

  int n_max() const { return static_cast<int>(p.size()); }
  bool is_zero() const;
  double operator()(std::complex<double> z) const;
  RealField field() const;
  /// Same function scaled so the largest coefficient magnitude is 1.
  Candidate normalized() const;
  /// Zero-padded (or truncated) to n_max coefficients.
  Candidate resized(int n_max) const;

  static Candidate monomial(int n, int n_max);
  /// Re P from complex Taylor coefficients alpha_0..alpha_N (alpha_0 ignored).
  static Candidate from_polynomial(const std::vector<std::complex<double>>& alpha, int n_max);
};

/// nu(T, u) via sign_changes_on_circle with hint n_max.
int candidate_sign_changes(const Candidate& c);
bool feasibility(const Candidate& c, int d);

struct NadirashviliConfig {
  int restarts = 20;
  std::uint64_t evaluation_budget = 50000;  // objective evaluations per class
  double initial_step = 0.25;               // simplex step, relative to max |coefficient|
  int objective_radii = 48;                 // polar grid of the search objective
  AreaOptions certificate_area{};           // grid-refined measurement of certificates
  std::uint64_t seed = 0;
};

struct EstimateRecord {
  int d = 0;                  // canonical (even) class
  int requested_d = 0;
  int n_max = 0;
  AreaEstimate best;          // area of the certificate, grid-refined
  Candidate certificate;
  double construction_upper_bound = 0.0;  // area of the warm start Re P_N
  int construction_degree = 0;            // N of the warm start, 0 for the monomial fallback
  std::string start_source;               // which start produced the certificate
  std::uint64_t evaluations = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
  std::string caveat;
  double best_area() const { return best.value; }
};

/// d rounded down to an even number; PreconditionError for d < 2.
int canonical_class(int d);

struct WarmStart {
  Candidate candidate;
  int N = 0;  // 0 for the monomial fallback
};

/// Re P_N with the largest N <= d whose nu(T, Re P_N) <= d, else Re z^{d/2}.
WarmStart warm_start(int d, const std::vector<ExtremalPolynomial>& constructions);

/// Area of {u > 0} in the unit disc on an FFT-evaluated polar grid; used as the
/// search objective.
double polar_fft_area(const Candidate& c, int n_radii);
/// Sign changes of the FFT samples of u on the unit circle (32 n_max points).
int fft_sign_changes(const Candidate& c);

/// Multi-start Nelder-Mead over the coefficients of the class d. `chained` is
/// the certificate of a smaller class, used as an extra start.
EstimateRecord minimize_area(int d, const NadirashviliConfig& config,
                             const std::vector<ExtremalPolynomial>& constructions = {},
                             const Candidate* chained = nullptr);

/// Classes in increasing order, each seeded with the previous certificate.
std::vector<EstimateRecord> nadirashvili_sweep(const std::vector<int>& classes, const NadirashviliConfig& config,
                                               const std::vector<ExtremalPolynomial>& constructions = {});

/// Re-measures the certificate with the given options.
AreaEstimate revalidate(const EstimateRecord& record, const AreaOptions& opt);

std::string to_json(const EstimateRecord& record);
EstimateRecord estimate_from_json(const std::string& text);
Candidate candidate_from_json(const std::string& text);

}  // namespace nodal
