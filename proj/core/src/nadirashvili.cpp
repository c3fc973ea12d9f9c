#include "nodal/nadirashvili.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"
#include "nodal/errors.hpp"
#include "nodal/fft.hpp"
#include "nodal/parallel.hpp"

namespace nodal {
namespace {

using json = nlohmann::json;
using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::vector<cplx> complex_coefficients(const Candidate& c) {
  std::vector<cplx> a(static_cast<std::size_t>(c.n_max()) + 1, 0.0);
  for (int n = 1; n <= c.n_max(); ++n) a[n] = cplx(c.p[n - 1], -c.q[n - 1]);
  return a;
}

std::size_t fft_size(int n_max, int factor, int floor) {
  return std::bit_ceil(static_cast<std::size_t>(std::max(floor, factor * std::max(n_max, 1))));
}

// Samples u(r e^{2 pi i k / M}), k = 0..M-1.
// u at theta_k = 2 pi (k + shift) / M.
std::vector<double> circle_samples(const std::vector<cplx>& a, double r, std::size_t M, double shift = 0.0) {
  std::vector<cplx> X(M, 0.0);
  double rn = 1.0;
  for (std::size_t n = 1; n < a.size(); ++n) {
    rn *= r;
    X[n % M] += a[n] * rn * std::polar(1.0, 2.0 * kPi * shift * static_cast<double>(n) / static_cast<double>(M));
  }
  fft_inplace(X, false);
  std::vector<double> u(M);
  for (std::size_t k = 0; k < M; ++k) u[k] = X[k].real();
  return u;
}

struct ObjectiveState {
  int d = 0;
  int n_max = 0;
  int radii = 48;
  std::uint64_t evaluations = 0;
  double best_verified = kPi;
  std::vector<double> best_x;
};

Candidate from_vector(const double* x, int n_max) {
  Candidate c;
  c.p.assign(x, x + n_max);
  c.q.assign(x + n_max, x + 2 * n_max);
  return c;
}

double objective(const gsl_vector* v, void* params) {
  auto* st = static_cast<ObjectiveState*>(params);
  ++st->evaluations;
  const Candidate c = from_vector(v->data, st->n_max);
  if (c.is_zero()) return kPi;
  if (fft_sign_changes(c) > st->d) return kPi;
  const double area = polar_fft_area(c, st->radii);
  if (area < st->best_verified && feasibility(c, st->d)) {
    st->best_verified = area;
    st->best_x.assign(v->data, v->data + 2 * st->n_max);
  }
  return area;
}

std::vector<double> to_vector(const Candidate& c) {
  std::vector<double> x(c.p);
  x.insert(x.end(), c.q.begin(), c.q.end());
  return x;
}

// One Nelder-Mead run; returns the best verified point (empty if none).
std::vector<double> nelder_mead(const std::vector<double>& start, int d, int radii, double step,
                                std::uint64_t budget, std::uint64_t& evaluations) {
  const std::size_t dim = start.size();
  ObjectiveState st;
  st.d = d;
  st.n_max = static_cast<int>(dim / 2);
  st.radii = radii;
  gsl_multimin_function fn{&objective, dim, &st};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* ss = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, start[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  while (st.evaluations < budget) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-9) == GSL_SUCCESS) break;
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  evaluations = st.evaluations;
  return st.best_x;
}

double parse_number(const json& v) { return v.is_string() ? std::stod(v.get<std::string>()) : v.get<double>(); }

json area_json(const AreaEstimate& a) {
  return {{"value", decimal17(a.value)},
          {"abs_error", decimal17(a.abs_error)},
          {"method", to_string(a.method)},
          {"budget", a.budget}};
}

AreaEstimate area_from_json(const json& j) {
  AreaEstimate a;
  a.value = parse_number(j.at("value"));
  a.abs_error = parse_number(j.at("abs_error"));
  a.method = area_method_from_string(j.at("method").get<std::string>());
  a.budget = j.at("budget").get<std::uint64_t>();
  return a;
}

json candidate_json(const Candidate& c) {
  json p = json::array(), q = json::array();
  for (double v : c.p) p.push_back(decimal17(v));
  for (double v : c.q) q.push_back(decimal17(v));
  return {{"schema", "nodal_lab.candidate"}, {"version", 1}, {"n_max", c.n_max()}, {"p", p}, {"q", q}, {"nu", c.nu}};
}

Candidate candidate_from(const json& j) {
  Candidate c;
  for (const auto& v : j.at("p")) c.p.push_back(parse_number(v));
  for (const auto& v : j.at("q")) c.q.push_back(parse_number(v));
  if (c.p.size() != c.q.size()) throw DomainError("candidate: p and q differ in length");
  c.nu = j.value("nu", -1);
  return c;
}

}  // namespace

// ---- candidates ---------------------------------------------------------------------

bool Candidate::is_zero() const {
  return std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; }) &&
         std::all_of(q.begin(), q.end(), [](double v) { return v == 0.0; });
}

double Candidate::operator()(std::complex<double> z) const {
  cplx acc = 0.0;
  for (int n = n_max(); n >= 1; --n) acc = (acc + cplx(p[n - 1], -q[n - 1])) * z;
  return acc.real();
}

RealField Candidate::field() const {
  const auto a = complex_coefficients(*this);
  return [a](cplx z) {
    cplx acc = 0.0;
    for (std::size_t n = a.size() - 1; n >= 1; --n) acc = (acc + a[n]) * z;
    return acc.real();
  };
}

Candidate Candidate::normalized() const {
  double m = 0.0;
  for (double v : p) m = std::max(m, std::abs(v));
  for (double v : q) m = std::max(m, std::abs(v));
  if (m == 0.0) throw DegenerateInputError("Candidate::normalized: zero candidate");
  Candidate c = *this;
  for (auto& v : c.p) v /= m;
  for (auto& v : c.q) v /= m;
  c.area.reset();
  return c;
}

Candidate Candidate::resized(int n) const {
  Candidate c;
  c.p = p;
  c.q = q;
  c.p.resize(static_cast<std::size_t>(n), 0.0);
  c.q.resize(static_cast<std::size_t>(n), 0.0);
  return c;
}

Candidate Candidate::monomial(int n, int n_max) {
  if (n < 1 || n > n_max) throw DomainError("Candidate::monomial: need 1 <= n <= n_max");
  Candidate c;
  c.p.assign(static_cast<std::size_t>(n_max), 0.0);
  c.q.assign(static_cast<std::size_t>(n_max), 0.0);
  c.p[n - 1] = 1.0;
  return c;
}

Candidate Candidate::from_polynomial(const std::vector<std::complex<double>>& alpha, int n_max) {
  Candidate c;
  c.p.assign(static_cast<std::size_t>(n_max), 0.0);
  c.q.assign(static_cast<std::size_t>(n_max), 0.0);
  for (int n = 1; n < static_cast<int>(alpha.size()); ++n) {
    if (n > n_max) {
      if (alpha[n] != 0.0) throw DomainError("Candidate::from_polynomial: degree exceeds n_max");
      continue;
    }
    c.p[n - 1] = alpha[n].real();
    c.q[n - 1] = -alpha[n].imag();
  }
  return c;
}

int candidate_sign_changes(const Candidate& c) {
  if (c.is_zero()) throw DegenerateInputError("sign changes of the zero candidate");
  return sign_changes_on_circle(c.field(), {0.0, 0.0}, 1.0, c.n_max());
}

bool feasibility(const Candidate& c, int d) { return candidate_sign_changes(c) <= d; }

double polar_fft_area(const Candidate& c, int n_radii) {
  const auto a = complex_coefficients(c);
  const std::size_t M = fft_size(c.n_max(), 8, 256);
  double area = 0.0;
  for (int i = 0; i < n_radii; ++i) {
    const double r = (i + 0.5) / n_radii;
    const auto u = circle_samples(a, r, M, 0.5);
    std::size_t pos = 0;
    for (double v : u) pos += v > 0.0;
    area += static_cast<double>(pos) * r;
  }
  return area * (1.0 / n_radii) * (2.0 * kPi / static_cast<double>(M));
}

int fft_sign_changes(const Candidate& c) {
  const auto u = circle_samples(complex_coefficients(c), 1.0, fft_size(c.n_max(), 32, 256));
  int last = 0, first = 0, count = 0;
  for (double v : u) {
    const int s = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (first == 0) first = s;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  if (first != 0 && last != first) ++count;
  return count;
}

// ---- estimator ------------------------------------------------------------------------

int canonical_class(int d) {
  if (d < 2) throw PreconditionError("Nadirashvili class needs d >= 2");
  return d - d % 2;
}

WarmStart warm_start(int d, const std::vector<ExtremalPolynomial>& constructions) {
  const int dc = canonical_class(d);
  std::vector<const ExtremalPolynomial*> sorted;
  for (const auto& P : constructions) sorted.push_back(&P);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->N > b->N; });
  for (const auto* P : sorted) {
    if (P->N > dc) continue;
    Candidate c = Candidate::from_polynomial(P->alpha, dc);
    c.nu = candidate_sign_changes(c);
    if (c.nu <= dc) return {c, P->N};
  }
  Candidate c = Candidate::monomial(dc / 2, dc);
  c.nu = dc;
  return {c, 0};
}

EstimateRecord minimize_area(int d, const NadirashviliConfig& config, const std::vector<ExtremalPolynomial>& constructions,
                             const Candidate* chained) {
  EstimateRecord rec;
  rec.requested_d = d;
  rec.d = canonical_class(d);
  rec.n_max = rec.d;
  rec.seed = config.seed;
  rec.budget = config.evaluation_budget;
  rec.restarts = std::max(config.restarts, 1);
  rec.caveat = "search restricted to harmonic polynomials of degree <= " + std::to_string(rec.n_max) +
               "; the estimate is an upper bound for the infimum over the full class";

  const WarmStart warm = warm_start(rec.d, constructions);
  rec.construction_degree = warm.N;

  struct Start {
    std::string source;
    Candidate c;
  };
  std::vector<Start> fixed{{warm.N > 0 ? "construction N=" + std::to_string(warm.N) : "monomial", warm.candidate.normalized()}};
  if (chained != nullptr && chained->n_max() <= rec.n_max && !chained->is_zero() && feasibility(*chained, rec.d)) {
    fixed.push_back({"chained", chained->resized(rec.n_max).normalized()});
  }
  if (warm.N > 0) fixed.push_back({"monomial", Candidate::monomial(rec.d / 2, rec.n_max)});

  // Restart k starts from fixed[k] while available, then from seeded
  // perturbations of the warm start.
  const std::uint64_t per_restart = std::max<std::uint64_t>(config.evaluation_budget / rec.restarts, 2 * rec.n_max + 2);
  std::vector<std::vector<double>> found(static_cast<std::size_t>(rec.restarts));
  std::vector<std::uint64_t> evals(found.size(), 0);
  std::vector<std::string> sources(found.size());
  parallel_for(found.size(), [&](std::size_t k) {
    std::vector<double> x0;
    if (k < fixed.size()) {
      x0 = to_vector(fixed[k].c);
      sources[k] = fixed[k].source;
    } else {
      auto rng = substream(config.seed ^ static_cast<std::uint64_t>(rec.d) * 0x9e3779b97f4a7c15ULL, k);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const auto base = to_vector(fixed[0].c);
      double sigma = 0.5;
      for (int attempt = 0; attempt < 12; ++attempt, sigma *= 0.5) {
        x0 = base;
        for (auto& v : x0) v += sigma * gauss(rng);
        const Candidate c = from_vector(x0.data(), rec.n_max);
        if (!c.is_zero() && fft_sign_changes(c) <= rec.d) break;
      }
      sources[k] = "perturbed restart " + std::to_string(k);
    }
    found[k] = nelder_mead(x0, rec.d, config.objective_radii, config.initial_step, per_restart, evals[k]);
  });

  // Certificates are compared on the grid-refined area; ties keep the lower index.
  std::vector<Start> pool = fixed;
  for (std::size_t k = 0; k < found.size(); ++k) {
    rec.evaluations += evals[k];
    if (!found[k].empty()) pool.push_back({sources[k] + " (optimised)", from_vector(found[k].data(), rec.n_max).normalized()});
  }
  std::vector<AreaEstimate> areas(pool.size());
  parallel_for(pool.size(), [&](std::size_t k) {
    areas[k] = positivity_area(pool[k].c.field(), Disc({0.0, 0.0}, 1.0), config.certificate_area);
  });
  std::size_t best = 0;
  for (std::size_t k = 1; k < pool.size(); ++k) {
    if (areas[k].value < areas[best].value) best = k;
  }
  rec.best = areas[best];
  rec.certificate = pool[best].c;
  rec.certificate.nu = candidate_sign_changes(rec.certificate);
  rec.certificate.area = rec.best;
  if (rec.certificate.nu > rec.d) throw std::logic_error("minimize_area: certificate is infeasible");
  rec.start_source = pool[best].source;
  rec.construction_upper_bound = areas[0].value;
  return rec;
}

std::vector<EstimateRecord> nadirashvili_sweep(const std::vector<int>& classes, const NadirashviliConfig& config,
                                               const std::vector<ExtremalPolynomial>& constructions) {
  std::vector<int> ds;
  for (int d : classes) ds.push_back(canonical_class(d));
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::vector<EstimateRecord> out;
  for (int d : ds) {
    const Candidate* prev = out.empty() ? nullptr : &out.back().certificate;
    out.push_back(minimize_area(d, config, constructions, prev));
  }
  return out;
}

AreaEstimate revalidate(const EstimateRecord& record, const AreaOptions& opt) {
  return positivity_area(record.certificate.field(), Disc({0.0, 0.0}, 1.0), opt);
}

std::string to_json(const EstimateRecord& r) {
  json doc = {
      {"schema", "nodal_lab.nadirashvili_estimate"},
      {"version", 1},
      {"d", r.d},
      {"requested_d", r.requested_d},
      {"n_max", r.n_max},
      {"best_area", area_json(r.best)},
      {"construction_upper_bound", decimal17(r.construction_upper_bound)},
      {"construction_degree", r.construction_degree},
      {"start_source", r.start_source},
      {"evaluations", r.evaluations},
      {"evaluation_budget", r.budget},
      {"restarts", r.restarts},
      {"seed", r.seed},
      {"caveat", r.caveat},
      {"certificate", candidate_json(r.certificate)},
  };
  return doc.dump(2);
}

EstimateRecord estimate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("estimate_from_json: ") + e.what());
  }
  if (doc.value("schema", "") != "nodal_lab.nadirashvili_estimate") throw DomainError("estimate_from_json: wrong schema");
  if (doc.value("version", 0) != 1) throw DomainError("estimate_from_json: unsupported version");
  EstimateRecord r;
  r.d = doc.at("d").get<int>();
  r.requested_d = doc.at("requested_d").get<int>();
  r.n_max = doc.at("n_max").get<int>();
  r.best = area_from_json(doc.at("best_area"));
  r.construction_upper_bound = parse_number(doc.at("construction_upper_bound"));
  r.construction_degree = doc.at("construction_degree").get<int>();
  r.start_source = doc.at("start_source").get<std::string>();
  r.evaluations = doc.at("evaluations").get<std::uint64_t>();
  r.budget = doc.at("evaluation_budget").get<std::uint64_t>();
  r.restarts = doc.at("restarts").get<int>();
  r.seed = doc.at("seed").get<std::uint64_t>();
  r.caveat = doc.at("caveat").get<std::string>();
  r.certificate = candidate_from(doc.at("certificate"));
  r.certificate.area = r.best;
  return r;
}

Candidate candidate_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("candidate_from_json: ") + e.what());
  }
  if (doc.contains("certificate")) return candidate_from(doc.at("certificate"));
  return candidate_from(doc);
}

}  // namespace nodal
