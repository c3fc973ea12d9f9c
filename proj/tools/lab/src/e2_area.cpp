#include <algorithm>
#include <cmath>
#include <numbers>

#include "lab/corpus.hpp"
#include "lab/experiments.hpp"
#include "nodal/metrics.hpp"
#include "nodal/parallel.hpp"

namespace lab {
namespace {

constexpr double kPi = std::numbers::pi;

struct Sample {
  int degree = 0;
  double beta = 0.0;
  nodal::AreaEstimate area;
  double beta_star() const { return std::max(beta, 3.0); }
  double product() const { return area.value * std::log(beta_star()); }
};

std::vector<Sample> measure(const std::vector<HarmonicPolynomial>& corpus, const nodal::AreaOptions& opt) {
  std::vector<Sample> out(corpus.size());
  nodal::parallel_for(corpus.size(), [&](std::size_t i) {
    const auto& p = corpus[i];
    nodal::DoublingOptions d;
    d.boundary_only = true;
    d.hint_degree = p.degree;
    const nodal::Disc unit({0.0, 0.0}, 1.0);
    out[i] = {p.degree, nodal::doubling_exponent(p.field(), unit, d), nodal::positivity_area(p.field(), unit, opt)};
  });
  return out;
}

double min_product(const std::vector<Sample>& s) {
  double m = INFINITY;
  for (const auto& x : s) m = std::min(m, x.product());
  return m;
}

}  // namespace

ExperimentReport run_harmonic_area(const ExperimentConfig& config) {
  ExperimentReport r;
  r.experiment = "E2";
  const nodal::Disc unit({0.0, 0.0}, 1.0);
  nodal::AreaOptions grid;
  grid.budget = config.scaled(static_cast<std::uint64_t>(config.get_int("area_budget")), 10000);
  nodal::AreaOptions mc;
  mc.method = nodal::AreaMethod::MonteCarlo;
  mc.budget = config.scaled(static_cast<std::uint64_t>(config.get_int("mc_budget")), 10000);
  mc.seed = config.seed;

  // Oracles on Re z.
  const auto re_z = [](std::complex<double> z) { return z.real(); };
  const auto g = nodal::positivity_area(re_z, unit, grid);
  const auto m = nodal::positivity_area(re_z, unit, mc);
  Table& oracle = r.add_table("e2_oracles", "area of {Re z > 0} in the unit disc, exact value pi/2",
                              {"method", "budget", "value", "abs_error", "deviation"});
  oracle.add({nodal::to_string(g.method), g.budget, g.value, g.abs_error, g.value - kPi / 2});
  oracle.add({nodal::to_string(m.method), m.budget, m.value, m.abs_error, m.value - kPi / 2});
  r.check(2, "Area({Re z > 0}) = pi/2 within 1e-3, grid-refined", std::abs(g.value - kPi / 2) <= 1e-3,
          "deviation " + format_number(g.value - kPi / 2));
  r.check(2, "Area({Re z > 0}) = pi/2 within Monte-Carlo bars", std::abs(m.value - kPi / 2) <= m.abs_error,
          "deviation " + format_number(m.value - kPi / 2) + ", bar " + format_number(m.abs_error) + " at " +
              std::to_string(m.budget) + " samples");

  // Complement identity.
  const int n_comp = config.get_int("complement_count");
  const auto comp_corpus = harmonic_corpus(config.seed + 0x5eed, n_comp, config.get_int("max_degree"));
  std::vector<std::pair<nodal::AreaEstimate, nodal::AreaEstimate>> comp(comp_corpus.size());
  nodal::parallel_for(comp.size(), [&](std::size_t i) {
    const auto f = comp_corpus[i].field();
    comp[i] = {nodal::positivity_area(f, unit, grid),
               nodal::positivity_area([&f](std::complex<double> z) { return -f(z); }, unit, grid)};
  });
  Table& ct = r.add_table("e2_complement", "grid-refined areas of {u > 0} and {-u > 0}",
                          {"index", "degree", "area_pos", "area_neg", "sum_minus_pi", "abs_error"});
  bool comp_ok = true;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const double dev = comp[i].first.value + comp[i].second.value - kPi;
    const double bar = comp[i].first.abs_error + comp[i].second.abs_error;
    comp_ok = comp_ok && std::abs(dev) <= bar;
    ct.add({static_cast<int>(i), comp_corpus[i].degree, comp[i].first.value, comp[i].second.value, dev, bar});
  }
  r.check(2, "complement identity within combined bars", comp_ok, std::to_string(n_comp) + " seeded polynomials");

  // Area times log beta* on two corpora.
  const int size = config.get_int("corpus_size"), max_degree = config.get_int("max_degree");
  const std::uint64_t seed_b = config.seed + static_cast<std::uint64_t>(config.get_int("alt_seed_offset"));
  const auto a = measure(harmonic_corpus(config.seed, size, max_degree), grid);
  const auto b = measure(harmonic_corpus(seed_b, size, max_degree), grid);
  Table& t = r.add_table("e2_corpus", "area: grid-refined; beta: boundary maxima",
                         {"corpus", "index", "degree", "beta", "beta_star", "area", "abs_error", "area_times_log_beta_star"});
  for (const auto* set : {&a, &b}) {
    for (std::size_t i = 0; i < set->size(); ++i) {
      const auto& s = (*set)[i];
      t.add({set == &a ? "A" : "B", static_cast<int>(i), s.degree, s.beta, s.beta_star(), s.area.value,
             s.area.abs_error, s.product()});
    }
  }
  const double ca = min_product(a), cb = min_product(b);
  r.add_constant("c0_area", ca, "min of Area({u > 0}) log beta* over corpus A");
  r.add_constant("c0_area_alt_seed", cb, "same over corpus B");
  const double spread = std::abs(ca - cb) / std::max(ca, cb);
  r.check(4, "min Area log beta* > 0", ca > 0.0 && cb > 0.0, "c0 = " + format_number(ca) + ", alt seed " + format_number(cb));
  r.check(4, "c0 stable within 50% across corpus seeds", spread <= 0.5, "relative spread " + format_number(spread));
  return r;
}

}  // namespace lab
