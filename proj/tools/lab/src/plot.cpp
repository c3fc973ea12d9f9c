#include "lab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lab {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;  // in transformed units

  double transform(double v) const { return log ? std::log10(v) : v; }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

  void fit(const std::vector<double>& values) {
    double a = INFINITY, b = -INFINITY;
    for (double v : values) {
      if (!usable(v)) continue;
      a = std::min(a, transform(v));
      b = std::max(b, transform(v));
    }
    if (!std::isfinite(a)) {
      lo = 0.0;
      hi = 1.0;
      return;
    }
    if (b - a < 1e-12) {
      a -= 0.5;
      b += 0.5;
    }
    const double pad = 0.05 * (b - a);
    lo = a - pad;
    hi = b + pad;
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      for (double e = std::ceil(lo); e <= hi + 1e-12; e += 1.0) out.push_back(std::pow(10.0, e));
      if (out.size() >= 2) return out;
      out.clear();
    }
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12; t += step) out.push_back(log ? std::pow(10.0, t) : t);
    return out;
  }
};

}  // namespace

std::string SvgPlot::render() const {
  Axis ax{log_x}, ay{log_y};
  std::vector<double> xs, ys;
  for (const auto& s : series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  ax.fit(xs);
  ay.fit(ys);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return kTop + ph - (ay.transform(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fixed(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  s << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(pw) << "\" height=\""
    << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ax.ticks()) {
    const double x = px(t);
    s << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(kTop + ph) << "\" x2=\"" << fixed(x) << "\" y2=\""
      << fixed(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(kTop + ph + 18) << "\" text-anchor=\"middle\">"
      << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    s << "<line x1=\"" << fixed(kLeft - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft) << "\" y2=\""
      << fixed(y) << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">" << tick_label(t)
      << "</text>\n";
  }
  s << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 15)
    << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  s << "<text transform=\"translate(18," << fixed(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  int legend_row = 0;
  for (const auto& ser : series) {
    if (ser.line) {
      std::ostringstream pts;
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (!ax.usable(ser.x[i]) || !ay.usable(ser.y[i])) continue;
        pts << (pts.tellp() > 0 ? " " : "") << fixed(px(ser.x[i])) << "," << fixed(py(ser.y[i]));
      }
      s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
        << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < ser.x.size(); ++i) {
        if (!ax.usable(ser.x[i]) || !ay.usable(ser.y[i])) continue;
        s << "<circle cx=\"" << fixed(px(ser.x[i])) << "\" cy=\"" << fixed(py(ser.y[i])) << "\" r=\"3\" fill=\""
          << ser.color << "\"/>\n";
      }
    }
    if (!ser.label.empty()) {
      const double y = kTop + 14 + 16 * legend_row++;
      s << "<rect x=\"" << fixed(kLeft + pw - 190) << "\" y=\"" << fixed(y - 8) << "\" width=\"10\" height=\"10\" fill=\""
        << ser.color << "\"/>\n";
      s << "<text x=\"" << fixed(kLeft + pw - 175) << "\" y=\"" << fixed(y + 1) << "\">" << escape(ser.label)
        << "</text>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

namespace {

double constant_or(const ExperimentReport& r, const std::string& name, double fallback) {
  for (const auto& c : r.constants) {
    if (c.name == name) return c.value;
  }
  return fallback;
}

std::vector<double> grid_between(const std::vector<double>& x, int n, bool log) {
  std::vector<double> out;
  if (x.empty()) return out;
  const double a = *std::min_element(x.begin(), x.end()), b = *std::max_element(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    out.push_back(log ? a * std::pow(b / a, t) : a + (b - a) * t);
  }
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

Series points(std::string label, std::vector<double> x, std::vector<double> y) {
  return {std::move(label), std::move(x), std::move(y), false, "#1f77b4"};
}

Series curve(std::string label, std::vector<double> x, std::vector<double> y, std::string color = "#d62728") {
  return {std::move(label), std::move(x), std::move(y), true, std::move(color)};
}

}  // namespace

std::vector<std::pair<std::string, SvgPlot>> report_plots(const ExperimentReport& r) {
  std::vector<std::pair<std::string, SvgPlot>> out;
  if (r.experiment == "E1") {
    const Table& t = r.table("e1_corpus");
    std::vector<double> x = t.numbers("beta"), y = t.numbers("nu_half");
    for (auto& v : x) v += 1.0;
    SvgPlot p{"Sign changes on the half circle vs doubling exponent", "beta(D, u) + 1 [boundary maxima]",
              "nu(T/2, u) [bisection-refined count]", false, false, {points("corpus", x, y)}};
    const double C = constant_or(r, "C_gelfond", 0.0);
    if (C > 0.0 && !x.empty()) {
      const auto gx = grid_between(x, 2, false);
      p.series.push_back(curve("C (beta + 1)", gx, {C * gx[0], C * gx[1]}));
    }
    out.emplace_back("e1_gelfond.svg", p);
  } else if (r.experiment == "E2") {
    const Table& t = r.table("e2_corpus");
    std::vector<double> x = t.numbers("beta_star"), y = t.numbers("area");
    for (auto& v : x) v = std::log(v);
    SvgPlot p{"Positivity area vs log doubling exponent", "log beta* [boundary maxima]",
              "Area({u > 0}) [grid-refined]", false, false, {points("corpus", x, y)}};
    const double c0 = constant_or(r, "c0_area", 0.0);
    if (c0 > 0.0 && !x.empty()) {
      const auto gx = grid_between(x, 40, false);
      std::vector<double> gy;
      for (double v : gx) gy.push_back(c0 / v);
      p.series.push_back(curve("c0 / log beta*", gx, gy));
    }
    out.emplace_back("e2_area.svg", p);
  } else if (r.experiment == "E3") {
    const Table& t = r.table("e3_sweep");
    const auto N = t.numbers("N"), a = t.numbers("area_ratio_margin0");
    SvgPlot p{"Positivity area ratio of Re P_N", "N [degree]", "Area ratio [grid-refined]", true, true,
              {points("area ratio", N, a)}};
    if (!N.empty()) {
      const double C = median(t.numbers("area_ratio_times_logN"));
      const auto gx = grid_between(N, 40, true);
      std::vector<double> gy;
      for (double v : gx) gy.push_back(C / std::log(v));
      p.series.push_back(curve("C / log N", gx, gy));
    }
    out.emplace_back("e3_area_vs_N.svg", p);
  } else if (r.experiment == "E4") {
    const Table& t = r.table("e4_transplant");
    const auto lam = t.numbers("lambda"), a = t.numbers("area_ratio");
    SvgPlot p{"Spherical positivity ratio in D_N", "lambda = N(N+1)", "Area_s ratio [grid-refined, area-preserving chart]",
              true, true, {points("area ratio", lam, a)}};
    if (!lam.empty()) {
      const double C = constant_or(r, "C_prime", median(t.numbers("area_ratio_times_log_lambda")));
      const auto gx = grid_between(lam, 40, true);
      std::vector<double> gy;
      for (double v : gx) gy.push_back(C / std::log(v));
      p.series.push_back(curve("C' / log lambda", gx, gy));
    }
    out.emplace_back("e4_transplant.svg", p);
  } else if (r.experiment == "E5") {
    const Table& t = r.table("e5_beltrami");
    const auto q = t.numbers("q_norm"), mu = t.numbers("sup_mu");
    SvgPlot p{"Beltrami coefficient vs potential size", "||q||_inf [64 x 128 polar grid]",
              "sup |mu| [cell centres, 100 x 100]", false, false, {points("family t q0", q, mu)}};
    const double slope = constant_or(r, "mu_fit_slope", 0.0), icpt = constant_or(r, "mu_fit_intercept", 0.0);
    if (!q.empty()) {
      const auto gx = grid_between(q, 2, false);
      p.series.push_back(curve("linear fit", gx, {slope * gx[0] + icpt, slope * gx[1] + icpt}));
    }
    out.emplace_back("e5_beltrami.svg", p);
  } else if (r.experiment == "E6") {
    const Table& t = r.table("e6_sweep");
    const auto d = t.numbers("d"), v = t.numbers("area_times_log_d");
    SvgPlot p{"Estimated Nadirashvili constants", "d [sign-change class]", "N_d log d [grid-refined certificate area]",
              true, false, {points("N_d log d", d, v)}};
    if (!d.empty()) {
      const auto lo = *std::min_element(v.begin(), v.end()), hi = *std::max_element(v.begin(), v.end());
      const auto gx = grid_between(d, 2, true);
      p.series.push_back(curve("band low", gx, {lo, lo}, "#2ca02c"));
      p.series.push_back(curve("band high", gx, {hi, hi}, "#2ca02c"));
    }
    out.emplace_back("e6_band.svg", p);
  } else if (r.experiment == "E7") {
    const Table& t = r.table("e7_samples");
    SvgPlot p{"Doubling statistics vs nodal length", "Length / sqrt(lambda) [marching squares, round metric]",
              "B1 [mean doubling exponent, polar grid]", false, false,
              {points("random eigenfunctions", t.numbers("length_scaled"), t.numbers("B1"))}};
    out.emplace_back("e7_yau.svg", p);
  } else {
    throw UsageError("no plots defined for experiment " + r.experiment);
  }
  return out;
}

std::vector<std::filesystem::path> plot_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& [name, plot] : report_plots(report)) {
    const auto path = dir / name;
    write_text(path, plot.render());
    written.push_back(path);
  }
  return written;
}

}  // namespace lab
