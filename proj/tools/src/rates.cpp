#include "nwidth/harness/rates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nwidth/asymptotics.hpp"

#ifndef NWIDTH_BUILD_TAG
#define NWIDTH_BUILD_TAG "unknown"
#endif

namespace nwidth::harness {

namespace {

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string build_tag() { return NWIDTH_BUILD_TAG; }

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("line fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("line fit needs distinct x values");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

bool RateSweep::upper_pass() const {
  return !records.empty() && std::abs(upper_fit.slope + records.front().theory_exponent) <= tolerance;
}

bool RateSweep::lower_pass() const {
  return !records.empty() && std::abs(lower_fit.slope + records.front().theory_exponent) <= tolerance;
}

RateSweep run_rate_sweep(const ExperimentConfig& config) {
  config.validate(true);
  const Regime regime = classify(config.alpha, config.p, config.q);
  if (regime.label == RegimeLabel::Inapplicable) {
    throw InapplicableError("no rate case applies: " + regime.violated());
  }
  RateSweep sweep;
  sweep.tolerance = config.slope_tolerance;
  std::vector<double> xs, up, lo, cx, cy;
  double band_min = kInfinity, band_max = 0.0;
  for (std::int64_t n = config.n_min; n <= config.n_max; n *= 2) {
    RateRecord r;
    r.n = n;
    r.k = choose_level(n, config.alpha).k;
    r.regime = to_string(regime.label);
    r.upper = upper_bound_value(config.alpha, config.p, config.q, n);
    r.lower = lower_bound_value(config.alpha, config.p, config.q, n);
    r.theory_exponent = regime.exponent;
    if (config.certificate && n <= 32 && config.alpha.size() <= 2 && std::isfinite(config.theta)) {
      CertificateOptions opts;
      opts.samples = config.certificate_samples;
      opts.seed = config.seed;
      opts.grid = config.t_grid;
      r.certificate = constructive_lower_certificate(config.alpha, config.p, config.theta, config.q,
                                                     static_cast<int>(n), opts);
      cx.push_back(std::log2(static_cast<double>(n)));
      cy.push_back(std::log2(*r.certificate));
    }
    const double x = std::log2(static_cast<double>(n));
    xs.push_back(x);
    up.push_back(std::log2(r.upper));
    lo.push_back(std::log2(r.lower));
    const double scaled = r.upper * std::pow(static_cast<double>(n), regime.exponent);
    band_min = std::min(band_min, scaled);
    band_max = std::max(band_max, scaled);
    sweep.records.push_back(std::move(r));
    if (n > config.n_max / 2) break;
  }
  sweep.upper_fit = fit_line(xs, up);
  sweep.lower_fit = fit_line(xs, lo);
  if (cx.size() >= 2) sweep.certificate_fit = fit_line(cx, cy);
  sweep.upper_band = band_max / band_min;
  return sweep;
}

void write_rates_csv(std::ostream& out, const RateSweep& sweep, const ExperimentConfig& config,
                     const std::string& tag) {
  out << "# config=" << config.to_json().dump() << " build=" << tag << "\n";
  out << "n,k,regime,upper,lower,certificate,theory_exponent\n";
  for (const auto& r : sweep.records) {
    out << r.n << ',' << r.k << ',' << r.regime << ',' << number(r.upper) << ',' << number(r.lower) << ','
        << (r.certificate ? number(*r.certificate) : "") << ',' << number(r.theory_exponent) << "\n";
  }
  const double theory = sweep.records.empty() ? 0.0 : -sweep.records.front().theory_exponent;
  out << "# fit upper slope=" << number(sweep.upper_fit.slope) << " theory=" << number(theory)
      << " tolerance=" << number(sweep.tolerance) << " pass=" << (sweep.upper_pass() ? 1 : 0) << "\n";
  out << "# fit lower slope=" << number(sweep.lower_fit.slope) << " theory=" << number(theory)
      << " tolerance=" << number(sweep.tolerance) << " pass=" << (sweep.lower_pass() ? 1 : 0) << "\n";
  if (sweep.certificate_fit) out << "# fit certificate slope=" << number(sweep.certificate_fit->slope) << "\n";
  out << "# upper band (max/min of upper*n^exponent)=" << number(sweep.upper_band) << "\n";
}

void write_plot_data(std::ostream& out, const RateSweep& sweep) {
  for (const auto& r : sweep.records) {
    const double x = std::log2(static_cast<double>(r.n));
    out << "upper " << number(x) << ' ' << number(std::log2(r.upper)) << "\n";
  }
  for (const auto& r : sweep.records) {
    const double x = std::log2(static_cast<double>(r.n));
    out << "lower " << number(x) << ' ' << number(std::log2(r.lower)) << "\n";
  }
  for (const auto& r : sweep.records) {
    if (!r.certificate) continue;
    const double x = std::log2(static_cast<double>(r.n));
    out << "certificate " << number(x) << ' ' << number(std::log2(*r.certificate)) << "\n";
  }
}

}  // namespace nwidth::harness
