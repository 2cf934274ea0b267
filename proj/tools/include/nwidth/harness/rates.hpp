#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nwidth/harness/config.hpp"

namespace nwidth::harness {

struct RateRecord {
  std::int64_t n = 0;
  int k = 0;
  std::string regime;
  double upper = 0.0;
  double lower = 0.0;
  std::optional<double> certificate;
  double theory_exponent = 0.0;
};

/// Ordinary least squares y = slope * x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct RateSweep {
  std::vector<RateRecord> records;
  LineFit upper_fit;
  LineFit lower_fit;
  std::optional<LineFit> certificate_fit;
  /// max / min over the sweep of upper * n^{exponent}.
  double upper_band = 0.0;
  double tolerance = 0.05;

  bool upper_pass() const;
  bool lower_pass() const;
};

/// Dyadic n from n_min to n_max. Throws InapplicableError when no rate case
/// applies and ConfigError for invalid sweeps.
RateSweep run_rate_sweep(const ExperimentConfig& config);

/// CSV with a leading "# config=<json> build=<tag>" line, the header
/// n,k,regime,upper,lower,certificate,theory_exponent, one row per record and
/// a commented fit footer.
void write_rates_csv(std::ostream& out, const RateSweep& sweep, const ExperimentConfig& config,
                     const std::string& build_tag);
/// Lines "series log2(n) log2(value)" for upper, lower and certificate.
void write_plot_data(std::ostream& out, const RateSweep& sweep);

/// Build identifier compiled into the harness.
std::string build_tag();

}  // namespace nwidth::harness
