#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwidth/harness/config.hpp"

namespace nwidth::harness {

struct WidthsRequest {
  std::vector<double> rho;
  double p = 1.0;
  double q = 2.0;
  std::int64_t n = 1;
  int trials = 100;
  std::uint64_t seed = 1;
};

/// Exact width (p < q), the box-in-l2 bound (p = inf, q = 2) and the sampling
/// oracle. Inapplicable formulas are reported by a "note" string.
nlohmann::json widths_report(const WidthsRequest& request);

struct NormRequest {
  std::string function;
  std::vector<double> alpha;
  double p = 1.0;
  std::optional<double> theta;
  TGrid grid{};
  ModulusOptions options{};
};

/// lp, per-direction seminorms and totals of the Nikolskii-type norm and,
/// when theta is given, of the Besov-type norm.
nlohmann::json norm_report(const NormRequest& request);

}  // namespace nwidth::harness
