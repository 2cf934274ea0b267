#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwidth/indexgrid.hpp"
#include "nwidth/moduli.hpp"

namespace nwidth::harness {

/// Thrown for malformed or out-of-range parameters (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::vector<double> alpha{1.0};
  double p = 2.0;
  double q = 2.0;
  double theta = kInfinity;
  std::int64_t n_min = 64;
  std::int64_t n_max = 16384;
  std::uint64_t seed = 1;
  int trials = 100;
  TGrid t_grid{};
  int xi_panels = 64;
  int inner_nodes = 8;
  /// Compute the bump certificate for sweep points with n <= 32.
  bool certificate = false;
  int certificate_samples = 8;
  double slope_tolerance = 0.05;
  std::string out;

  /// Reads every known key; unknown keys are rejected.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;

  /// Checks the exponent ranges and, for sweeps, n_min >= 2 R_0 and n_max >= 4 n_min.
  void validate(bool sweep) const;
  ModulusOptions modulus_options() const;
};

/// "1,2.5" -> {1, 2.5}; "inf" parses as infinity.
std::vector<double> parse_list(const std::string& text);
double parse_exponent(const std::string& text);

}  // namespace nwidth::harness
