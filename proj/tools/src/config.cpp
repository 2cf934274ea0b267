#include "nwidth/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nwidth/asymptotics.hpp"

namespace nwidth::harness {

namespace {

double exponent_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_exponent(v.get<std::string>());
  if (v.is_null()) return kInfinity;
  return v.get<double>();
}

nlohmann::json exponent_to_json(double v) {
  if (v == kInfinity) return "inf";
  return v;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_exponent(item));
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

double parse_exponent(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return kInfinity;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("not a number: '" + text + "'");
  return v;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known{"alpha", "p", "q", "theta", "n_min", "n_max", "seed", "trials",
                                           "t_grid", "xi_panels", "inner_nodes", "certificate",
                                           "certificate_samples", "slope_tolerance", "out"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("alpha")) c.alpha = j["alpha"].get<std::vector<double>>();
    if (j.contains("p")) c.p = exponent_from_json(j["p"]);
    if (j.contains("q")) c.q = exponent_from_json(j["q"]);
    if (j.contains("theta")) c.theta = exponent_from_json(j["theta"]);
    if (j.contains("n_min")) c.n_min = j["n_min"].get<std::int64_t>();
    if (j.contains("n_max")) c.n_max = j["n_max"].get<std::int64_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("t_grid")) {
      const auto& g = j["t_grid"];
      c.t_grid.log2_min = g.value("log2_min", c.t_grid.log2_min);
      c.t_grid.log2_max = g.value("log2_max", c.t_grid.log2_max);
      c.t_grid.log2_ratio = g.value("log2_ratio", c.t_grid.log2_ratio);
    }
    if (j.contains("xi_panels")) c.xi_panels = j["xi_panels"].get<int>();
    if (j.contains("inner_nodes")) c.inner_nodes = j["inner_nodes"].get<int>();
    if (j.contains("certificate")) c.certificate = j["certificate"].get<bool>();
    if (j.contains("certificate_samples")) c.certificate_samples = j["certificate_samples"].get<int>();
    if (j.contains("slope_tolerance")) c.slope_tolerance = j["slope_tolerance"].get<double>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  return nlohmann::json{{"alpha", alpha},
                        {"p", exponent_to_json(p)},
                        {"q", exponent_to_json(q)},
                        {"theta", exponent_to_json(theta)},
                        {"n_min", n_min},
                        {"n_max", n_max},
                        {"seed", seed},
                        {"trials", trials},
                        {"t_grid", {{"log2_min", t_grid.log2_min},
                                    {"log2_max", t_grid.log2_max},
                                    {"log2_ratio", t_grid.log2_ratio}}},
                        {"xi_panels", xi_panels},
                        {"inner_nodes", inner_nodes},
                        {"certificate", certificate},
                        {"certificate_samples", certificate_samples},
                        {"slope_tolerance", slope_tolerance},
                        {"out", out}};
}

void ExperimentConfig::validate(bool sweep) const {
  try {
    validate_alpha(alpha);
    t_grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("p must lie in [1, inf)");
  if (!(q >= 1.0)) throw ConfigError("q must lie in [1, inf]");
  if (!(theta >= 1.0)) throw ConfigError("theta must lie in [1, inf]");
  if (trials < 0) throw ConfigError("trials must be >= 0");
  if (xi_panels < 1 || inner_nodes < 1) throw ConfigError("quadrature parameters must be positive");
  if (!(slope_tolerance > 0.0)) throw ConfigError("slope_tolerance must be positive");
  if (!sweep) return;
  const std::int64_t n0 = minimal_n(alpha);
  if (n_min < n0) {
    throw ConfigError("n_min=" + std::to_string(n_min) + " is below the first admissible n=" + std::to_string(n0));
  }
  if (n_max < 4 * n_min) throw ConfigError("n_max must be at least 4 * n_min (three dyadic points)");
}

ModulusOptions ExperimentConfig::modulus_options() const {
  ModulusOptions o;
  o.xi_panels = xi_panels;
  o.inner_nodes = inner_nodes;
  return o;
}

}  // namespace nwidth::harness
