#include "nwidth/harness/reports.hpp"

#include <algorithm>
#include <cmath>

#include "nwidth/fdwidths.hpp"
#include "nwidth/moduli.hpp"

namespace nwidth::harness {

namespace {

nlohmann::json norms_json(const PrimedNorms& n) {
  return nlohmann::json{{"lp", n.lp}, {"seminorms", n.seminorms}, {"total", n.total}};
}

nlohmann::json exponent_json(double v) {
  if (v == kInfinity) return "inf";
  return v;
}

}  // namespace

nlohmann::json widths_report(const WidthsRequest& r) {
  if (r.rho.empty()) throw ConfigError("rho must not be empty");
  for (double v : r.rho) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("semi-axes must be positive and finite");
  }
  if (!(r.p >= 1.0)) throw ConfigError("p must lie in [1, inf]");
  if (!(r.q >= 1.0)) throw ConfigError("q must lie in [1, inf]");
  const auto dim = static_cast<std::int64_t>(r.rho.size());
  if (r.n < 1 || r.n > dim) throw ConfigError("n must lie in [1, " + std::to_string(dim) + "]");
  if (r.trials < 0) throw ConfigError("trials must be >= 0");

  const Ellipsoid body(r.rho, r.p);
  nlohmann::json out{{"rho", body.semi_axes()}, {"p", exponent_json(r.p)}, {"q", exponent_json(r.q)}, {"n", r.n}};
  std::vector<std::string> notes;
  if (r.p < r.q) {
    out["exact"] = width_ellipsoid_exact(body.semi_axes(), r.p, r.q, r.n);
  } else {
    notes.push_back("exact formula inapplicable (requires p<q)");
  }
  if (r.p == kInfinity && r.q == 2.0) {
    out["box_l2_upper"] = width_box_l2_upper(body.semi_axes(), r.n);
  } else {
    notes.push_back("box-in-l2 bound applies only to p=inf, q=2");
  }
  const OracleResult o = width_oracle(body, r.q, r.n, r.trials, r.seed);
  out["oracle"] = {{"value", o.value}, {"trials", o.trials}, {"seed", o.seed}, {"best_trial", o.best_trial}};
  out["notes"] = notes;
  return out;
}

nlohmann::json norm_report(const NormRequest& r) {
  if (r.alpha.empty()) throw ConfigError("alpha must not be empty");
  GridFunction f = [&] {
    try {
      return make_catalog_function(r.function, r.alpha.size());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  nlohmann::json out{{"function", r.function}, {"alpha", r.alpha}, {"p", r.p}};
  out["nikolskii"] = norms_json(nikolskii_norm(f, r.alpha, r.p, r.grid, r.options));
  if (r.theta) {
    out["theta"] = exponent_json(*r.theta);
    out["besov"] = norms_json(besov_norm(f, r.alpha, r.p, *r.theta, r.grid, r.options));
  }
  return out;
}

}  // namespace nwidth::harness
