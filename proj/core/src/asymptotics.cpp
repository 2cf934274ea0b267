#include "nwidth/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nwidth/fdwidths.hpp"
#include "nwidth/quadrature.hpp"

namespace nwidth {

namespace {

MultiIndex reduced_degree(std::span<const double> alpha) {
  std::vector<int> d;
  for (int l : smoothness_order(alpha)) d.push_back(l - 1);
  return MultiIndex(std::move(d));
}

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Runs (rho_j, R_{k+j}) of the upper-bound pipeline.
std::vector<AxisGroup> axis_runs(std::span<const double> alpha, const MultiIndex& degree, int k,
                                 double exponent, double slack) {
  const std::int64_t base = space_dimension(degree, alpha, k);
  std::vector<AxisGroup> runs;
  double running = 0.0;  // sum rho^2 * multiplicity so far
  std::int64_t total = 0;
  bool doubled = false;
  for (int j = 1; j <= 40; ++j) {
    std::int64_t count = 0;
    try {
      count = space_dimension(degree, alpha, k + j);
    } catch (const std::overflow_error&) {
      break;
    }
    if (count > (std::int64_t{1} << 62) - total) break;
    const double rho = std::exp2(-(k + j) * exponent + slack * j);
    const double term = rho * std::sqrt(static_cast<double>(count));
    if (doubled && term < 1e-6 * std::sqrt(running)) break;
    runs.push_back(AxisGroup{rho, count});
    total += count;
    running += rho * rho * static_cast<double>(count);
    if (count >= 2 * base) doubled = true;
  }
  return runs;
}

double positive_part(double v) { return std::max(v, 0.0); }

}  // namespace

std::string to_string(RegimeLabel label) {
  switch (label) {
    case RegimeLabel::R1: return "R1";
    case RegimeLabel::R2: return "R2";
    case RegimeLabel::R3: return "R3";
    case RegimeLabel::Inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

std::string Regime::violated() const {
  std::string out;
  for (const auto& c : conditions) {
    if (c.satisfied) continue;
    if (!out.empty()) out += ", ";
    out += c.name + " (value " + format_value(c.value) + ")";
  }
  return out;
}

Regime classify(std::span<const double> alpha, double p, double q) {
  validate_alpha(alpha);
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must lie in [1, inf)");
  if (!(q >= 1.0)) throw std::invalid_argument("q must lie in [1, inf]");
  const double a = harmonic_sum(alpha);
  const double ip = 1.0 / p;
  const double iq = reciprocal(q);
  Regime r;
  auto cond = [&](std::string name, double value, bool ok) { r.conditions.push_back({std::move(name), value, ok}); };

  if ((q <= p && p <= 2.0) || q == p) {
    r.label = RegimeLabel::R1;
    r.exponent = 1.0 / a;
    cond(q == p ? "q = p" : "q <= p <= 2", 0.0, true);
  } else if (p < q) {
    const double m = 1.0 - a * ip + a * iq;
    cond("p < q", 0.0, true);
    cond("1 - A/p + A/q > 0", m, m > 0.0);
    if (m > 0.0) {
      r.label = RegimeLabel::R1;
      r.exponent = 1.0 / a;
    }
  } else if (q < 2.0) {  // q < p, p > 2
    const double m = 1.0 - a * ip;
    cond("q < 2 < p", 0.0, true);
    cond("1 - A/p > 0", m, m > 0.0);
    if (m > 0.0) {
      r.label = RegimeLabel::R2;
      r.exponent = 1.0 / a - ip + 0.5;
    }
  } else {  // 2 < q < p
    const double m = 1.0 - a * ip + a * iq - a / 2.0;
    cond("2 <= q < p", 0.0, true);
    cond("1 - A/p + A/q - A/2 > 0", m, m > 0.0);
    if (m > 0.0) {
      r.label = RegimeLabel::R3;
      r.exponent = 1.0 / a - ip + iq;
    }
  }
  const double embed = 1.0 - a * positive_part(ip - iq);
  cond("1 - A(1/p - 1/q)_+ > 0", embed, embed > 0.0);
  return r;
}

std::int64_t minimal_n(std::span<const double> alpha) {
  return 2 * space_dimension(reduced_degree(alpha), alpha, 0);
}

LevelChoice choose_level(std::int64_t n, std::span<const double> alpha) {
  const MultiIndex degree = reduced_degree(alpha);
  const std::int64_t n0 = 2 * space_dimension(degree, alpha, 0);
  if (n < n0) {
    throw InapplicableError("n=" + std::to_string(n) + " is below the first admissible n=" + std::to_string(n0));
  }
  int k = 0;
  std::int64_t rk = n0 / 2;
  while (true) {
    const std::int64_t next = space_dimension(degree, alpha, k + 1);
    if (next > n / 2) break;
    ++k;
    rk = next;
  }
  return LevelChoice{k, rk};
}

double upper_bound_value(std::span<const double> alpha, double p, double q, std::int64_t n) {
  const Regime regime = classify(alpha, p, q);
  if (regime.label == RegimeLabel::Inapplicable) {
    throw InapplicableError("no rate case applies: " + regime.violated());
  }
  const LevelChoice level = choose_level(n, alpha);
  const int k = level.k;
  if ((q <= p && p <= 2.0) || q == p) return std::exp2(-k);

  const double a = harmonic_sum(alpha);
  const double ip = 1.0 / p;
  const double iq = reciprocal(q);
  const MultiIndex degree = reduced_degree(alpha);
  if (p > std::max(2.0, q)) {
    const double exponent = 1.0 - a * ip + a * iq - a * positive_part(iq - 0.5);
    const double margin = 1.0 - a * ip - a * positive_part(0.5 - iq);
    const auto runs = axis_runs(alpha, degree, k, exponent, margin / 2.0);
    return width_box_l2_upper(std::span<const AxisGroup>(runs), level.dimension);
  }
  // p < q
  const double margin = 1.0 - a * ip + a * iq;
  const double slack = margin / 4.0 + margin / 4.0;
  const auto runs = axis_runs(alpha, degree, k, margin, slack);
  return width_ellipsoid_exact(std::span<const AxisGroup>(runs), p, q, level.dimension);
}

double lower_bound_value(std::span<const double> alpha, double p, double q, std::int64_t n) {
  const AnisoParams params(std::vector<double>(alpha.begin(), alpha.end()), p, q);
  if (!params.embeds_into_lq()) {
    throw InapplicableError("embedding condition 1 - A(1/p - 1/q)_+ > 0 fails (value " +
                            format_value(params.embedding_margin()) + ")");
  }
  if (n < 1) throw std::invalid_argument("lower_bound_value needs n >= 1");
  const double a = params.harmonic_sum();
  const double e = -1.0 / a + 1.0 / p - reciprocal(q);
  return std::pow(static_cast<double>(n), e) * width_shell_lower_rate(p, q, n);
}

double bump(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    if (!(v > 0.0 && v < 1.0)) return 0.0;
    s += 1.0 / (v * (1.0 - v));
  }
  return std::exp(-s);
}

double bump_norm(std::size_t dim, double r) {
  if (dim == 0) throw std::invalid_argument("bump_norm needs dim >= 1");
  if (!(r >= 1.0)) throw std::invalid_argument("bump_norm needs r >= 1");
  if (r == kInfinity) return std::exp(-4.0 * static_cast<double>(dim));
  QuadratureRule rule = QuadratureRule::adaptive_default(10);
  rule.rel_tol = 1e-15;
  rule.abs_tol = 1e-300;
  rule.max_level = 30;
  const double one_d = integrate(Box::unit(1), rule, [r](std::span<const double> x) {
    const double v = x[0];
    if (!(v > 0.0 && v < 1.0)) return 0.0;
    return std::exp(-r / (v * (1.0 - v)));
  });
  return std::pow(one_d, static_cast<double>(dim) / r);
}

double BumpSystem::evaluate(std::span<const double> beta, std::span<const double> x) const {
  const std::size_t d = dim();
  std::int64_t index = 0;
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (!(x[j] > 0.0 && x[j] < 1.0)) return 0.0;
    const double y = resolution[j] * x[j];
    const double cell = std::min(std::floor(y), static_cast<double>(resolution[j] - 1));
    const double u = y - cell;
    if (!(u > 0.0 && u < 1.0)) return 0.0;
    s += 1.0 / (u * (1.0 - u));
    index = index * resolution[j] + static_cast<std::int64_t>(cell);
  }
  const std::int64_t slot = lookup_[static_cast<std::size_t>(index)];
  if (slot < 0) return 0.0;
  return beta[static_cast<std::size_t>(slot)] * std::exp(-s);
}

GridFunction BumpSystem::function(std::vector<double> beta) const {
  if (beta.size() != size()) throw std::invalid_argument("bump coefficient vector has wrong length");
  auto self = std::make_shared<const BumpSystem>(*this);
  auto coeffs = std::make_shared<const std::vector<double>>(std::move(beta));
  return GridFunction(dim(), [self, coeffs](std::span<const double> x) { return self->evaluate(*coeffs, x); },
                      "bump-system");
}

double BumpSystem::lp_norm(std::span<const double> beta, double r, int sub, int nodes) const {
  if (beta.size() != size()) throw std::invalid_argument("bump coefficient vector has wrong length");
  if (!(r >= 1.0)) throw std::invalid_argument("r must be >= 1");
  const std::size_t d = dim();
  double acc = 0.0;
  std::vector<double> center(d);
  for (std::size_t i = 0; i < size(); ++i) {
    if (beta[i] == 0.0) continue;
    Box box{std::vector<double>(d), std::vector<double>(d)};
    for (std::size_t j = 0; j < d; ++j) {
      box.lower[j] = static_cast<double>(positions[i][j]) / resolution[j];
      box.upper[j] = static_cast<double>(positions[i][j] + 1) / resolution[j];
      center[j] = 0.5 * (box.lower[j] + box.upper[j]);
    }
    const TensorRule rule = tensor_rule(box, nodes, sub);
    if (r == kInfinity) {
      acc = std::max(acc, std::abs(evaluate(beta, center)));
      for (std::size_t m = 0; m < rule.size(); ++m) acc = std::max(acc, std::abs(evaluate(beta, rule.point(m))));
    } else {
      for (std::size_t m = 0; m < rule.size(); ++m) {
        acc += rule.weights[m] * std::pow(std::abs(evaluate(beta, rule.point(m))), r);
      }
    }
  }
  return r == kInfinity ? acc : std::pow(acc, 1.0 / r);
}

ModulusOptions BumpSystem::modulus_options(int sub, int nodes) const {
  ModulusOptions o;
  o.inner_nodes = nodes;
  o.inner_panels.clear();
  int widest = 1;
  for (int kappa : resolution) {
    o.inner_panels.push_back(sub * kappa);
    widest = std::max(widest, kappa);
  }
  o.xi_nodes = nodes;
  o.xi_panels = sub * widest;
  return o;
}

BumpSystem bump_system(int n, std::span<const double> alpha, std::optional<int> level) {
  if (n < 1) throw std::invalid_argument("bump_system needs n >= 1");
  validate_alpha(alpha);
  const std::int64_t want = 2 * static_cast<std::int64_t>(n);
  auto count = [&](int k) {
    std::int64_t c = 1;
    for (int r : bump_resolution(k, alpha)) c *= r;
    return c;
  };
  int k = 2;
  if (level) {
    k = *level;
    if (k < 1) throw std::invalid_argument("bump level must be >= 1");
    if (count(k) < want) throw std::invalid_argument("bump level too small for 2n translates");
  } else {
    while (!(count(k - 1) < want && want <= count(k))) ++k;
  }
  BumpSystem sys;
  sys.k = k;
  sys.resolution = bump_resolution(k, alpha);
  std::vector<std::int64_t> extents(sys.resolution.begin(), sys.resolution.end());
  auto all = box_indices(extents);
  sys.lookup_.assign(all.size(), -1);
  for (std::int64_t i = 0; i < want; ++i) {
    sys.positions.push_back(all[static_cast<std::size_t>(i)]);
    sys.lookup_[static_cast<std::size_t>(i)] = i;
  }
  return sys;
}

NormPair bump_norm_identity(const BumpSystem& system, std::span<const double> beta, double r) {
  if (beta.size() != system.size()) throw std::invalid_argument("bump coefficient vector has wrong length");
  double cells = 1.0;
  for (int kappa : system.resolution) cells *= kappa;
  double bnorm = 0.0;
  if (r == kInfinity) {
    for (double b : beta) bnorm = std::max(bnorm, std::abs(b));
  } else {
    for (double b : beta) bnorm += std::pow(std::abs(b), r);
    bnorm = std::pow(bnorm, 1.0 / r);
  }
  const double rhs = bump_norm(system.dim(), r) * std::pow(cells, -reciprocal(r)) * bnorm;
  return NormPair{system.lp_norm(beta, r), rhs};
}

double constructive_lower_certificate(std::span<const double> alpha, double p, double theta, double q, int n,
                                      const CertificateOptions& options) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) throw std::invalid_argument("certificate needs finite theta >= 1");
  if (alpha.size() > 2 || n > 32) throw std::invalid_argument("certificate is limited to d <= 2 and n <= 32");
  const BumpSystem sys = bump_system(n, alpha);
  const ModulusOptions mopts = sys.modulus_options(options.sub_panels);
  std::vector<std::vector<double>> betas;
  for (int i = 0; i < n; ++i) {
    std::vector<double> b(sys.size(), 0.0);
    b[static_cast<std::size_t>(i)] = 1.0;
    betas.push_back(std::move(b));
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  for (int s = 0; s < options.samples; ++s) {
    std::vector<double> b(sys.size(), 0.0);
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      b[static_cast<std::size_t>(i)] = normal(rng);
      norm += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    }
    norm = std::sqrt(norm);
    for (double& v : b) v /= norm;
    betas.push_back(std::move(b));
  }
  double best = kInfinity;
  for (auto& beta : betas) {
    const double num = sys.lp_norm(beta, q, options.sub_panels);
    const double den = besov_norm(sys.function(beta), alpha, p, theta, options.grid, mopts).total;
    best = std::min(best, num / den);
  }
  return best;
}

}  // namespace nwidth
