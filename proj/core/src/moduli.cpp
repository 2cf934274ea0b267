#include "nwidth/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nwidth {

namespace {

std::vector<double> binomial_signs(int l) {
  // C(l,m) (-1)^{l-m}, m = 0..l
  std::vector<double> c(l + 1);
  double b = 1.0;
  for (int m = 0; m <= l; ++m) {
    c[m] = ((l - m) % 2 == 0 ? 1.0 : -1.0) * b;
    b = b * (l - m) / (m + 1);
  }
  return c;
}

// Composite Gauss rule over a box with a per-axis panel count, applied to a
// scalar integrand; `point` is reused between calls.
template <class Fn>
double box_integral(const Box& box, const ModulusOptions& options, Fn&& fn) {
  const std::size_t d = box.dim();
  const GaussRule& g = gauss_legendre(options.inner_nodes);
  std::vector<std::vector<double>> xs(d), ws(d);
  for (std::size_t j = 0; j < d; ++j) {
    const int panels = options.panels(j);
    const double h = (box.upper[j] - box.lower[j]) / panels;
    if (!(h > 0.0)) return 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = box.lower[j] + pnl * h;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        xs[j].push_back(a + h * g.nodes[i]);
        ws[j].push_back(h * g.weights[i]);
      }
    }
  }
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> point(d);
  for (std::size_t j = 0; j < d; ++j) point[j] = xs[j][0];
  double acc = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) w *= ws[j][idx[j]];
    acc += w * fn(std::span<double>(point));
    std::size_t j = d;
    while (j-- > 0) {
      if (++idx[j] < xs[j].size()) {
        point[j] = xs[j][idx[j]];
        break;
      }
      idx[j] = 0;
      point[j] = xs[j][0];
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return acc;
}

double lp_power_integral(const GridFunction& f, double p, const ModulusOptions& options) {
  return box_integral(Box::unit(f.dim()), options, [&](std::span<double> x) {
    return std::pow(std::abs(f(x)), p);
  });
}

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("moduli need p in [1, inf)");
}

void check_alpha_dim(std::span<const double> alpha, const GridFunction& f) {
  validate_alpha(alpha);
  if (alpha.size() != f.dim()) throw std::invalid_argument("alpha length differs from function dimension");
}

}  // namespace

std::optional<double> forward_difference(const GridFunction& f, std::size_t j, int l, double xi,
                                         std::span<const double> x) {
  if (j >= f.dim() || x.size() != f.dim()) throw std::invalid_argument("forward_difference: bad axis or point");
  if (l < 0) throw std::invalid_argument("forward_difference: negative order");
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) return std::nullopt;
  }
  const double end = x[j] + l * xi;
  if (!(end >= 0.0 && end <= 1.0)) return std::nullopt;
  const auto c = binomial_signs(l);
  std::vector<double> y(x.begin(), x.end());
  double s = 0.0;
  for (int m = 0; m <= l; ++m) {
    y[j] = x[j] + m * xi;
    s += c[m] * f(y);
  }
  return s;
}

void ModulusSpec::validate(std::size_t dim) const {
  if (direction >= dim) throw std::invalid_argument("modulus direction out of range");
  if (order < 1) throw std::invalid_argument("modulus order must be >= 1");
  check_p(p);
}

int ModulusOptions::panels(std::size_t axis) const {
  return inner_panels.empty() ? 4 : inner_panels.at(axis);
}

void ModulusOptions::validate(std::size_t dim) const {
  if (xi_panels < 1 || xi_nodes < 1 || inner_nodes < 1 || t_nodes < 1 || sup_points < 1 || sup_zooms < 0) {
    throw std::invalid_argument("modulus options must be positive");
  }
  if (!inner_panels.empty()) {
    if (inner_panels.size() != dim) throw std::invalid_argument("inner_panels length differs from dimension");
    for (int p : inner_panels) {
      if (p < 1) throw std::invalid_argument("inner_panels entries must be positive");
    }
  }
}

std::vector<double> TGrid::points() const {
  validate();
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double e = log2_min + i * log2_ratio;
    if (e > log2_max + 1e-9) break;
    out.push_back(std::exp2(e));
  }
  return out;
}

TGrid TGrid::refined() const { return TGrid{log2_min, log2_max, log2_ratio / 2.0}; }

void TGrid::validate() const {
  if (!(log2_ratio > 0.0) || !(log2_max > log2_min)) throw std::invalid_argument("invalid t-grid");
}

double difference_power_integral(const GridFunction& f, const ModulusSpec& spec, double xi,
                                 const ModulusOptions& options) {
  const std::size_t d = f.dim();
  const double shift = spec.order * xi;
  if (std::abs(shift) >= 1.0) return 0.0;
  Box box = Box::unit(d);
  const std::size_t j = spec.direction;
  if (shift > 0.0) {
    box.upper[j] = 1.0 - shift;
  } else {
    box.lower[j] = -shift;
  }
  const auto c = binomial_signs(spec.order);
  return box_integral(box, options, [&](std::span<double> x) {
    const double base = x[j];
    double s = 0.0;
    for (int m = 0; m <= spec.order; ++m) {
      x[j] = base + m * xi;
      s += c[m] * f(x);
    }
    x[j] = base;
    return std::pow(std::abs(s), spec.p);
  });
}

double averaged_modulus(const GridFunction& f, const ModulusSpec& spec, double t,
                        const ModulusOptions& options) {
  spec.validate(f.dim());
  options.validate(f.dim());
  if (!(t > 0.0)) throw std::invalid_argument("averaged_modulus needs t > 0");
  const double s = std::min(t, 1.0 / spec.order);
  const GaussRule& g = gauss_legendre(options.xi_nodes);
  const double h = s / options.xi_panels;
  double acc = 0.0;
  for (int pnl = 0; pnl < options.xi_panels; ++pnl) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double xi = (pnl + g.nodes[i]) * h;
      acc += h * g.weights[i] *
             (difference_power_integral(f, spec, xi, options) + difference_power_integral(f, spec, -xi, options));
    }
  }
  return std::pow(acc / (2.0 * t), 1.0 / spec.p);
}

std::vector<double> averaged_modulus_profile(const GridFunction& f, const ModulusSpec& spec,
                                             std::span<const double> ts, const ModulusOptions& options) {
  spec.validate(f.dim());
  options.validate(f.dim());
  if (ts.empty()) return {};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0.0) || (i > 0 && !(ts[i] > ts[i - 1]))) {
      throw std::invalid_argument("t values must be positive and ascending");
    }
  }
  const double support = 1.0 / spec.order;
  std::vector<double> breaks{0.0};
  for (int i = 1; i <= options.xi_panels; ++i) breaks.push_back(support * i / options.xi_panels);
  for (double t : ts) breaks.push_back(std::min(t, support));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-15 * std::max(1.0, b); }),
               breaks.end());

  const GaussRule& g = gauss_legendre(options.xi_nodes);
  std::vector<double> cumulative(breaks.size(), 0.0);
  for (std::size_t b = 1; b < breaks.size(); ++b) {
    const double a = breaks[b - 1];
    const double h = breaks[b] - a;
    double part = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double xi = a + h * g.nodes[i];
      part += g.weights[i] *
              (difference_power_integral(f, spec, xi, options) + difference_power_integral(f, spec, -xi, options));
    }
    cumulative[b] = cumulative[b - 1] + h * part;
  }

  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const double s = std::min(t, support);
    auto it = std::lower_bound(breaks.begin(), breaks.end(), s - 1e-15 * std::max(1.0, s));
    const double integral = cumulative[static_cast<std::size_t>(it - breaks.begin())];
    out.push_back(std::pow(std::max(integral, 0.0) / (2.0 * t), 1.0 / spec.p));
  }
  return out;
}

double sampled_sup_modulus(const GridFunction& f, const ModulusSpec& spec, double t, int samples,
                           const ModulusOptions& options) {
  spec.validate(f.dim());
  if (samples < 2) throw std::invalid_argument("sampled_sup_modulus needs at least 2 samples");
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double xi = -t + 2.0 * t * i / (samples - 1);
    best = std::max(best, difference_power_integral(f, spec, xi, options));
  }
  return std::pow(best, 1.0 / spec.p);
}

PrimedNorms nikolskii_norm(const GridFunction& f, std::span<const double> alpha, double p,
                           const TGrid& grid, const ModulusOptions& options) {
  check_p(p);
  check_alpha_dim(alpha, f);
  options.validate(f.dim());
  const MultiIndex order = smoothness_order(alpha);
  const auto ts = grid.points();
  PrimedNorms out;
  out.lp = std::pow(lp_power_integral(f, p, options), 1.0 / p);
  out.total = out.lp;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const ModulusSpec spec{j, order[j], p};
    const auto omega = averaged_modulus_profile(f, spec, ts, options);
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double v = std::pow(ts[i], -alpha[j]) * omega[i];
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (best > 0.0) {
      double lo = ts[arg > 0 ? arg - 1 : 0];
      double hi = ts[std::min(arg + 1, ts.size() - 1)];
      for (int zoom = 0; zoom < options.sup_zooms && hi > lo; ++zoom) {
        const int m = options.sup_points;
        std::vector<double> local(m);
        const double r = std::log(hi / lo);
        for (int i = 0; i < m; ++i) local[i] = lo * std::exp(r * (i + 1) / (m + 1));
        const auto w = averaged_modulus_profile(f, spec, local, options);
        int local_arg = -1;
        for (int i = 0; i < m; ++i) {
          const double v = std::pow(local[i], -alpha[j]) * w[i];
          if (v > best) {
            best = v;
            local_arg = i;
          }
        }
        if (local_arg < 0) break;
        const double step = r / (m + 1);
        const double centre = local[local_arg];
        lo = std::max(lo, centre * std::exp(-step));
        hi = std::min(hi, centre * std::exp(step));
      }
    }
    out.seminorms.push_back(best);
    out.total = std::max(out.total, best);
  }
  return out;
}

PrimedNorms besov_norm(const GridFunction& f, std::span<const double> alpha, double p, double theta,
                       const TGrid& grid, const ModulusOptions& options) {
  if (!(theta >= 1.0)) throw std::invalid_argument("theta must lie in [1, inf]");
  if (theta == kInfinity) return nikolskii_norm(f, alpha, p, grid, options);
  check_p(p);
  check_alpha_dim(alpha, f);
  options.validate(f.dim());
  if (grid.log2_max < 0.0) throw std::invalid_argument("t-grid must reach t >= 1 for the tail formula");
  const MultiIndex order = smoothness_order(alpha);
  const auto ts = grid.points();
  const GaussRule& g = gauss_legendre(options.t_nodes);
  PrimedNorms out;
  out.lp = std::pow(lp_power_integral(f, p, options), 1.0 / p);
  out.total = out.lp;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const ModulusSpec spec{j, order[j], p};
    // Segment ends: the grid plus the support edge 1/l, where Omega' has a kink.
    std::vector<double> ends = ts;
    const double edge = 1.0 / order[j];
    if (edge > ts.front() && edge < ts.back()) ends.push_back(edge);
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
               ends.end());
    std::vector<double> nodes;
    for (std::size_t i = 1; i < ends.size(); ++i) {
      const double r = std::log(ends[i] / ends[i - 1]);
      for (double u : g.nodes) nodes.push_back(ends[i - 1] * std::exp(r * u));
    }
    std::vector<double> all = ends;
    all.insert(all.end(), nodes.begin(), nodes.end());
    std::sort(all.begin(), all.end());
    const auto omega_all = averaged_modulus_profile(f, spec, all, options);
    auto omega_at = [&](double t) {
      const auto it = std::lower_bound(all.begin(), all.end(), t);
      return omega_all[static_cast<std::size_t>(it - all.begin())];
    };
    auto integrand = [&](double t) {
      // t^{-theta alpha} Omega'^theta, the integrand in d(log t).
      return std::pow(t, -theta * alpha[j]) * std::pow(omega_at(t), theta);
    };

    double integral = 0.0;
    const double h0 = integrand(ends[0]) / ends[0];
    const double h1 = integrand(ends[1]) / ends[1];
    if (h0 > 0.0 && h1 > 0.0) {
      const double s = std::log(h1 / h0) / std::log(ends[1] / ends[0]);
      integral += s > -1.0 ? h0 * ends[0] / (s + 1.0) : kInfinity;
    }
    for (std::size_t i = 1; i < ends.size(); ++i) {
      const double r = std::log(ends[i] / ends[i - 1]);
      double part = 0.0;
      for (std::size_t m = 0; m < g.nodes.size(); ++m) part += g.weights[m] * integrand(nodes[(i - 1) * g.nodes.size() + m]);
      integral += r * part;
    }
    const double top = ts.back();
    integral += std::pow(omega_at(top), theta) * std::pow(top, -theta * alpha[j]) / (theta * (alpha[j] + 1.0 / p));
    const double semi = std::pow(integral, 1.0 / theta);
    out.seminorms.push_back(semi);
    out.total = std::max(out.total, semi);
  }
  return out;
}

double embedding_constant(std::span<const double> alpha) {
  validate_alpha(alpha);
  double c = 0.0;
  for (double a : alpha) c = std::max(c, std::exp2(2.0 + a));
  return c;
}

AffineTransfer affine_transfer(const GridFunction& f, std::span<const double> delta,
                               std::span<const double> x0, double p) {
  if (delta.size() != f.dim() || x0.size() != f.dim()) throw std::invalid_argument("affine_transfer: dimension mismatch");
  for (double v : delta) {
    if (!(v > 0.0)) throw std::invalid_argument("affine_transfer: delta must be positive");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("affine_transfer: p must be >= 1");
  std::vector<double> dv(delta.begin(), delta.end()), xv(x0.begin(), x0.end());
  double volume = 1.0;
  for (double v : dv) volume *= v;
  const double factor = std::pow(volume, -reciprocal(p));
  GridFunction pulled(f.dim(), [f, dv, xv](std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = xv[j] + dv[j] * x[j];
    return f(y);
  }, f.label() + "@affine");
  return AffineTransfer{std::move(pulled), factor};
}

GridFunction inverse_affine(const GridFunction& g, std::span<const double> delta,
                            std::span<const double> x0) {
  if (delta.size() != g.dim() || x0.size() != g.dim()) throw std::invalid_argument("inverse_affine: dimension mismatch");
  std::vector<double> dv(delta.begin(), delta.end()), xv(x0.begin(), x0.end());
  return GridFunction(g.dim(), [g, dv, xv](std::span<const double> y) {
    std::vector<double> x(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) x[j] = (y[j] - xv[j]) / dv[j];
    return g(x);
  }, g.label() + "@inverse-affine");
}

TransferCheck check_affine_transfer(const GridFunction& f, std::span<const double> delta,
                                    std::span<const double> x0, double p, const QuadratureRule& rule) {
  const AffineTransfer tr = affine_transfer(f, delta, x0, p);
  Box image = Box::unit(f.dim());
  for (std::size_t j = 0; j < f.dim(); ++j) {
    image.lower[j] = x0[j];
    image.upper[j] = x0[j] + delta[j];
  }
  const double pulled = std::pow(
      integrate(Box::unit(f.dim()), rule, [&](std::span<const double> x) { return std::pow(std::abs(tr.pulled(x)), p); }),
      1.0 / p);
  const double original = std::pow(
      integrate(image, rule, [&](std::span<const double> x) { return std::pow(std::abs(f(x)), p); }), 1.0 / p);
  return TransferCheck{pulled, tr.factor * original};
}

}  // namespace nwidth
