#include "nwidth/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <queue>

namespace nwidth {

namespace {

constexpr int kMaxCachedRule = 128;

GaussRule compute_gauss_legendre(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  // Newton iteration on P_m over [-1,1], then map to [0,1].
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int n = 2; n <= m; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = x;
    for (int n = 2; n <= m; ++n) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = p2;
    }
    dp = (m == 1) ? 1.0 : m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  if (m == 1) {
    rule.nodes[0] = 0.5;
    rule.weights[0] = 1.0;
  }
  return rule;
}

struct PendingBox {
  Box box;
  int level;
  std::vector<double> value;
  double error;
};

struct ByError {
  bool operator()(const PendingBox& a, const PendingBox& b) const { return a.error < b.error; }
};

std::vector<double> fixed_integral(const Box& box, int nodes, int panels, std::size_t components,
                                   const VectorIntegrand& f) {
  const TensorRule tr = tensor_rule(box, nodes, panels);
  std::vector<double> acc(components, 0.0);
  std::vector<double> buf(components);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    f(tr.point(i), buf);
    for (std::size_t c = 0; c < components; ++c) acc[c] += tr.weights[i] * buf[c];
  }
  return acc;
}

std::vector<Box> bisect(const Box& box) {
  const std::size_t d = box.dim();
  std::vector<Box> children;
  children.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Box c{box.lower, box.upper};
    for (std::size_t j = 0; j < d; ++j) {
      const double mid = 0.5 * (box.lower[j] + box.upper[j]);
      if (mask & (std::size_t{1} << j)) {
        c.lower[j] = mid;
      } else {
        c.upper[j] = mid;
      }
    }
    children.push_back(std::move(c));
  }
  return children;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Fixed rule on the box compared with the same rule on its children.
PendingBox evaluate_box(Box box, int level, const QuadratureRule& rule, std::size_t components,
                        const VectorIntegrand& f) {
  auto coarse = fixed_integral(box, rule.nodes, rule.panels, components, f);
  std::vector<double> fine(components, 0.0);
  for (const auto& child : bisect(box)) {
    auto part = fixed_integral(child, rule.nodes, rule.panels, components, f);
    for (std::size_t c = 0; c < components; ++c) fine[c] += part[c];
  }
  double err = 0.0;
  for (std::size_t c = 0; c < components; ++c) err = std::max(err, std::abs(fine[c] - coarse[c]));
  return PendingBox{std::move(box), level, std::move(fine), err};
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("Gauss rule needs at least one node");
  if (m > kMaxCachedRule) throw std::invalid_argument("Gauss rule order too large");
  static std::array<GaussRule, kMaxCachedRule + 1> cache;
  static std::array<std::once_flag, kMaxCachedRule + 1> flags;
  std::call_once(flags[m], [m] { cache[m] = compute_gauss_legendre(m); });
  return cache[m];
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < dim(); ++j) v *= upper[j] - lower[j];
  return v;
}

Box Box::unit(std::size_t d) { return Box{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)}; }

Box Box::of(const Cell& cell) {
  Box b{std::vector<double>(cell.dim()), std::vector<double>(cell.dim())};
  for (std::size_t j = 0; j < cell.dim(); ++j) {
    b.lower[j] = cell.lower_corner(j);
    b.upper[j] = b.lower[j] + cell.side(j);
  }
  return b;
}

QuadratureRule QuadratureRule::for_degree(const MultiIndex& degree) {
  QuadratureRule r;
  r.nodes = degree.max() + 3;
  return r;
}

QuadratureRule QuadratureRule::adaptive_default(int nodes) {
  QuadratureRule r;
  r.nodes = nodes;
  r.adaptive = true;
  return r;
}

void QuadratureRule::validate() const {
  if (nodes < 2) throw std::invalid_argument("quadrature needs at least 2 nodes per axis");
  if (panels < 1) throw std::invalid_argument("quadrature needs at least 1 panel per axis");
  if (adaptive && (max_level < 0 || !(rel_tol > 0.0))) {
    throw std::invalid_argument("invalid adaptive quadrature settings");
  }
}

TensorRule tensor_rule(const Box& box, int nodes, int panels) {
  const GaussRule& g = gauss_legendre(nodes);
  const std::size_t d = box.dim();
  const std::size_t per_axis = static_cast<std::size_t>(nodes) * panels;
  std::vector<std::vector<double>> axis_x(d), axis_w(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double h = (box.upper[j] - box.lower[j]) / panels;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = box.lower[j] + pnl * h;
      for (int i = 0; i < nodes; ++i) {
        axis_x[j].push_back(a + h * g.nodes[i]);
        axis_w[j].push_back(h * g.weights[i]);
      }
    }
  }
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= per_axis;
  TensorRule tr;
  tr.dim = d;
  tr.points.resize(total * d);
  tr.weights.resize(total);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      tr.points[n * d + j] = axis_x[j][idx[j]];
      w *= axis_w[j][idx[j]];
    }
    tr.weights[n] = w;
    for (std::size_t j = d; j-- > 0;) {
      if (++idx[j] < per_axis) break;
      idx[j] = 0;
    }
  }
  return tr;
}

std::vector<double> integrate(const Box& box, const QuadratureRule& rule, std::size_t components,
                              const VectorIntegrand& f) {
  rule.validate();
  if (!rule.adaptive) return fixed_integral(box, rule.nodes, rule.panels, components, f);

  std::priority_queue<PendingBox, std::vector<PendingBox>, ByError> queue;
  queue.push(evaluate_box(box, 0, rule, components, f));
  std::vector<double> settled(components, 0.0);
  double settled_error = 0.0;

  auto totals = [&](std::vector<double>& total, double& error) {
    total = settled;
    error = settled_error;
    auto copy = queue;
    while (!copy.empty()) {
      const auto& top = copy.top();
      for (std::size_t c = 0; c < components; ++c) total[c] += top.value[c];
      error += top.error;
      copy.pop();
    }
  };

  std::vector<double> total;
  double error = 0.0;
  // Totals are maintained incrementally; the full recount above is only used
  // to avoid drift when the loop ends.
  std::vector<double> running(queue.top().value);
  double running_error = queue.top().error;
  while (true) {
    const double scale = max_abs(running);
    const double tol = std::max(rule.rel_tol * scale, rule.abs_tol);
    if (running_error <= tol || queue.empty()) break;
    PendingBox worst = queue.top();
    queue.pop();
    for (std::size_t c = 0; c < components; ++c) running[c] -= worst.value[c];
    running_error -= worst.error;
    if (worst.level >= rule.max_level) {
      for (std::size_t c = 0; c < components; ++c) {
        settled[c] += worst.value[c];
        running[c] += worst.value[c];
      }
      settled_error += worst.error;
      running_error += worst.error;
      if (settled_error > tol) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.3g", tol);
        throw QuadratureError(std::string("adaptive quadrature did not reach tolerance ") + buf +
                              " at refinement level " + std::to_string(rule.max_level));
      }
      continue;
    }
    for (auto& child : bisect(worst.box)) {
      auto pb = evaluate_box(std::move(child), worst.level + 1, rule, components, f);
      for (std::size_t c = 0; c < components; ++c) running[c] += pb.value[c];
      running_error += pb.error;
      queue.push(std::move(pb));
    }
  }
  totals(total, error);
  return total;
}

double integrate(const Box& box, const QuadratureRule& rule, const ScalarIntegrand& f) {
  auto v = integrate(box, rule, 1, [&](std::span<const double> x, std::span<double> out) {
    out[0] = f(x);
  });
  return v[0];
}

}  // namespace nwidth
