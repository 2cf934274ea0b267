#include "nwidth/projectors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nwidth {

namespace {

void check_level(int k) {
  if (k < -1) throw std::invalid_argument("projector level must be >= -1, got " + std::to_string(k));
}

PiecewisePoly zero_on_unit(const ProjectorConfig& cfg) {
  return PiecewisePoly(MultiIndex(cfg.degree.size(), 0), cfg.degree);
}

void add_constant(PiecewisePoly& f, double c) {
  if (c == 0.0) return;
  // The constant basis function of a cell is prod_j side_j^{-1/2}.
  const double scale = std::sqrt(std::ldexp(1.0, static_cast<int>(f.level().sum())));
  for (std::size_t cell = 0; cell < f.cell_count(); ++cell) f.cell_coefficients(cell)[0] += c / scale;
}

PiecewisePoly with_fault(PiecewisePoly f, const ProjectorConfig& cfg) {
  add_constant(f, cfg.fault);
  return f;
}

}  // namespace

QuadratureRule ProjectorConfig::default_rule() {
  QuadratureRule r = QuadratureRule::adaptive_default(6);
  r.rel_tol = 1e-13;
  r.abs_tol = 1e-15;
  r.max_level = 10;
  return r;
}

ProjectorConfig ProjectorConfig::reduced(std::vector<double> alpha) {
  ProjectorConfig cfg;
  std::vector<int> degree;
  for (int l : smoothness_order(alpha)) degree.push_back(l - 1);
  cfg.degree = MultiIndex(std::move(degree));
  cfg.alpha = std::move(alpha);
  return cfg;
}

void ProjectorConfig::validate() const {
  validate_alpha(alpha);
  if (degree.size() != alpha.size()) {
    throw std::invalid_argument("projector degree " + degree.to_string() + " does not match dimension " +
                                std::to_string(alpha.size()));
  }
  rule.validate();
}

CellPolynomial local_project(const GridFunction& f, const Cell& cell, const MultiIndex& degree,
                             const QuadratureRule& rule) {
  if (f.dim() != cell.dim() || degree.size() != cell.dim()) {
    throw std::invalid_argument("local_project: dimension mismatch");
  }
  const auto n = static_cast<std::size_t>(degree.tensor_size());
  std::vector<double> basis(n);
  auto coeffs = integrate(Box::of(cell), rule, n, [&](std::span<const double> x, std::span<double> out) {
    cell_basis_values(cell, degree, x, basis);
    const double fx = f(x);
    for (std::size_t i = 0; i < n; ++i) out[i] = fx * basis[i];
  });
  return CellPolynomial{degree, std::move(coeffs)};
}

PiecewisePoly project_grid(const GridFunction& f, const MultiIndex& level, const MultiIndex& degree,
                           const QuadratureRule& rule) {
  PiecewisePoly out(level, degree);
  for (std::size_t c = 0; c < out.cell_count(); ++c) {
    const auto piece = local_project(f, out.cell(c), degree, rule);
    std::copy(piece.coefficients.begin(), piece.coefficients.end(), out.cell_coefficients(c).begin());
  }
  return out;
}

PiecewisePoly project_grid(const PiecewisePoly& f, const MultiIndex& level, const MultiIndex& degree) {
  return project_exact(f, level, degree);
}

PiecewisePoly project_level(const GridFunction& f, const ProjectorConfig& cfg, int k) {
  check_level(k);
  cfg.validate();
  if (k == -1) return zero_on_unit(cfg);
  return with_fault(project_grid(f, dyadic_level(k, cfg.alpha), cfg.degree, cfg.rule), cfg);
}

PiecewisePoly project_level(const PiecewisePoly& f, const ProjectorConfig& cfg, int k) {
  check_level(k);
  cfg.validate();
  if (k == -1) return zero_on_unit(cfg);
  return with_fault(project_exact(f, dyadic_level(k, cfg.alpha), cfg.degree), cfg);
}

PiecewisePoly level_increment(const GridFunction& f, const ProjectorConfig& cfg, int k) {
  if (k < 0) throw std::invalid_argument("level_increment needs k >= 0");
  const MultiIndex level = dyadic_level(k, cfg.alpha);
  return project_level(f, cfg, k) - project_level(f, cfg, k - 1).refined(level);
}

PiecewisePoly level_increment(const PiecewisePoly& f, const ProjectorConfig& cfg, int k) {
  if (k < 0) throw std::invalid_argument("level_increment needs k >= 0");
  const MultiIndex level = dyadic_level(k, cfg.alpha);
  return project_level(f, cfg, k) - project_level(f, cfg, k - 1).refined(level);
}

PiecewisePoly block_increment(const GridFunction& f, const ProjectorConfig& cfg, int k, int j) {
  if (k < 0 || j < 1) throw std::invalid_argument("block_increment needs k >= 0 and j >= 1");
  const MultiIndex level = dyadic_level(k + j, cfg.alpha);
  return project_level(f, cfg, k + j) - project_level(f, cfg, k).refined(level);
}

PiecewisePoly block_increment(const PiecewisePoly& f, const ProjectorConfig& cfg, int k, int j) {
  if (k < 0 || j < 1) throw std::invalid_argument("block_increment needs k >= 0 and j >= 1");
  const MultiIndex level = dyadic_level(k + j, cfg.alpha);
  return project_level(f, cfg, k + j) - project_level(f, cfg, k).refined(level);
}

double approx_error(const GridFunction& f, const ProjectorConfig& cfg, int k, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("approx_error needs q >= 1");
  const PiecewisePoly approx = project_level(f, cfg, k);
  const std::size_t d = f.dim();
  double acc = 0.0;
  for (std::size_t c = 0; c < approx.cell_count(); ++c) {
    const Cell cell = approx.cell(c);
    auto residual = [&](std::span<const double> x) {
      return std::abs(f(x) - approx.evaluate_on_cell(c, x));
    };
    if (q == kInfinity) {
      const TensorRule tr = tensor_rule(Box::of(cell), cfg.rule.nodes, cfg.rule.panels);
      for (std::size_t i = 0; i < tr.size(); ++i) acc = std::max(acc, residual(tr.point(i)));
      std::vector<double> corner(d);
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        for (std::size_t j = 0; j < d; ++j) {
          corner[j] = cell.lower_corner(j) + ((mask >> j) & 1U ? cell.side(j) : 0.0);
        }
        acc = std::max(acc, residual(corner));
      }
    } else {
      acc += integrate(Box::of(cell), cfg.rule,
                       [&](std::span<const double> x) { return std::pow(residual(x), q); });
    }
  }
  return q == kInfinity ? acc : std::pow(acc, 1.0 / q);
}

}  // namespace nwidth
