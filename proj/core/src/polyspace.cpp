#include "nwidth/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace nwidth {

namespace {

// Per-axis Legendre values for one point, laid out [axis][0..degree_j].
class AxisValues {
 public:
  explicit AxisValues(const MultiIndex& degree) : degree_(degree), stride_(degree.max() + 1) {
    values_.resize(degree.size() * stride_);
  }

  // t is the cell-relative coordinate per axis.
  void fill(std::span<const double> t) {
    for (std::size_t j = 0; j < degree_.size(); ++j) {
      orthonormal_legendre(degree_[j], t[j], {values_.data() + j * stride_, stride_});
    }
  }

  double at(std::size_t axis, int n) const { return values_[axis * stride_ + n]; }

  // sum_lambda c_lambda prod_j L_{lambda_j}(t_j), lambda lexicographic.
  double contract(std::span<const double> coefficients) const {
    const std::size_t d = degree_.size();
    if (d == 1) {
      double s = 0.0;
      for (int i = 0; i <= degree_[0]; ++i) s += coefficients[i] * values_[i];
      return s;
    }
    std::vector<int> lambda(d, 0);
    double s = 0.0;
    for (double c : coefficients) {
      double prod = c;
      for (std::size_t j = 0; j < d; ++j) prod *= at(j, lambda[j]);
      s += prod;
      for (std::size_t j = d; j-- > 0;) {
        if (++lambda[j] <= degree_[j]) break;
        lambda[j] = 0;
      }
    }
    return s;
  }

  void products(std::span<double> out) const {
    const std::size_t d = degree_.size();
    std::vector<int> lambda(d, 0);
    for (double& o : out) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) prod *= at(j, lambda[j]);
      o = prod;
      for (std::size_t j = d; j-- > 0;) {
        if (++lambda[j] <= degree_[j]) break;
        lambda[j] = 0;
      }
    }
  }

 private:
  const MultiIndex& degree_;
  std::size_t stride_;
  std::vector<double> values_;
};

// Geometry of a cell without building a Cell object.
struct CellFrame {
  std::vector<double> lower;
  std::vector<double> side;
  double scale = 1.0;  // prod_j side_j^{-1/2}

  CellFrame(const MultiIndex& level, std::size_t linear_index) : lower(level.size()), side(level.size()) {
    std::size_t rest = linear_index;
    for (std::size_t j = level.size(); j-- > 0;) {
      const std::size_t n = std::size_t{1} << level[j];
      const std::size_t pos = rest % n;
      rest /= n;
      side[j] = std::ldexp(1.0, -level[j]);
      lower[j] = static_cast<double>(pos) * side[j];
    }
    scale = std::sqrt(std::ldexp(1.0, static_cast<int>(level.sum())));
  }

  void relative(std::span<const double> x, std::span<double> t) const {
    for (std::size_t j = 0; j < lower.size(); ++j) t[j] = (x[j] - lower[j]) / side[j];
  }
};

std::size_t linear_cell_of(const MultiIndex& level, std::span<const double> x) {
  return cell_linear_index(level, locate_cell(level, x));
}

}  // namespace

void orthonormal_legendre(int nmax, double t, std::span<double> out) {
  const double x = 2.0 * t - 1.0;
  double p0 = 1.0;
  double p1 = x;
  out[0] = 1.0;
  if (nmax >= 1) out[1] = std::sqrt(3.0) * x;
  for (int n = 2; n <= nmax; ++n) {
    const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
    p0 = p1;
    p1 = p2;
    out[n] = std::sqrt(2.0 * n + 1.0) * p2;
  }
}

double evaluate_cell_basis(const Cell& cell, const MultiIndex& degree,
                           std::span<const double> coefficients, std::span<const double> x) {
  CellFrame frame(cell.level(), cell_linear_index(cell.level(), cell.position()));
  std::vector<double> t(cell.dim());
  frame.relative(x, t);
  AxisValues values(degree);
  values.fill(t);
  return frame.scale * values.contract(coefficients);
}

void cell_basis_values(const Cell& cell, const MultiIndex& degree, std::span<const double> x,
                       std::span<double> out) {
  CellFrame frame(cell.level(), cell_linear_index(cell.level(), cell.position()));
  std::vector<double> t(cell.dim());
  frame.relative(x, t);
  AxisValues values(degree);
  values.fill(t);
  values.products(out);
  for (double& o : out) o *= frame.scale;
}

double CellPolynomial::operator()(const Cell& cell, std::span<const double> x) const {
  return evaluate_cell_basis(cell, degree, coefficients, x);
}

PiecewisePoly::PiecewisePoly(MultiIndex level, MultiIndex degree)
    : level_(std::move(level)), degree_(std::move(degree)) {
  if (level_.size() != degree_.size() || level_.size() == 0) {
    throw std::invalid_argument("PiecewisePoly level/degree dimension mismatch");
  }
  cells_ = static_cast<std::size_t>(nwidth::cell_count(level_));
  per_cell_ = static_cast<std::size_t>(degree_.tensor_size());
  coefficients_.assign(cells_ * per_cell_, 0.0);
}

PiecewisePoly::PiecewisePoly(MultiIndex level, MultiIndex degree, std::vector<double> coefficients)
    : PiecewisePoly(std::move(level), std::move(degree)) {
  if (coefficients.size() != coefficients_.size()) {
    throw std::invalid_argument("PiecewisePoly coefficient count " + std::to_string(coefficients.size()) +
                                " != " + std::to_string(coefficients_.size()));
  }
  coefficients_ = std::move(coefficients);
}

std::span<const double> PiecewisePoly::cell_coefficients(std::size_t cell) const {
  return std::span<const double>(coefficients_).subspan(cell * per_cell_, per_cell_);
}

std::span<double> PiecewisePoly::cell_coefficients(std::size_t cell) {
  return std::span<double>(coefficients_).subspan(cell * per_cell_, per_cell_);
}

Cell PiecewisePoly::cell(std::size_t index) const {
  std::vector<int> pos(dim());
  std::size_t rest = index;
  for (std::size_t j = dim(); j-- > 0;) {
    const std::size_t n = std::size_t{1} << level_[j];
    pos[j] = static_cast<int>(rest % n);
    rest /= n;
  }
  return Cell(level_, MultiIndex(std::move(pos)));
}

CellPolynomial PiecewisePoly::piece(std::size_t index) const {
  auto c = cell_coefficients(index);
  return CellPolynomial{degree_, std::vector<double>(c.begin(), c.end())};
}

double PiecewisePoly::operator()(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("point dimension mismatch");
  return evaluate_on_cell(linear_cell_of(level_, x), x);
}

double PiecewisePoly::evaluate_on_cell(std::size_t cell, std::span<const double> x) const {
  CellFrame frame(level_, cell);
  std::vector<double> t(dim());
  frame.relative(x, t);
  AxisValues values(degree_);
  values.fill(t);
  return frame.scale * values.contract(cell_coefficients(cell));
}

PiecewisePoly PiecewisePoly::refined(const MultiIndex& finer) const {
  if (!componentwise_le(level_, finer)) {
    throw std::invalid_argument("refined() needs a finer level, got " + finer.to_string());
  }
  return project_exact(*this, finer, degree_);
}

GridFunction PiecewisePoly::as_function(std::string label) const {
  auto self = std::make_shared<const PiecewisePoly>(*this);
  return GridFunction(dim(), [self](std::span<const double> x) { return (*self)(x); },
                      std::move(label));
}

void PiecewisePoly::check_compatible(const PiecewisePoly& other) const {
  if (!(level_ == other.level_) || !(degree_ == other.degree_)) {
    throw std::invalid_argument("PiecewisePoly arithmetic needs equal level and degree");
  }
}

PiecewisePoly& PiecewisePoly::operator+=(const PiecewisePoly& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] += other.coefficients_[i];
  return *this;
}

PiecewisePoly& PiecewisePoly::operator-=(const PiecewisePoly& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < coefficients_.size(); ++i) coefficients_[i] -= other.coefficients_[i];
  return *this;
}

PiecewisePoly& PiecewisePoly::operator*=(double c) {
  for (double& v : coefficients_) v *= c;
  return *this;
}

PiecewisePoly project_exact(const PiecewisePoly& f, const MultiIndex& level,
                            const MultiIndex& degree) {
  const std::size_t d = f.dim();
  if (level.size() != d || degree.size() != d) {
    throw std::invalid_argument("projection target dimension mismatch");
  }
  PiecewisePoly out(level, degree);
  const MultiIndex common = componentwise_max(f.level(), level);
  const int nodes = std::max(f.degree().max(), degree.max()) + 1;

  std::vector<std::int64_t> extents;
  for (int c : common) extents.push_back(std::int64_t{1} << c);
  const auto subcells = box_indices(extents);

  std::vector<double> basis(out.per_cell());
  std::vector<double> t(d);
  AxisValues target_values(degree);
  for (const auto& s : subcells) {
    std::vector<int> target_pos(d), source_pos(d);
    for (std::size_t j = 0; j < d; ++j) {
      target_pos[j] = s[j] >> (common[j] - level[j]);
      source_pos[j] = s[j] >> (common[j] - f.level()[j]);
    }
    const std::size_t target = cell_linear_index(level, MultiIndex(target_pos));
    const std::size_t source = cell_linear_index(f.level(), MultiIndex(source_pos));
    CellFrame target_frame(level, target);

    const TensorRule rule = tensor_rule(Box::of(Cell(common, s)), nodes);
    auto coeffs = out.cell_coefficients(target);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto x = rule.point(i);
      const double fx = f.evaluate_on_cell(source, x);
      target_frame.relative(x, t);
      target_values.fill(t);
      target_values.products(basis);
      const double w = rule.weights[i] * fx * target_frame.scale;
      for (std::size_t b = 0; b < basis.size(); ++b) coeffs[b] += w * basis[b];
    }
  }
  return out;
}

double lp_vector_norm(std::span<const double> x, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("l_p norm needs p >= 1");
  if (p == kInfinity) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

double lp_norm(const PiecewisePoly& f, double p, const QuadratureRule& rule) {
  if (!(p >= 1.0)) throw std::invalid_argument("L_p norm needs p >= 1");
  if (p == 2.0) {
    double s = 0.0;
    for (double c : f.coefficients()) s += c * c;
    return std::sqrt(s);
  }
  rule.validate();
  const std::size_t d = f.dim();
  double acc = 0.0;
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    const Cell cell = f.cell(c);
    const TensorRule tr = tensor_rule(Box::of(cell), rule.nodes, rule.panels);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double v = std::abs(f.evaluate_on_cell(c, tr.point(i)));
      if (p == kInfinity) {
        acc = std::max(acc, v);
      } else {
        acc += tr.weights[i] * std::pow(v, p);
      }
    }
    if (p == kInfinity) {
      std::vector<double> corner(d);
      for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        for (std::size_t j = 0; j < d; ++j) {
          corner[j] = cell.lower_corner(j) + ((mask >> j) & 1U ? cell.side(j) : 0.0);
        }
        acc = std::max(acc, std::abs(f.evaluate_on_cell(c, corner)));
      }
    }
  }
  return p == kInfinity ? acc : std::pow(acc, 1.0 / p);
}

double lp_norm(const PiecewisePoly& f, double p) {
  QuadratureRule rule = QuadratureRule::for_degree(f.degree());
  rule.panels = 2;
  return lp_norm(f, p, rule);
}

double lp_norm(const GridFunction& f, double p, const QuadratureRule& rule) {
  if (!(p >= 1.0)) throw std::invalid_argument("L_p norm needs p >= 1");
  rule.validate();
  const std::size_t d = f.dim();
  const Box unit = Box::unit(d);
  if (p == kInfinity) {
    const TensorRule tr = tensor_rule(unit, rule.nodes, rule.panels);
    double m = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) m = std::max(m, std::abs(f(tr.point(i))));
    std::vector<std::int64_t> extents(d, rule.panels + 1);
    std::vector<double> x(d);
    for (const auto& corner : box_indices(extents)) {
      for (std::size_t j = 0; j < d; ++j) x[j] = static_cast<double>(corner[j]) / rule.panels;
      m = std::max(m, std::abs(f(x)));
    }
    return m;
  }
  const double integral = integrate(unit, rule, [&](std::span<const double> x) {
    return std::pow(std::abs(f(x)), p);
  });
  return std::pow(integral, 1.0 / p);
}

std::vector<double> nodal_coordinates(const PiecewisePoly& f, std::span<const double> alpha, int k) {
  const MultiIndex level = dyadic_level(k, alpha);
  if (!(level == f.level())) {
    throw std::invalid_argument("nodal_coordinates: level " + f.level().to_string() +
                                " does not match dyadic level " + level.to_string());
  }
  const auto lambdas = degree_indices(f.degree());
  std::vector<double> out;
  out.reserve(f.cell_count() * lambdas.size());
  std::vector<double> x(f.dim());
  for (std::size_t c = 0; c < f.cell_count(); ++c) {
    CellFrame frame(level, c);
    for (const auto& lambda : lambdas) {
      for (std::size_t j = 0; j < f.dim(); ++j) x[j] = frame.lower[j] + frame.side[j] * lambda[j];
      out.push_back(f.evaluate_on_cell(c, x));
    }
  }
  return out;
}

PiecewisePoly from_nodal_coordinates(std::span<const double> values, const MultiIndex& degree,
                                     std::span<const double> alpha, int k) {
  const MultiIndex level = dyadic_level(k, alpha);
  if (level.size() != degree.size()) throw std::invalid_argument("degree/alpha dimension mismatch");
  PiecewisePoly out(level, degree);
  if (values.size() != out.coefficients().size()) {
    throw std::invalid_argument("nodal vector has length " + std::to_string(values.size()) +
                                ", expected " + std::to_string(out.coefficients().size()));
  }
  // Interpolation matrix in cell-relative coordinates; the per-cell basis
  // differs only by the constant factor CellFrame::scale.
  const auto lambdas = degree_indices(degree);
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXd vandermonde(n, n);
  AxisValues axis(degree);
  std::vector<double> t(degree.size()), row(lambdas.size());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < degree.size(); ++j) t[j] = lambdas[r][j];
    axis.fill(t);
    axis.products(row);
    for (Eigen::Index c = 0; c < n; ++c) vandermonde(r, c) = row[c];
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(vandermonde);
  const double scale = CellFrame(level, 0).scale;
  for (std::size_t c = 0; c < out.cell_count(); ++c) {
    Eigen::Map<const Eigen::VectorXd> v(values.data() + c * lambdas.size(), n);
    const Eigen::VectorXd coeffs = lu.solve(v) / scale;
    auto dst = out.cell_coefficients(c);
    for (Eigen::Index i = 0; i < n; ++i) dst[i] = coeffs(i);
  }
  return out;
}

nlohmann::json to_json(const PiecewisePoly& f) {
  return nlohmann::json{{"d", f.dim()},
                        {"l", f.degree().entries()},
                        {"kappa", f.level().entries()},
                        {"coefficients", std::vector<double>(f.coefficients().begin(),
                                                             f.coefficients().end())}};
}

PiecewisePoly piecewise_poly_from_json(const nlohmann::json& j) {
  const auto d = j.at("d").get<std::size_t>();
  MultiIndex degree(j.at("l").get<std::vector<int>>());
  MultiIndex level(j.at("kappa").get<std::vector<int>>());
  if (degree.size() != d || level.size() != d) {
    throw std::invalid_argument("piecewise-poly record: l/kappa length differs from d");
  }
  return PiecewisePoly(std::move(level), std::move(degree),
                       j.at("coefficients").get<std::vector<double>>());
}

}  // namespace nwidth
