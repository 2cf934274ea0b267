#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nwidth/gridfunction.hpp"
#include "nwidth/indexgrid.hpp"
#include "nwidth/quadrature.hpp"

namespace nwidth {

/// Writes L_0(t), ..., L_nmax(t), the Legendre polynomials orthonormal on
/// [0,1] (L_n(t) = sqrt(2n+1) P_n(2t-1)). Valid for any real t.
void orthonormal_legendre(int nmax, double t, std::span<double> out);

/// Value at x of the tensor polynomial with the given coefficients in the
/// orthonormal Legendre basis of `cell`. x may lie outside the cell.
double evaluate_cell_basis(const Cell& cell, const MultiIndex& degree,
                           std::span<const double> coefficients, std::span<const double> x);
/// Values of all basis functions of `cell` at x, lexicographic in lambda.
void cell_basis_values(const Cell& cell, const MultiIndex& degree, std::span<const double> x,
                       std::span<double> out);

/// A tensor polynomial of degree <= l on one cell, stored as coefficients in
/// the cell's orthonormal Legendre basis (lexicographic in lambda).
struct CellPolynomial {
  MultiIndex degree;
  std::vector<double> coefficients;

  double operator()(const Cell& cell, std::span<const double> x) const;
};

/// Discontinuous piecewise tensor polynomial on the dyadic grid at `level`.
class PiecewisePoly {
 public:
  /// The zero element.
  PiecewisePoly(MultiIndex level, MultiIndex degree);
  PiecewisePoly(MultiIndex level, MultiIndex degree, std::vector<double> coefficients);

  const MultiIndex& level() const noexcept { return level_; }
  const MultiIndex& degree() const noexcept { return degree_; }
  std::size_t dim() const noexcept { return level_.size(); }
  std::size_t cell_count() const noexcept { return cells_; }
  std::size_t per_cell() const noexcept { return per_cell_; }

  std::span<const double> coefficients() const noexcept { return coefficients_; }
  std::span<double> coefficients() noexcept { return coefficients_; }
  std::span<const double> cell_coefficients(std::size_t cell) const;
  std::span<double> cell_coefficients(std::size_t cell);

  Cell cell(std::size_t index) const;
  CellPolynomial piece(std::size_t index) const;

  /// Value of the owning cell's polynomial (half-open cell convention).
  /// Throws std::domain_error outside [0,1]^d.
  double operator()(std::span<const double> x) const;
  /// Value of the polynomial of `cell` extended beyond the cell.
  double evaluate_on_cell(std::size_t cell, std::span<const double> x) const;

  /// Exact re-representation on a finer grid; requires level() <= finer.
  PiecewisePoly refined(const MultiIndex& finer) const;

  GridFunction as_function(std::string label = "piecewise-poly") const;

  PiecewisePoly& operator+=(const PiecewisePoly& other);
  PiecewisePoly& operator-=(const PiecewisePoly& other);
  PiecewisePoly& operator*=(double c);
  friend PiecewisePoly operator+(PiecewisePoly a, const PiecewisePoly& b) { return a += b; }
  friend PiecewisePoly operator-(PiecewisePoly a, const PiecewisePoly& b) { return a -= b; }
  friend PiecewisePoly operator*(double c, PiecewisePoly a) { return a *= c; }

 private:
  void check_compatible(const PiecewisePoly& other) const;

  MultiIndex level_;
  MultiIndex degree_;
  std::size_t cells_;
  std::size_t per_cell_;
  std::vector<double> coefficients_;
};

/// Exact L2(I^d) orthogonal projection of a piecewise polynomial onto the
/// piecewise polynomials of `degree` on the grid at `level`. Integrals run over
/// the common refinement of both grids with a Gauss rule that is exact there.
PiecewisePoly project_exact(const PiecewisePoly& f, const MultiIndex& level,
                            const MultiIndex& degree);

/// L_p(I^d) norm. p = 2 is exact (orthonormal coefficients); otherwise the
/// composite rule `rule` is applied per cell and p = inf takes the maximum
/// over the quadrature nodes and the cell corners.
double lp_norm(const PiecewisePoly& f, double p, const QuadratureRule& rule);
double lp_norm(const PiecewisePoly& f, double p);
/// L_p(I^d) norm of a grid function with `rule` on the unit cube.
double lp_norm(const GridFunction& f, double p, const QuadratureRule& rule);

/// l_p norm of a vector, p in [1, inf].
double lp_vector_norm(std::span<const double> x, double p);

/// Values of each cell's polynomial at the nodes 2^{-level}(position + lambda),
/// lambda in Z_+^d(degree), cells then lambda in lexicographic order. Nodes with
/// lambda_j = degree_j may lie on or past the cell's far face; the owning cell's
/// polynomial is used there. Requires f.level() == dyadic_level(k, alpha).
std::vector<double> nodal_coordinates(const PiecewisePoly& f, std::span<const double> alpha, int k);
/// Inverse of nodal_coordinates.
PiecewisePoly from_nodal_coordinates(std::span<const double> values, const MultiIndex& degree,
                                     std::span<const double> alpha, int k);

/// {d, l, kappa, coefficients}.
nlohmann::json to_json(const PiecewisePoly& f);
PiecewisePoly piecewise_poly_from_json(const nlohmann::json& j);

}  // namespace nwidth
