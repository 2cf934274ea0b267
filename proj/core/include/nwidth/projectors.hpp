#pragma once

#include <vector>

#include "nwidth/gridfunction.hpp"
#include "nwidth/indexgrid.hpp"
#include "nwidth/polyspace.hpp"
#include "nwidth/quadrature.hpp"

namespace nwidth {

/// Parameters of the level projectors E_k: polynomial degree, anisotropy and
/// the quadrature used for non-polynomial inputs.
struct ProjectorConfig {
  MultiIndex degree;
  std::vector<double> alpha;
  QuadratureRule rule = default_rule();
  /// Constant added to every E_k output (k >= 0). Zero in normal use; a
  /// nonzero value breaks the projector identities on purpose.
  double fault = 0.0;

  static QuadratureRule default_rule();
  /// Degree l(alpha) - e, the choice used by the rate pipelines.
  static ProjectorConfig reduced(std::vector<double> alpha);

  void validate() const;
};

/// L2(cell)-orthogonal projection of f onto tensor polynomials of `degree`.
/// Throws QuadratureError if an adaptive rule misses its tolerance.
CellPolynomial local_project(const GridFunction& f, const Cell& cell, const MultiIndex& degree,
                             const QuadratureRule& rule);

/// Cell-wise projection onto the piecewise polynomials on the grid at `level`.
PiecewisePoly project_grid(const GridFunction& f, const MultiIndex& level, const MultiIndex& degree,
                           const QuadratureRule& rule);
PiecewisePoly project_grid(const PiecewisePoly& f, const MultiIndex& level, const MultiIndex& degree);

/// E_k = projection at level dyadic_level(k, alpha); k = -1 gives the zero
/// element on the single-cell grid.
PiecewisePoly project_level(const GridFunction& f, const ProjectorConfig& cfg, int k);
PiecewisePoly project_level(const PiecewisePoly& f, const ProjectorConfig& cfg, int k);

/// E_k f - E_{k-1} f on the grid of level k (k >= 0).
PiecewisePoly level_increment(const GridFunction& f, const ProjectorConfig& cfg, int k);
PiecewisePoly level_increment(const PiecewisePoly& f, const ProjectorConfig& cfg, int k);

/// E_{k+j} f - E_k f on the grid of level k + j (k >= 0, j >= 1).
PiecewisePoly block_increment(const GridFunction& f, const ProjectorConfig& cfg, int k, int j);
PiecewisePoly block_increment(const PiecewisePoly& f, const ProjectorConfig& cfg, int k, int j);

/// ||f - E_k f||_{L_q(I^d)}. Finite q integrates |f - E_k f|^q cell by cell
/// with cfg.rule; q = inf takes the maximum over each cell's quadrature nodes
/// and corners.
double approx_error(const GridFunction& f, const ProjectorConfig& cfg, int k, double q);

}  // namespace nwidth
