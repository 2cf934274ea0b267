#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nwidth/indexgrid.hpp"

namespace nwidth {

/// Raised when an adaptive rule cannot meet its tolerance at the refinement cap.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [0,1] (m >= 1). Rules are computed once and
/// cached; the returned reference stays valid for the program lifetime.
const GaussRule& gauss_legendre(int m);

/// Axis-aligned box in R^d.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  double volume() const;
  static Box unit(std::size_t d);
  static Box of(const Cell& cell);
};

/// Composite tensor Gauss rule, optionally adaptive.
///
/// The fixed rule splits every axis of the box into `panels` equal panels and
/// applies `nodes` Gauss points per axis per panel. The adaptive rule starts
/// from the fixed rule and bisects boxes (all axes at once) where the fixed
/// rule and the rule on the 2^d children disagree, until the summed estimate
/// is below max(rel_tol * |integral|, abs_tol) or a box reaches `max_level`.
struct QuadratureRule {
  int nodes = 4;
  int panels = 1;
  bool adaptive = false;
  double rel_tol = 1e-8;
  double abs_tol = 1e-15;
  int max_level = 12;

  /// Exact for the polynomial algebra of degree `degree`: max_j l_j + 3 nodes.
  static QuadratureRule for_degree(const MultiIndex& degree);
  /// Refining rule for non-polynomial integrands.
  static QuadratureRule adaptive_default(int nodes = 6);

  void validate() const;
};

/// Tensor nodes (row-major, dim entries per node) and weights of the fixed
/// composite rule on a box. Weights are positive and sum to the box volume.
struct TensorRule {
  std::size_t dim = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }
};
TensorRule tensor_rule(const Box& box, int nodes, int panels = 1);

using ScalarIntegrand = std::function<double(std::span<const double>)>;
/// Writes `out.size()` integrand components at x.
using VectorIntegrand = std::function<void(std::span<const double> x, std::span<double> out)>;

std::vector<double> integrate(const Box& box, const QuadratureRule& rule, std::size_t components,
                              const VectorIntegrand& f);
double integrate(const Box& box, const QuadratureRule& rule, const ScalarIntegrand& f);

}  // namespace nwidth
