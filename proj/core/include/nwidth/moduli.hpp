#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwidth/gridfunction.hpp"
#include "nwidth/indexgrid.hpp"
#include "nwidth/quadrature.hpp"

namespace nwidth {

/// l-th forward difference of f along axis j (0-based) with step xi at x:
/// sum_m C(l,m) (-1)^{l-m} f(x + m xi e_j). Empty when x or x + l xi e_j
/// leaves the unit cube along axis j.
std::optional<double> forward_difference(const GridFunction& f, std::size_t j, int l, double xi,
                                         std::span<const double> x);

/// Direction and difference order of one averaged modulus.
struct ModulusSpec {
  std::size_t direction = 0;
  int order = 1;
  double p = 1.0;

  void validate(std::size_t dim) const;
};

/// Quadrature knobs for the moduli. The xi-integral uses xi_panels Gauss
/// panels of xi_nodes points over [0, 1/l] on each side of zero; the spatial
/// integrals use a composite rule with inner_nodes points on inner_panels[j]
/// panels per axis (4 per axis when empty). The Besov-type integral uses
/// t_nodes Gauss points in log t per t-grid segment; the Nikolskii-type sup
/// refines the grid maximum by sup_zooms rounds of sup_points local samples.
struct ModulusOptions {
  int xi_panels = 64;
  int xi_nodes = 8;
  int inner_nodes = 8;
  std::vector<int> inner_panels;
  int t_nodes = 4;
  int sup_points = 16;
  int sup_zooms = 2;

  int panels(std::size_t axis) const;
  void validate(std::size_t dim) const;
};

/// Geometric grid t_min * ratio^i up to t_max (inclusive up to roundoff).
struct TGrid {
  double log2_min = -12.0;
  double log2_max = 2.0;
  double log2_ratio = 0.5;

  std::vector<double> points() const;
  /// Same range with the ratio square-rooted.
  TGrid refined() const;
  void validate() const;
};

/// ||Delta^l_{xi e_j} f||^p over the part of the cube where the difference
/// is defined; 0 when |xi| >= 1/l.
double difference_power_integral(const GridFunction& f, const ModulusSpec& spec, double xi,
                                 const ModulusOptions& options = {});

/// Averaged modulus ((2t)^{-1} int_{-t}^{t} ||Delta^l_{xi e_j} f||_p^p dxi)^{1/p}.
double averaged_modulus(const GridFunction& f, const ModulusSpec& spec, double t,
                        const ModulusOptions& options = {});

/// Averaged modulus at every t of `ts` (ascending), sharing one cumulative
/// xi-integral.
std::vector<double> averaged_modulus_profile(const GridFunction& f, const ModulusSpec& spec,
                                             std::span<const double> ts,
                                             const ModulusOptions& options = {});

/// max over sampled xi in [-t, t] of ||Delta^l_{xi e_j} f||_p.
double sampled_sup_modulus(const GridFunction& f, const ModulusSpec& spec, double t, int samples,
                           const ModulusOptions& options = {});

struct PrimedNorms {
  double lp = 0.0;
  std::vector<double> seminorms;
  double total = 0.0;
};

/// Nikolskii-type norm: seminorm_j = sup over [t_min, t_max] of
/// t^{-alpha_j} Omega'_j(f, t), the grid maximum refined locally.
PrimedNorms nikolskii_norm(const GridFunction& f, std::span<const double> alpha, double p,
                           const TGrid& grid = {}, const ModulusOptions& options = {});

/// Besov-type norm: seminorm_j = (int_0^inf t^{-1-theta alpha_j} Omega'_j^theta dt)^{1/theta}.
/// Gauss rule in log t on every grid segment (the support edge 1/l is an
/// extra segment end); the range below the grid is extrapolated as a power
/// law from the first segment, and above the grid
/// Omega'(t) = Omega'(T) (T/t)^{1/p} holds exactly once T >= 1/l.
/// theta = inf returns nikolskii_norm.
PrimedNorms besov_norm(const GridFunction& f, std::span<const double> alpha, double p, double theta,
                       const TGrid& grid = {}, const ModulusOptions& options = {});

/// Constant of the embedding of the Besov-type into the Nikolskii-type class:
/// max_j 2^{2 + alpha_j}.
double embedding_constant(std::span<const double> alpha);

/// Pull-back x -> f(x0 + delta x) together with the L_p factor delta^{-e/p}:
/// ||pulled||_{L_p(I^d)} = factor * ||f||_{L_p(x0 + delta I^d)}.
struct AffineTransfer {
  GridFunction pulled;
  double factor;
};
AffineTransfer affine_transfer(const GridFunction& f, std::span<const double> delta,
                               std::span<const double> x0, double p);
/// y -> g((y - x0) / delta).
GridFunction inverse_affine(const GridFunction& g, std::span<const double> delta,
                            std::span<const double> x0);

/// Both sides of the transfer identity: ||pulled||_{L_p(I^d)} and
/// factor * ||f||_{L_p(x0 + delta I^d)}, each by `rule`.
struct TransferCheck {
  double pulled_norm;
  double scaled_norm;
};
TransferCheck check_affine_transfer(const GridFunction& f, std::span<const double> delta,
                                    std::span<const double> x0, double p, const QuadratureRule& rule);

/// Named test functions: "zero", "linear", "abs-power:<g>", "sin:<w>",
/// "bump", "piecewise-poly:<json file>". Throws std::invalid_argument for
/// unknown names.
GridFunction make_catalog_function(const std::string& name, std::size_t dim);

}  // namespace nwidth
