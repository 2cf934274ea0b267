#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nwidth/gridfunction.hpp"
#include "nwidth/indexgrid.hpp"
#include "nwidth/moduli.hpp"

namespace nwidth {

/// Parameters for which no rate case applies, or below the first admissible n.
class InapplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class RegimeLabel { R1, R2, R3, Inapplicable };

std::string to_string(RegimeLabel label);

struct Condition {
  std::string name;
  double value;
  bool satisfied;
};

/// Rate case of the width asymptotics b_n ~ n^{-exponent}.
struct Regime {
  RegimeLabel label = RegimeLabel::Inapplicable;
  double exponent = 0.0;
  std::vector<Condition> conditions;

  /// Names of the unsatisfied conditions, comma separated.
  std::string violated() const;
};

Regime classify(std::span<const double> alpha, double p, double q);

struct LevelChoice {
  int k;
  std::int64_t dimension;  // R_k for degree l(alpha) - e
};

/// 2 R_0, the smallest n the level choice accepts.
std::int64_t minimal_n(std::span<const double> alpha);
/// The k with 2 R_k <= n < 2 R_{k+1} (degree l(alpha) - e); when R_k repeats,
/// the largest such k. Throws InapplicableError for n < 2 R_0.
LevelChoice choose_level(std::int64_t n, std::span<const double> alpha);

/// Upper-bound rate value with all constants set to 1.
///   q <= p <= 2 or q = p: 2^{-k}.
///   p > max(2, q): box-in-l2 width of the axis runs rho_j with multiplicity
///     R_{k+j}, evaluated at R_k.
///   p < q: exact ellipsoid width of the same runs in l_q, evaluated at R_k.
double upper_bound_value(std::span<const double> alpha, double p, double q, std::int64_t n);

/// n^{-1/A + 1/p - 1/q} * width_shell_lower_rate(p, q, n), A = sum 1/alpha_j.
double lower_bound_value(std::span<const double> alpha, double p, double q, std::int64_t n);

/// prod_j exp(-1 / (x_j (1 - x_j))) on the open unit cube, 0 elsewhere.
double bump(std::span<const double> x);
/// ||bump||_{L_r(I^d)}.
double bump_norm(std::size_t dim, double r);

/// Disjoint translates bump(resolution * x - position).
struct BumpSystem {
  int k = 0;
  MultiIndex resolution;
  std::vector<MultiIndex> positions;

  std::size_t dim() const noexcept { return resolution.size(); }
  std::size_t size() const noexcept { return positions.size(); }
  /// sum_i beta_i bump(resolution x - positions_i).
  double evaluate(std::span<const double> beta, std::span<const double> x) const;
  GridFunction function(std::vector<double> beta) const;
  /// Composite Gauss rule aligned with the lattice: `sub` panels of `nodes`
  /// points per lattice cell per axis.
  double lp_norm(std::span<const double> beta, double r, int sub = 4, int nodes = 10) const;
  /// Quadrature knobs resolving one lattice cell by `sub` panels.
  ModulusOptions modulus_options(int sub = 4, int nodes = 8) const;

 private:
  std::vector<std::int64_t> lookup_;  // lattice linear index -> slot or -1
  friend BumpSystem bump_system(int n, std::span<const double> alpha, std::optional<int> level);
};

/// 2n bumps on the lattice of resolution bump_resolution(k, alpha), k the
/// smallest k >= 2 with prod Kappa(k-1) < 2n <= prod Kappa(k) unless `level`
/// fixes k. Positions are the first 2n lattice points in lexicographic order.
BumpSystem bump_system(int n, std::span<const double> alpha, std::optional<int> level = std::nullopt);

struct NormPair {
  double lhs;
  double rhs;
};
/// lhs = ||sum beta_i bump_i||_{L_r} by quadrature,
/// rhs = ||bump||_r * prod(resolution)^{-1/r} * ||beta||_{l_r}.
NormPair bump_norm_identity(const BumpSystem& system, std::span<const double> beta, double r);

struct CertificateOptions {
  int samples = 16;
  std::uint64_t seed = 1;
  int sub_panels = 4;
  TGrid grid{};
};

/// min over sampled unit coefficient vectors beta supported on the first n
/// bumps of ||J beta||_{L_q} / ||J beta||_{Besov-type}, J beta the bump
/// combination. The coordinate vectors are always among the samples.
double constructive_lower_certificate(std::span<const double> alpha, double p, double theta, double q, int n,
                                      const CertificateOptions& options = {});

}  // namespace nwidth
