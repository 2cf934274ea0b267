#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace nwidth {

/// Diagonal generalized ball {x : sum_j (|x_j| / rho_j)^p <= 1}; p = inf is
/// the box max_j |x_j| / rho_j <= 1.
class Ellipsoid {
 public:
  Ellipsoid(std::vector<double> semi_axes, double p);

  std::size_t dim() const noexcept { return original_.size(); }
  double exponent() const noexcept { return p_; }
  /// Semi-axes sorted descending.
  const std::vector<double>& semi_axes() const noexcept { return sorted_; }
  /// Semi-axes in construction order.
  const std::vector<double>& original_axes() const noexcept { return original_; }
  /// sorted[i] == original[permutation[i]].
  const std::vector<std::size_t>& permutation() const noexcept { return permutation_; }

  /// Minkowski functional of a vector given in construction coordinates.
  double gauge(std::span<const double> x) const;
  Ellipsoid scaled(double a) const;

 private:
  std::vector<double> original_;
  std::vector<double> sorted_;
  std::vector<std::size_t> permutation_;
  double p_;
};

struct EllipsoidIntersection {
  std::vector<Ellipsoid> members;
};

using ConvexBody = std::variant<Ellipsoid, EllipsoidIntersection>;

std::size_t body_dim(const ConvexBody& body);
/// Gauge of the body; an intersection takes the maximum over its members.
double minkowski(const ConvexBody& body, std::span<const double> x);

/// A run of `count` equal semi-axes; used where multiplicities are too large
/// to store the axes one by one. Runs must be given in descending value.
struct AxisGroup {
  double value;
  std::int64_t count;
};

/// Bernstein n-width of B_p^N(rho) in l_q^N for p < q (rho sorted descending):
/// (sum_{j<=n} rho_j^{pq/(p-q)})^{(p-q)/(pq)}, or (sum_{j<=n} rho_j^{-p})^{-1/p}
/// for q = inf. Throws std::invalid_argument unless p < q and 1 <= n <= N.
double width_ellipsoid_exact(std::span<const double> rho, double p, double q, std::int64_t n);
double width_ellipsoid_exact(std::span<const AxisGroup> rho, double p, double q, std::int64_t n);

/// Upper bound for the Bernstein n-width of the box B_inf^N(rho) in l_2^N:
/// (2 sum_{n/2 < j <= N} rho_j^2 / n)^{1/2}. Zero entries are allowed.
double width_box_l2_upper(std::span<const double> rho, std::int64_t n);
double width_box_l2_upper(std::span<const AxisGroup> rho, std::int64_t n);

/// Rate factor of the lower bound for b_n(B(l_p^{2n}), l_q^{2n}), constants
/// set to 1: n^{1/q-1/2} if q <= 2 <= p, 1 if 2 <= q <= p, n^{1/q-1/p} otherwise.
double width_shell_lower_rate(double p, double q, std::int64_t n);

struct SubspaceSearch {
  int directions = 4096;
  int refine_steps = 200;
  std::uint64_t seed = 0x5eed;
};

/// Estimate of inf over nonzero x in the row span of `basis` (n x N) of
/// ||x||_q / mu_body(x): random directions on the coefficient sphere, then
/// pattern search with a shrinking step from the best candidates. The
/// estimate is never below the true infimum. Throws std::invalid_argument
/// if the rows are linearly dependent.
double width_on_subspace(const ConvexBody& body, const Eigen::MatrixXd& basis, double q,
                         const SubspaceSearch& search = {});

struct OracleResult {
  double value = 0.0;
  /// -1 when the leading-coordinate subspace attained the maximum.
  int best_trial = -1;
  std::uint64_t seed = 0;
  int trials = 0;
};

/// Maximum of width_on_subspace over the leading-coordinate n-subspace (the
/// n largest semi-axes of an ellipsoid; the first n coordinates of an
/// intersection) and `trials` random n-subspaces. Trial i takes the first n
/// rows of an N x N Gaussian matrix drawn from a per-trial seed, so the
/// subspaces for n and n + 1 are nested.
OracleResult width_oracle(const ConvexBody& body, double q, std::int64_t n, int trials, std::uint64_t seed,
                          const SubspaceSearch& search = {});

}  // namespace nwidth
