#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace nwidth {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Vector of nonnegative integers. Used for dyadic levels, cell positions and
/// per-axis polynomial degrees.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t d, int value = 0);
  MultiIndex(std::initializer_list<int> entries);
  explicit MultiIndex(std::vector<int> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  int operator[](std::size_t j) const { return entries_[j]; }
  void set(std::size_t j, int value);

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }
  const std::vector<int>& entries() const noexcept { return entries_; }

  /// Sum of the entries, (m, e).
  std::int64_t sum() const noexcept;
  /// Product of (m_j + 1): the dimension of the tensor polynomial space of
  /// degree m.
  std::int64_t tensor_size() const noexcept;
  int max() const noexcept;

  MultiIndex plus(int value) const;

  std::string to_string() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
};

/// a_j <= b_j for all j.
bool componentwise_le(const MultiIndex& a, const MultiIndex& b);
/// max(a_j, b_j).
MultiIndex componentwise_max(const MultiIndex& a, const MultiIndex& b);

/// All multi-indices m with 0 <= m_j < extents_j, lexicographic (last axis
/// fastest).
std::vector<MultiIndex> box_indices(const std::vector<std::int64_t>& extents);
/// Z_+^d(l): all m with 0 <= m_j <= l_j, lexicographic.
std::vector<MultiIndex> degree_indices(const MultiIndex& degree);

/// Smoothness parameters of an anisotropic Nikolskii/Besov class together with
/// the target-norm exponents. Infinite exponents are `kInfinity`.
class AnisoParams {
 public:
  AnisoParams(std::vector<double> alpha, double p, double q, double theta = kInfinity);

  std::size_t dim() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double theta() const noexcept { return theta_; }

  /// l(alpha)_j = min{m in N : alpha_j < m}.
  const MultiIndex& smoothness_order() const noexcept { return order_; }
  /// sum_j 1/alpha_j.
  double harmonic_sum() const noexcept { return harmonic_sum_; }
  /// 1 - (sum 1/alpha_j)(1/p - 1/q)_+; the class embeds into L_q iff > 0.
  double embedding_margin() const noexcept;
  bool embeds_into_lq() const noexcept { return embedding_margin() > 0.0; }

 private:
  std::vector<double> alpha_;
  double p_;
  double q_;
  double theta_;
  MultiIndex order_;
  double harmonic_sum_;
};

void validate_alpha(std::span<const double> alpha);
MultiIndex smoothness_order(std::span<const double> alpha);
double harmonic_sum(std::span<const double> alpha);
/// 1/r with 1/inf = 0.
inline double reciprocal(double r) { return r == kInfinity ? 0.0 : 1.0 / r; }

/// Anisotropic dyadic level: entry j is floor(k / alpha_j).
MultiIndex dyadic_level(int k, std::span<const double> alpha);
/// Bump-lattice resolution: entry j is floor(k^(1/alpha_j)), k >= 1.
MultiIndex bump_resolution(int k, std::span<const double> alpha);

/// Dimension of the piecewise-polynomial space of degree `degree` on the grid
/// dyadic_level(k, alpha): 2^{sum level} * prod(degree_j + 1).
/// Throws std::overflow_error if the count does not fit in int64.
std::int64_t space_dimension(const MultiIndex& degree, std::span<const double> alpha, int k);
/// Number of cells 2^{sum level}; throws std::overflow_error on overflow.
std::int64_t cell_count(const MultiIndex& level);

/// numerator / 2^exponent, exact.
struct DyadicRational {
  std::int64_t numerator = 0;
  int exponent = 0;

  double value() const noexcept;
  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

/// Dyadic cell 2^{-level} position + 2^{-level} [0,1]^d.
class Cell {
 public:
  Cell(MultiIndex level, MultiIndex position);

  const MultiIndex& level() const noexcept { return level_; }
  const MultiIndex& position() const noexcept { return position_; }
  std::size_t dim() const noexcept { return level_.size(); }

  DyadicRational lower(std::size_t j) const;
  DyadicRational upper(std::size_t j) const;
  double lower_corner(std::size_t j) const;
  double side(std::size_t j) const;
  double volume() const;

  /// Half-open [lower, upper) per axis, with the face x_j = 1 closed.
  bool contains(std::span<const double> x) const;

 private:
  MultiIndex level_;
  MultiIndex position_;
};

/// All cells of the grid at `level`, lexicographic in the position.
std::vector<Cell> cells_at(const MultiIndex& level);
/// Linear (lexicographic) index of a cell position on the grid at `level`.
std::size_t cell_linear_index(const MultiIndex& level, const MultiIndex& position);
/// Position of the cell owning x (closed unit cube, half-open convention).
/// Throws std::domain_error for points outside [0,1]^d.
MultiIndex locate_cell(const MultiIndex& level, std::span<const double> x);

/// True iff inner is a subset of outer.
bool cell_nesting(const Cell& inner, const Cell& outer);

}  // namespace nwidth
