#include "nwidth/indexgrid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nwidth {

namespace {

void check_nonnegative(const std::vector<int>& entries) {
  for (int v : entries) {
    if (v < 0) throw std::invalid_argument("MultiIndex entries must be nonnegative");
  }
}

// floor of a quotient that should be an integer up to roundoff, e.g. 3/0.1.
int robust_floor(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::floor(x));
}

}  // namespace

MultiIndex::MultiIndex(std::size_t d, int value) : entries_(d, value) {
  check_nonnegative(entries_);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : entries_(entries) {
  check_nonnegative(entries_);
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  check_nonnegative(entries_);
}

void MultiIndex::set(std::size_t j, int value) {
  if (value < 0) throw std::invalid_argument("MultiIndex entries must be nonnegative");
  entries_.at(j) = value;
}

std::int64_t MultiIndex::sum() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), std::int64_t{0});
}

std::int64_t MultiIndex::tensor_size() const noexcept {
  std::int64_t n = 1;
  for (int v : entries_) n *= v + 1;
  return n;
}

int MultiIndex::max() const noexcept {
  return entries_.empty() ? 0 : *std::max_element(entries_.begin(), entries_.end());
}

MultiIndex MultiIndex::plus(int value) const {
  std::vector<int> out(entries_);
  for (int& v : out) v += value;
  return MultiIndex(std::move(out));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j) os << ',';
    os << entries_[j];
  }
  os << ')';
  return os.str();
}

bool componentwise_le(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("MultiIndex dimension mismatch");
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] > b[j]) return false;
  }
  return true;
}

MultiIndex componentwise_max(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw std::invalid_argument("MultiIndex dimension mismatch");
  std::vector<int> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = std::max(a[j], b[j]);
  return MultiIndex(std::move(out));
}

std::vector<MultiIndex> box_indices(const std::vector<std::int64_t>& extents) {
  std::int64_t total = 1;
  for (auto e : extents) {
    if (e <= 0) return {};
    total *= e;
  }
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> current(extents.size(), 0);
  for (std::int64_t n = 0; n < total; ++n) {
    out.emplace_back(current);
    for (std::size_t j = extents.size(); j-- > 0;) {
      if (++current[j] < extents[j]) break;
      current[j] = 0;
    }
  }
  return out;
}

std::vector<MultiIndex> degree_indices(const MultiIndex& degree) {
  std::vector<std::int64_t> extents;
  extents.reserve(degree.size());
  for (int v : degree) extents.push_back(v + 1);
  return box_indices(extents);
}

void validate_alpha(std::span<const double> alpha) {
  if (alpha.empty()) throw std::invalid_argument("alpha must have at least one entry");
  for (double a : alpha) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("alpha entries must be positive and finite");
    }
  }
}

MultiIndex smoothness_order(std::span<const double> alpha) {
  validate_alpha(alpha);
  std::vector<int> l(alpha.size());
  // min{m in N : alpha < m} is floor(alpha) + 1 for integer and noninteger alpha.
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    l[j] = static_cast<int>(std::floor(alpha[j])) + 1;
  }
  return MultiIndex(std::move(l));
}

double harmonic_sum(std::span<const double> alpha) {
  validate_alpha(alpha);
  double s = 0.0;
  for (double a : alpha) s += 1.0 / a;
  return s;
}

AnisoParams::AnisoParams(std::vector<double> alpha, double p, double q, double theta)
    : alpha_(std::move(alpha)), p_(p), q_(q), theta_(theta) {
  validate_alpha(alpha_);
  if (!(p_ >= 1.0) || !std::isfinite(p_)) throw std::invalid_argument("p must lie in [1, inf)");
  if (!(q_ >= 1.0)) throw std::invalid_argument("q must lie in [1, inf]");
  if (!(theta_ >= 1.0)) throw std::invalid_argument("theta must lie in [1, inf]");
  order_ = nwidth::smoothness_order(alpha_);
  harmonic_sum_ = nwidth::harmonic_sum(alpha_);
}

double AnisoParams::embedding_margin() const noexcept {
  const double gap = std::max(0.0, reciprocal(p_) - reciprocal(q_));
  return 1.0 - harmonic_sum_ * gap;
}

MultiIndex dyadic_level(int k, std::span<const double> alpha) {
  validate_alpha(alpha);
  if (k < 0) throw std::invalid_argument("dyadic_level requires k >= 0");
  std::vector<int> out(alpha.size());
  for (std::size_t j = 0; j < alpha.size(); ++j) out[j] = robust_floor(k / alpha[j]);
  return MultiIndex(std::move(out));
}

MultiIndex bump_resolution(int k, std::span<const double> alpha) {
  validate_alpha(alpha);
  if (k < 1) throw std::invalid_argument("bump_resolution requires k >= 1");
  std::vector<int> out(alpha.size());
  const double kd = k;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    // floor(k^{1/a}) = largest r with r^a <= k, checked with a relative slack
    // so that e.g. 8^{1/3} resolves to 2.
    auto fits = [&](double r) { return std::pow(r, alpha[j]) <= kd * (1.0 + 1e-12); };
    auto r = static_cast<std::int64_t>(std::floor(std::pow(kd, 1.0 / alpha[j])));
    while (r > 1 && !fits(static_cast<double>(r))) --r;
    while (fits(static_cast<double>(r + 1))) ++r;
    out[j] = static_cast<int>(r);
  }
  return MultiIndex(std::move(out));
}

std::int64_t cell_count(const MultiIndex& level) {
  const auto s = level.sum();
  if (s >= 62) throw std::overflow_error("cell count 2^" + std::to_string(s) + " overflows");
  return std::int64_t{1} << s;
}

std::int64_t space_dimension(const MultiIndex& degree, std::span<const double> alpha, int k) {
  if (degree.size() != alpha.size()) throw std::invalid_argument("degree/alpha dimension mismatch");
  const auto cells = cell_count(dyadic_level(k, alpha));
  const auto per_cell = degree.tensor_size();
  if (cells > std::numeric_limits<std::int64_t>::max() / per_cell) {
    throw std::overflow_error("space dimension overflows int64");
  }
  return cells * per_cell;
}

double DyadicRational::value() const noexcept {
  return std::ldexp(static_cast<double>(numerator), -exponent);
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  // Compare a.n / 2^a.e with b.n / 2^b.e by bringing both to the finer exponent.
  if (a.exponent == b.exponent) return a.numerator <=> b.numerator;
  if (a.exponent < b.exponent) {
    return (a.numerator << (b.exponent - a.exponent)) <=> b.numerator;
  }
  return a.numerator <=> (b.numerator << (a.exponent - b.exponent));
}

Cell::Cell(MultiIndex level, MultiIndex position)
    : level_(std::move(level)), position_(std::move(position)) {
  if (level_.size() != position_.size()) throw std::invalid_argument("Cell level/position mismatch");
  for (std::size_t j = 0; j < level_.size(); ++j) {
    if (level_[j] >= 62) throw std::overflow_error("cell level too deep");
    if (position_[j] >= (std::int64_t{1} << level_[j])) {
      throw std::invalid_argument("cell position outside the unit cube");
    }
  }
}

DyadicRational Cell::lower(std::size_t j) const { return {position_[j], level_[j]}; }
DyadicRational Cell::upper(std::size_t j) const { return {position_[j] + 1, level_[j]}; }
double Cell::lower_corner(std::size_t j) const { return lower(j).value(); }
double Cell::side(std::size_t j) const { return std::ldexp(1.0, -level_[j]); }

double Cell::volume() const { return std::ldexp(1.0, -static_cast<int>(level_.sum())); }

bool Cell::contains(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("point dimension mismatch");
  for (std::size_t j = 0; j < dim(); ++j) {
    const double lo = lower_corner(j);
    const double hi = lo + side(j);
    if (x[j] < lo) return false;
    if (x[j] > hi) return false;
    if (x[j] == hi && hi < 1.0) return false;
  }
  return true;
}

std::vector<Cell> cells_at(const MultiIndex& level) {
  std::vector<std::int64_t> extents;
  for (int v : level) extents.push_back(std::int64_t{1} << v);
  (void)cell_count(level);
  std::vector<Cell> out;
  for (auto& pos : box_indices(extents)) out.emplace_back(level, std::move(pos));
  return out;
}

std::size_t cell_linear_index(const MultiIndex& level, const MultiIndex& position) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < level.size(); ++j) {
    index = (index << level[j]) + static_cast<std::size_t>(position[j]);
  }
  return index;
}

MultiIndex locate_cell(const MultiIndex& level, std::span<const double> x) {
  if (x.size() != level.size()) throw std::invalid_argument("point dimension mismatch");
  std::vector<int> pos(level.size());
  for (std::size_t j = 0; j < level.size(); ++j) {
    if (!(x[j] >= 0.0 && x[j] <= 1.0)) {
      throw std::domain_error("point outside the closed unit cube");
    }
    const std::int64_t n = std::int64_t{1} << level[j];
    auto i = static_cast<std::int64_t>(std::floor(std::ldexp(x[j], level[j])));
    pos[j] = static_cast<int>(std::min(i, n - 1));
  }
  return MultiIndex(std::move(pos));
}

bool cell_nesting(const Cell& inner, const Cell& outer) {
  if (inner.dim() != outer.dim()) throw std::invalid_argument("cell dimension mismatch");
  for (std::size_t j = 0; j < inner.dim(); ++j) {
    if (inner.lower(j) < outer.lower(j)) return false;
    if (inner.upper(j) > outer.upper(j)) return false;
  }
  return true;
}

}  // namespace nwidth
