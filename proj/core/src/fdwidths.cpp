#include "nwidth/fdwidths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "nwidth/indexgrid.hpp"

namespace nwidth {

namespace {

std::int64_t total_count(std::span<const AxisGroup> rho, bool allow_zero = false) {
  std::int64_t n = 0;
  double previous = kInfinity;
  for (const auto& g : rho) {
    const bool valid = allow_zero ? g.value >= 0.0 : g.value > 0.0;
    if (!valid || g.count < 0) throw std::invalid_argument("axis groups need positive values and counts");
    if (g.value > previous) throw std::invalid_argument("axis groups must be sorted descending");
    previous = g.value;
    n += g.count;
  }
  return n;
}

std::vector<AxisGroup> as_groups(std::span<const double> rho) {
  std::vector<AxisGroup> out;
  out.reserve(rho.size());
  for (double r : rho) out.push_back(AxisGroup{r, 1});
  return out;
}

double q_norm(const Eigen::VectorXd& x, double q) {
  if (q == kInfinity) return x.cwiseAbs().maxCoeff();
  if (q == 2.0) return x.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), q);
  return std::pow(s, 1.0 / q);
}

std::mt19937_64 derived_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

class SubspaceRatio {
 public:
  SubspaceRatio(const ConvexBody& body, const Eigen::MatrixXd& basis, double q)
      : body_(body), basis_(basis), q_(q), x_(basis.cols()) {}

  // Ratio for coefficient vector c (any nonzero scale).
  double operator()(const Eigen::VectorXd& c) {
    x_.noalias() = basis_.transpose() * c;
    const double mu = minkowski(body_, std::span<const double>(x_.data(), static_cast<std::size_t>(x_.size())));
    if (mu == 0.0) return kInfinity;
    return q_norm(x_, q_) / mu;
  }

 private:
  const ConvexBody& body_;
  const Eigen::MatrixXd& basis_;
  double q_;
  Eigen::VectorXd x_;
};

}  // namespace

Ellipsoid::Ellipsoid(std::vector<double> semi_axes, double p) : original_(std::move(semi_axes)), p_(p) {
  if (original_.empty()) throw std::invalid_argument("ellipsoid needs at least one semi-axis");
  if (!(p_ >= 1.0)) throw std::invalid_argument("ellipsoid exponent must lie in [1, inf]");
  for (double r : original_) {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("semi-axes must be positive and finite");
  }
  permutation_.resize(original_.size());
  std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
  std::stable_sort(permutation_.begin(), permutation_.end(),
                   [&](std::size_t a, std::size_t b) { return original_[a] > original_[b]; });
  sorted_.reserve(original_.size());
  for (std::size_t i : permutation_) sorted_.push_back(original_[i]);
}

double Ellipsoid::gauge(std::span<const double> x) const {
  if (x.size() != dim()) throw std::invalid_argument("gauge: dimension mismatch");
  if (p_ == kInfinity) {
    double m = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) m = std::max(m, std::abs(x[j]) / original_[j]);
    return m;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += std::pow(std::abs(x[j]) / original_[j], p_);
  return std::pow(s, 1.0 / p_);
}

Ellipsoid Ellipsoid::scaled(double a) const {
  if (!(a > 0.0)) throw std::invalid_argument("ellipsoid scale must be positive");
  std::vector<double> axes(original_);
  for (double& r : axes) r *= a;
  return Ellipsoid(std::move(axes), p_);
}

std::size_t body_dim(const ConvexBody& body) {
  if (const auto* e = std::get_if<Ellipsoid>(&body)) return e->dim();
  const auto& members = std::get<EllipsoidIntersection>(body).members;
  if (members.empty()) throw std::invalid_argument("empty intersection");
  return members.front().dim();
}

double minkowski(const ConvexBody& body, std::span<const double> x) {
  if (const auto* e = std::get_if<Ellipsoid>(&body)) return e->gauge(x);
  const auto& members = std::get<EllipsoidIntersection>(body).members;
  if (members.empty()) throw std::invalid_argument("empty intersection");
  double m = 0.0;
  for (const auto& e : members) m = std::max(m, e.gauge(x));
  return m;
}

double width_ellipsoid_exact(std::span<const AxisGroup> rho, double p, double q, std::int64_t n) {
  if (!(p >= 1.0) || !(p < q)) throw std::invalid_argument("exact ellipsoid width requires 1 <= p < q");
  const std::int64_t total = total_count(rho);
  if (n < 1 || n > total) {
    throw std::invalid_argument("width index n=" + std::to_string(n) + " outside [1, " + std::to_string(total) + "]");
  }
  const double e = q == kInfinity ? -p : p * q / (p - q);
  double s = 0.0;
  std::int64_t remaining = n;
  for (const auto& g : rho) {
    const std::int64_t take = std::min(remaining, g.count);
    s += static_cast<double>(take) * std::pow(g.value, e);
    remaining -= take;
    if (remaining == 0) break;
  }
  return std::pow(s, 1.0 / e);
}

double width_ellipsoid_exact(std::span<const double> rho, double p, double q, std::int64_t n) {
  const auto groups = as_groups(rho);
  return width_ellipsoid_exact(std::span<const AxisGroup>(groups), p, q, n);
}

double width_box_l2_upper(std::span<const AxisGroup> rho, std::int64_t n) {
  const std::int64_t total = total_count(rho, true);
  if (n < 1 || n > total) {
    throw std::invalid_argument("width index n=" + std::to_string(n) + " outside [1, " + std::to_string(total) + "]");
  }
  std::int64_t skip = n / 2;  // j > n/2, 1-based
  double s = 0.0;
  for (const auto& g : rho) {
    const std::int64_t skipped = std::min(skip, g.count);
    skip -= skipped;
    s += static_cast<double>(g.count - skipped) * g.value * g.value;
  }
  return std::sqrt(2.0 * s / static_cast<double>(n));
}

double width_box_l2_upper(std::span<const double> rho, std::int64_t n) {
  for (std::size_t j = 1; j < rho.size(); ++j) {
    if (rho[j] > rho[j - 1]) throw std::invalid_argument("semi-axes must be sorted descending");
  }
  const auto groups = as_groups(rho);
  return width_box_l2_upper(std::span<const AxisGroup>(groups), n);
}

double width_shell_lower_rate(double p, double q, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("width_shell_lower_rate needs n >= 1");
  if (!(p >= 1.0) || !(q >= 1.0)) throw std::invalid_argument("exponents must be >= 1");
  const double nn = static_cast<double>(n);
  if (q <= 2.0 && 2.0 <= p) return std::pow(nn, reciprocal(q) - 0.5);
  if (2.0 <= q && q <= p) return 1.0;
  return std::pow(nn, reciprocal(q) - reciprocal(p));
}

double width_on_subspace(const ConvexBody& body, const Eigen::MatrixXd& basis, double q,
                         const SubspaceSearch& search) {
  const auto n = basis.rows();
  const auto dim = static_cast<Eigen::Index>(body_dim(body));
  if (basis.cols() != dim) throw std::invalid_argument("subspace basis has wrong ambient dimension");
  if (n < 1) throw std::invalid_argument("subspace must have dimension >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.transpose());
  if (qr.rank() < n) throw std::invalid_argument("subspace basis is rank deficient");

  SubspaceRatio ratio(body, basis, q);
  if (n == 1) return ratio(Eigen::VectorXd::Ones(1));

  auto rng = derived_engine(search.seed, static_cast<std::uint64_t>(n));
  std::normal_distribution<double> normal;
  auto random_unit = [&] {
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = normal(rng);
    return Eigen::VectorXd(c.normalized());
  };

  struct Candidate {
    double value;
    Eigen::VectorXd c;
  };
  std::vector<Candidate> pool;
  for (Eigen::Index i = 0; i < n; ++i) pool.push_back({ratio(Eigen::VectorXd::Unit(n, i)), Eigen::VectorXd::Unit(n, i)});
  for (int s = 0; s < search.directions; ++s) {
    Eigen::VectorXd c = random_unit();
    pool.push_back({ratio(c), std::move(c)});
  }
  const std::size_t keep = std::min<std::size_t>(4, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  double best = pool.front().value;
  for (std::size_t start = 0; start < keep; ++start) {
    Eigen::VectorXd c = pool[start].c;
    double value = pool[start].value;
    double h = 0.25;
    for (int step = 0; step < search.refine_steps && h > 1e-15; ++step) {
      bool improved = false;
      auto attempt = [&](const Eigen::VectorXd& direction) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd trial = (c + sign * h * direction).normalized();
          const double v = ratio(trial);
          if (v < value) {
            value = v;
            c = std::move(trial);
            improved = true;
            return;
          }
        }
      };
      for (Eigen::Index i = 0; i < n; ++i) attempt(Eigen::VectorXd::Unit(n, i));
      for (Eigen::Index i = 0; i < n; ++i) attempt(random_unit());
      if (!improved) h *= 0.5;
    }
    best = std::min(best, value);
  }
  return best;
}

OracleResult width_oracle(const ConvexBody& body, double q, std::int64_t n, int trials, std::uint64_t seed,
                          const SubspaceSearch& search) {
  const auto dim = static_cast<Eigen::Index>(body_dim(body));
  if (n < 1 || n > dim) throw std::invalid_argument("oracle needs 1 <= n <= N");
  if (trials < 0) throw std::invalid_argument("trials must be >= 0");

  std::vector<std::size_t> leading(static_cast<std::size_t>(dim));
  if (const auto* e = std::get_if<Ellipsoid>(&body)) {
    leading = e->permutation();
  } else {
    std::iota(leading.begin(), leading.end(), std::size_t{0});
  }
  Eigen::MatrixXd coordinate = Eigen::MatrixXd::Zero(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) coordinate(i, static_cast<Eigen::Index>(leading[i])) = 1.0;

  OracleResult result;
  result.seed = seed;
  result.trials = trials;
  result.value = width_on_subspace(body, coordinate, q, search);
  for (int t = 0; t < trials; ++t) {
    auto rng = derived_engine(seed, static_cast<std::uint64_t>(t) + 1);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd frame(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) frame(r, c) = normal(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame.topRows(n).transpose());
    const Eigen::MatrixXd q_thin = qr.householderQ() * Eigen::MatrixXd::Identity(dim, n);
    SubspaceSearch local = search;
    local.seed = search.seed ^ (static_cast<std::uint64_t>(t) * 0x9e3779b97f4a7c15ULL);
    const double v = width_on_subspace(body, q_thin.transpose(), q, local);
    if (v > result.value) {
      result.value = v;
      result.best_trial = t;
    }
  }
  return result;
}

}  // namespace nwidth
