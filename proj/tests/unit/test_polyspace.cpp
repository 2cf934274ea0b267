#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nwidth/polyspace.hpp"
#include "nwidth/quadrature.hpp"

using namespace nwidth;

namespace {

PiecewisePoly random_poly(const MultiIndex& level, const MultiIndex& degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PiecewisePoly f(level, degree);
  for (double& c : f.coefficients()) c = u(rng);
  return f;
}

// x on the unit interval in the degree-1 basis of the single cell.
PiecewisePoly identity_poly() { return PiecewisePoly(MultiIndex{0}, MultiIndex{1}, {0.5, 0.5 / std::sqrt(3.0)}); }

}  // namespace

TEST(Quadrature, GaussRulesIntegratePolynomialsExactly) {
  for (int m = 1; m <= 20; ++m) {
    const auto& g = gauss_legendre(m);
    double w = 0.0;
    for (double v : g.weights) {
      EXPECT_GT(v, 0.0);
      w += v;
    }
    EXPECT_NEAR(w, 1.0, 1e-14);
    for (int deg = 0; deg < 2 * m; ++deg) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      EXPECT_NEAR(s, 1.0 / (deg + 1), 1e-14) << "m=" << m << " deg=" << deg;
    }
  }
}

TEST(Quadrature, TensorRuleWeightsSumToVolume) {
  const Box box{{0.25, 0.0}, {0.5, 0.125}};
  const auto tr = tensor_rule(box, 3, 2);
  double w = 0.0;
  for (double v : tr.weights) w += v;
  EXPECT_NEAR(w, box.volume(), 1e-16);
}

TEST(Quadrature, AdaptiveHandlesEndpointSingularity) {
  QuadratureRule rule = QuadratureRule::adaptive_default();
  rule.rel_tol = 1e-10;
  rule.max_level = 40;
  const double v = integrate(Box::unit(1), rule, [](std::span<const double> x) { return std::sqrt(x[0]); });
  EXPECT_NEAR(v, 2.0 / 3.0, 1e-9);
}

TEST(Quadrature, AdaptiveReportsFailure) {
  QuadratureRule rule = QuadratureRule::adaptive_default(2);
  rule.rel_tol = 1e-14;
  rule.max_level = 2;
  EXPECT_THROW(integrate(Box::unit(1), rule, [](std::span<const double> x) { return std::pow(x[0], -0.9); }),
               QuadratureError);
}

TEST(Legendre, Orthonormality) {
  const auto& g = gauss_legendre(10);
  std::vector<double> v(6);
  double gram[6][6] = {};
  for (int i = 0; i < 10; ++i) {
    orthonormal_legendre(5, g.nodes[i], v);
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) gram[a][b] += g.weights[i] * v[a] * v[b];
    }
  }
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) EXPECT_NEAR(gram[a][b], a == b ? 1.0 : 0.0, 1e-13);
  }
}

TEST(Evaluate, PiecewiseConstants) {
  const auto f = from_nodal_coordinates(std::vector<double>{2.0, 5.0}, MultiIndex{0}, std::vector<double>{1.0}, 1);
  EXPECT_NEAR(f(std::vector<double>{0.75}), 5.0, 1e-14);
  EXPECT_NEAR(f(std::vector<double>{0.25}), 2.0, 1e-14);
  EXPECT_NEAR(f(std::vector<double>{0.5}), 5.0, 1e-14);  // half-open cells
  EXPECT_NEAR(f(std::vector<double>{1.0}), 5.0, 1e-14);  // closed top face
  EXPECT_THROW(f(std::vector<double>{1.01}), std::domain_error);
}

TEST(Evaluate, ZeroAndRestrictedGlobalPolynomial) {
  const PiecewisePoly zero(MultiIndex{2, 1}, MultiIndex{1, 1});
  EXPECT_EQ(zero(std::vector<double>{0.3, 0.9}), 0.0);
  const auto x = identity_poly().refined(MultiIndex{1});
  EXPECT_NEAR(x(std::vector<double>{0.3}), 0.3, 1e-14);
  EXPECT_NEAR(x(std::vector<double>{0.8}), 0.8, 1e-14);
}

TEST(Norms, Examples) {
  const PiecewisePoly one(MultiIndex{0}, MultiIndex{0}, {1.0});
  for (double p : {1.0, 2.0, 3.5, kInfinity}) EXPECT_NEAR(lp_norm(one, p), 1.0, 1e-14);
  const auto x = identity_poly();
  EXPECT_NEAR(lp_norm(x, 2.0), 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(lp_norm(x, 1.0), 0.5, 1e-14);
  EXPECT_NEAR(lp_norm(x, kInfinity), 1.0, 1e-14);
  QuadratureRule rule = QuadratureRule::adaptive_default();
  const GridFunction g(1, [](std::span<const double> y) { return y[0]; }, "x");
  EXPECT_NEAR(lp_norm(g, 2.0, rule), 1.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(lp_norm(g, kInfinity, QuadratureRule{}), 1.0, 1e-14);
}

TEST(Norms, L2QuadratureMatchesCoefficients) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_poly(MultiIndex{2, 1}, MultiIndex{2, 1}, rng);
    double acc = 0.0;
    for (std::size_t c = 0; c < f.cell_count(); ++c) {
      const auto tr = tensor_rule(Box::of(f.cell(c)), 5);
      for (std::size_t m = 0; m < tr.size(); ++m) acc += tr.weights[m] * std::pow(f.evaluate_on_cell(c, tr.point(m)), 2);
    }
    EXPECT_NEAR(std::sqrt(acc), lp_norm(f, 2.0), 1e-12 * lp_norm(f, 2.0));
  }
}

TEST(Nodal, Examples) {
  const std::vector<double> alpha{1.0};
  const double r2 = std::sqrt(2.0);
  // 2x on [0,1/2) and 1 on [1/2,1].
  const PiecewisePoly f(MultiIndex{1}, MultiIndex{1}, {0.5 / r2, 0.5 / (std::sqrt(3.0) * r2), 1.0 / r2, 0.0});
  const auto v = nodal_coordinates(f, alpha, 1);
  ASSERT_EQ(v.size(), 4u);
  const double expect[] = {0.0, 1.0, 1.0, 1.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(v[i], expect[i], 1e-14);

  const PiecewisePoly zero(MultiIndex{1}, MultiIndex{1});
  for (double e : nodal_coordinates(zero, alpha, 1)) EXPECT_EQ(e, 0.0);

  const auto pc = from_nodal_coordinates(std::vector<double>{2.0, 5.0}, MultiIndex{0}, alpha, 1);
  const auto back = nodal_coordinates(pc, alpha, 1);
  EXPECT_NEAR(back[0], 2.0, 1e-14);
  EXPECT_NEAR(back[1], 5.0, 1e-14);

  const auto ones = from_nodal_coordinates(std::vector<double>(4, 1.0), MultiIndex{0}, alpha, 2);
  EXPECT_NEAR(ones(std::vector<double>{0.6}), 1.0, 1e-14);

  const auto lin = from_nodal_coordinates(std::vector<double>{0.0, 1.0}, MultiIndex{1}, alpha, 0);
  for (double x : {0.0, 0.3, 0.9}) EXPECT_NEAR(lin(std::vector<double>{x}), x, 1e-14);

  EXPECT_THROW(nodal_coordinates(f, alpha, 2), std::invalid_argument);
  EXPECT_THROW(from_nodal_coordinates(std::vector<double>{1.0}, MultiIndex{1}, alpha, 0), std::invalid_argument);
}

TEST(Nodal, RoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> alpha{1.0, 1.5};
  for (const MultiIndex degree : {MultiIndex{0, 0}, MultiIndex{1, 2}, MultiIndex{3, 1}}) {
    for (int k = 0; k <= 4; ++k) {
      const auto f = random_poly(dyadic_level(k, alpha), degree, rng);
      const auto g = from_nodal_coordinates(nodal_coordinates(f, alpha, k), degree, alpha, k);
      for (int i = 0; i < 100; ++i) {
        const std::vector<double> x{u(rng), u(rng)};
        ASSERT_NEAR(f(x), g(x), 1e-10);
      }
    }
  }
}

TEST(Nodal, NormEquivalenceRatioIsBounded) {
  std::mt19937_64 rng(9);
  const std::vector<double> alpha{1.0, 2.0};
  const MultiIndex degree{1, 1};
  const double a = harmonic_sum(alpha);
  for (double p : {1.0, 2.0, kInfinity}) {
    double lo = kInfinity, hi = 0.0;
    for (int k = 0; k <= 5; ++k) {
      for (int s = 0; s < 10; ++s) {
        const auto f = random_poly(dyadic_level(k, alpha), degree, rng);
        const double ratio = std::pow(2.0, -k * a * reciprocal(p)) * lp_vector_norm(nodal_coordinates(f, alpha, k), p) /
                             lp_norm(f, p);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    EXPECT_LE(hi / lo, 10.0) << "p=" << p;
  }
}

TEST(Inclusion, RefinementEvaluatesIdentically) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> alpha{1.0, 0.8};
  for (int k = 1; k <= 5; ++k) {
    const auto f = random_poly(dyadic_level(k - 1, alpha), MultiIndex{2, 1}, rng);
    const auto g = f.refined(dyadic_level(k, alpha));
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> x{u(rng), u(rng)};
      ASSERT_NEAR(f(x), g(x), 1e-10);
    }
  }
  EXPECT_THROW(PiecewisePoly(MultiIndex{2}, MultiIndex{0}).refined(MultiIndex{1}), std::invalid_argument);
}

TEST(VectorNorms, PowerInequality) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  const double ps[] = {1.0, 1.3, 2.0, 4.0, kInfinity};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 20;
    std::vector<double> x(n);
    for (double& v : x) v = g(rng);
    for (double p : ps) {
      for (double q : ps) {
        const double factor = std::pow(static_cast<double>(n), std::max(0.0, reciprocal(q) - reciprocal(p)));
        ASSERT_LE(lp_vector_norm(x, q), factor * lp_vector_norm(x, p) * (1.0 + 1e-12));
      }
    }
  }
}

TEST(Arithmetic, LinearCombinations) {
  std::mt19937_64 rng(17);
  const auto f = random_poly(MultiIndex{1, 1}, MultiIndex{1, 0}, rng);
  const auto g = random_poly(MultiIndex{1, 1}, MultiIndex{1, 0}, rng);
  const auto h = 2.0 * f - g;
  const std::vector<double> x{0.3, 0.7};
  EXPECT_NEAR(h(x), 2.0 * f(x) - g(x), 1e-14);
  EXPECT_THROW(f + PiecewisePoly(MultiIndex{0, 1}, MultiIndex{1, 0}), std::invalid_argument);
}

TEST(Serialization, JsonRoundTrip) {
  std::mt19937_64 rng(19);
  const auto f = random_poly(MultiIndex{1, 2}, MultiIndex{2, 1}, rng);
  const auto j = to_json(f);
  EXPECT_EQ(j.at("d").get<int>(), 2);
  const auto g = piecewise_poly_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(g.level(), f.level());
  EXPECT_EQ(g.degree(), f.degree());
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) EXPECT_EQ(f.coefficients()[i], g.coefficients()[i]);
  auto broken = j;
  broken["coefficients"].erase(0);
  EXPECT_THROW(piecewise_poly_from_json(broken), std::invalid_argument);
}

TEST(ProjectExact, ReproducesOnFinerGridAndAverages) {
  // Projection of x onto constants on two cells gives the cell means.
  const auto means = project_exact(identity_poly(), MultiIndex{1}, MultiIndex{0});
  EXPECT_NEAR(means(std::vector<double>{0.2}), 0.25, 1e-14);
  EXPECT_NEAR(means(std::vector<double>{0.7}), 0.75, 1e-14);
}
