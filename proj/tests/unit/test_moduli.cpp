#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nwidth/moduli.hpp"
#include "nwidth/polyspace.hpp"

using namespace nwidth;

namespace {

const GridFunction kLinear(1, [](std::span<const double> x) { return x[0]; }, "x");

double omega_linear_closed_form(double t) {
  // (2t)^{-1} int_{-t}^{t} |xi| (1 - |xi|) dxi for t <= 1, 1/(6t) beyond.
  return t <= 1.0 ? t / 2.0 - t * t / 3.0 : 1.0 / (6.0 * t);
}

}  // namespace

TEST(ForwardDifference, Examples) {
  EXPECT_NEAR(*forward_difference(kLinear, 0, 1, 0.2, std::vector<double>{0.3}), 0.2, 1e-15);
  const GridFunction sq(1, [](std::span<const double> x) { return x[0] * x[0]; }, "x^2");
  EXPECT_NEAR(*forward_difference(sq, 0, 1, 0.1, std::vector<double>{0.5}), 0.11, 1e-15);
  EXPECT_NEAR(*forward_difference(sq, 0, 3, 0.1, std::vector<double>{0.2}), 0.0, 1e-14);
  EXPECT_NEAR(*forward_difference(sq, 0, 2, -0.1, std::vector<double>{0.5}), 0.02, 1e-14);
  EXPECT_FALSE(forward_difference(kLinear, 0, 1, 0.5, std::vector<double>{0.6}).has_value());
  EXPECT_FALSE(forward_difference(kLinear, 0, 1, -0.5, std::vector<double>{0.4}).has_value());
}

TEST(AveragedModulus, LinearClosedForm) {
  const ModulusSpec spec{0, 1, 1.0};
  EXPECT_NEAR(averaged_modulus(kLinear, spec, 0.5), 1.0 / 6.0, 1e-6);
  for (double t : {0.01, 0.1, 0.3, 0.9, 1.0, 2.0, 4.0}) {
    EXPECT_NEAR(averaged_modulus(kLinear, spec, t), omega_linear_closed_form(t), 1e-9) << "t=" << t;
  }
}

TEST(AveragedModulus, ProfileMatchesPointwise) {
  const ModulusSpec spec{0, 1, 1.0};
  const auto ts = TGrid{}.points();
  const auto profile = averaged_modulus_profile(kLinear, spec, ts);
  ASSERT_EQ(profile.size(), ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    EXPECT_NEAR(profile[i], omega_linear_closed_form(ts[i]), 1e-9 * std::max(1.0, profile[i]));
  }
  // Monotone while the closed form increases.
  for (std::size_t i = 1; i < ts.size() && ts[i] < 0.75; ++i) EXPECT_GT(profile[i], profile[i - 1]);
}

TEST(AveragedModulus, AnnihilatesLowDegree) {
  const GridFunction c(2, [](std::span<const double>) { return 3.0; }, "const");
  const GridFunction lin(2, [](std::span<const double> x) { return x[0] - 2.0 * x[1] + x[0] * x[1]; }, "bilinear");
  for (double t : {0.01, 0.25, 1.0, 3.0}) {
    EXPECT_EQ(averaged_modulus(c, ModulusSpec{0, 1, 2.0}, t), 0.0);
    EXPECT_LT(averaged_modulus(lin, ModulusSpec{0, 2, 1.0}, t), 1e-12);
    EXPECT_LT(averaged_modulus(lin, ModulusSpec{1, 2, 3.0}, t), 1e-12);
  }
}

TEST(AveragedModulus, SubadditiveAndBelowSupModulus) {
  const auto f = make_catalog_function("sin:1.5", 2);
  const auto g = make_catalog_function("abs-power:0.5", 2);
  const auto fg = f + g;
  for (double p : {1.0, 2.0, 3.0}) {
    for (std::size_t j : {0u, 1u}) {
      const ModulusSpec spec{j, 1, p};
      for (double t : {0.05, 0.3, 1.2}) {
        const double a = averaged_modulus(f, spec, t);
        const double b = averaged_modulus(g, spec, t);
        EXPECT_LE(averaged_modulus(fg, spec, t), a + b + 1e-8);
        EXPECT_LE(a, sampled_sup_modulus(f, spec, t, 65) + 1e-8);
      }
    }
  }
}

TEST(NikolskiiNorm, LinearGolden) {
  const auto n = nikolskii_norm(kLinear, std::vector<double>{0.5}, 1.0);
  ASSERT_EQ(n.seminorms.size(), 1u);
  EXPECT_NEAR(n.seminorms[0], 1.0 / (3.0 * std::sqrt(2.0)), 1e-3);
  EXPECT_NEAR(n.lp, 0.5, 1e-12);
  EXPECT_NEAR(n.total, 0.5, 1e-12);
}

TEST(NikolskiiNorm, ZeroAndHomogeneity) {
  const auto zero = make_catalog_function("zero", 2);
  const auto z = nikolskii_norm(zero, std::vector<double>{1.0, 2.0}, 2.0);
  EXPECT_EQ(z.total, 0.0);
  for (double s : z.seminorms) EXPECT_EQ(s, 0.0);

  const auto f = make_catalog_function("sin:1", 2);
  const std::vector<double> alpha{0.7, 1.5};
  const auto a = nikolskii_norm(f, alpha, 2.0);
  const auto b = nikolskii_norm(f.scaled(-3.0), alpha, 2.0);
  EXPECT_NEAR(b.total, 3.0 * a.total, 1e-10 * a.total);
  for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(b.seminorms[j], 3.0 * a.seminorms[j], 1e-10 * a.seminorms[j]);
  EXPECT_EQ(a.total, std::max({a.lp, a.seminorms[0], a.seminorms[1]}));
}

TEST(BesovNorm, LinearGolden) {
  const auto b = besov_norm(kLinear, std::vector<double>{0.5}, 1.0, 2.0);
  // Exact closed form including the t > 1 tail.
  EXPECT_NEAR(b.seminorms[0], 0.360041, 1e-3);
  EXPECT_NEAR(b.seminorms[0], 0.3505, 2e-2);
  EXPECT_NEAR(b.total, std::max(0.5, b.seminorms[0]), 1e-15);
}

TEST(BesovNorm, ZeroHomogeneityAndInfinityDelegation) {
  const auto zero = make_catalog_function("zero", 1);
  EXPECT_EQ(besov_norm(zero, std::vector<double>{1.0}, 2.0, 1.0).total, 0.0);
  const auto f = make_catalog_function("abs-power:0.75", 1);
  const std::vector<double> alpha{0.5};
  const auto a = besov_norm(f, alpha, 2.0, 3.0);
  const auto b = besov_norm(f.scaled(2.5), alpha, 2.0, 3.0);
  EXPECT_NEAR(b.total, 2.5 * a.total, 1e-10 * a.total);
  const auto h = nikolskii_norm(f, alpha, 2.0);
  const auto hb = besov_norm(f, alpha, 2.0, kInfinity);
  EXPECT_EQ(h.total, hb.total);
}

TEST(BesovNorm, GridRefinementIsStable) {
  const auto f = make_catalog_function("sin:2", 1);
  const std::vector<double> alpha{1.5};
  const TGrid coarse{};
  const double a = besov_norm(f, alpha, 2.0, 2.0, coarse).seminorms[0];
  const double b = besov_norm(f, alpha, 2.0, 2.0, coarse.refined()).seminorms[0];
  EXPECT_LT(std::abs(a - b), 1e-3 * b);
  const double ha = nikolskii_norm(f, alpha, 2.0, coarse).seminorms[0];
  const double hb = nikolskii_norm(f, alpha, 2.0, coarse.refined()).seminorms[0];
  EXPECT_LT(std::abs(ha - hb), 1e-3 * hb);
}

TEST(Embedding, NikolskiiBelowScaledBesov) {
  struct Params {
    std::vector<double> alpha;
    double p, theta;
  };
  const std::vector<Params> sets{{{0.5}, 1.0, 2.0}, {{1.5}, 2.0, 1.0}, {{0.8, 1.6}, 2.0, 3.0}};
  for (const auto& s : sets) {
    const double c1 = embedding_constant(s.alpha);
    for (const std::string name : {"linear", "abs-power:0.75", "sin:1", "bump"}) {
      const auto f = make_catalog_function(name, s.alpha.size());
      const double h = nikolskii_norm(f, s.alpha, s.p).total;
      const double b = besov_norm(f, s.alpha, s.p, s.theta).total;
      EXPECT_LE(h, c1 * b) << name;
    }
  }
  EXPECT_DOUBLE_EQ(embedding_constant(std::vector<double>{0.5, 2.0}), 16.0);
}

TEST(AffineTransfer, Examples) {
  const auto f = make_catalog_function("sin:1", 1);
  const auto id = affine_transfer(f, std::vector<double>{1.0}, std::vector<double>{0.0}, 2.0);
  EXPECT_EQ(id.factor, 1.0);
  EXPECT_EQ(id.pulled(std::vector<double>{0.3}), f(std::vector<double>{0.3}));

  const GridFunction one(1, [](std::span<const double>) { return 1.0; }, "one");
  const auto half = affine_transfer(one, std::vector<double>{0.5}, std::vector<double>{0.25}, 1.0);
  EXPECT_DOUBLE_EQ(half.factor, 2.0);

  QuadratureRule rule = QuadratureRule::adaptive_default();
  rule.rel_tol = 1e-12;
  const auto g = make_catalog_function("sin:1", 2);
  const std::vector<double> delta{0.5, 0.25}, x0{0.1, 0.6};
  for (double p : {1.0, 2.0, 4.0}) {
    const auto check = check_affine_transfer(g, delta, x0, p, rule);
    EXPECT_NEAR(check.pulled_norm, check.scaled_norm, 1e-10 * check.scaled_norm);
    const auto t = affine_transfer(g, delta, x0, p);
    const auto back = inverse_affine(t.pulled, delta, x0);
    const std::vector<double> y{0.3, 0.7};
    EXPECT_NEAR(back(y), g(y), 1e-14);
  }
  EXPECT_THROW(affine_transfer(one, std::vector<double>{0.0}, std::vector<double>{0.0}, 1.0), std::invalid_argument);
}

TEST(Catalog, NamesAndErrors) {
  EXPECT_EQ(make_catalog_function("zero", 2)(std::vector<double>{0.2, 0.3}), 0.0);
  EXPECT_NEAR(make_catalog_function("linear", 2)(std::vector<double>{0.2, 0.3}), 0.5, 1e-15);
  EXPECT_NEAR(make_catalog_function("abs-power:2", 1)(std::vector<double>{0.2}), 0.09, 1e-15);
  EXPECT_NEAR(make_catalog_function("sin:1", 1)(std::vector<double>{0.5}), 1.0, 1e-15);
  EXPECT_GT(make_catalog_function("bump", 1)(std::vector<double>{0.5}), 0.0);
  EXPECT_EQ(make_catalog_function("bump", 1)(std::vector<double>{0.0}), 0.0);
  EXPECT_THROW(make_catalog_function("nope", 1), std::invalid_argument);
  EXPECT_THROW(make_catalog_function("abs-power:x", 1), std::invalid_argument);
  EXPECT_THROW(make_catalog_function("piecewise-poly:/nonexistent.json", 1), std::invalid_argument);

  const auto path = std::filesystem::temp_directory_path() / "nwidth_catalog_poly.json";
  {
    std::ofstream out(path);
    out << to_json(PiecewisePoly(MultiIndex{1}, MultiIndex{0}, {1.0, 2.0})).dump();
  }
  const auto pp = make_catalog_function("piecewise-poly:" + path.string(), 1);
  EXPECT_NEAR(pp(std::vector<double>{0.7}), 2.0 * std::sqrt(2.0), 1e-14);
  std::filesystem::remove(path);
}

TEST(Options, Validation) {
  EXPECT_THROW((ModulusSpec{2, 1, 1.0}.validate(2)), std::invalid_argument);
  EXPECT_THROW((ModulusSpec{0, 0, 1.0}.validate(1)), std::invalid_argument);
  EXPECT_THROW((ModulusSpec{0, 1, 0.5}.validate(1)), std::invalid_argument);
  TGrid bad;
  bad.log2_ratio = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_THROW(averaged_modulus(kLinear, ModulusSpec{0, 1, 1.0}, 0.0), std::invalid_argument);
  const auto pts = TGrid{}.points();
  EXPECT_DOUBLE_EQ(pts.front(), std::exp2(-12.0));
  EXPECT_DOUBLE_EQ(pts.back(), 4.0);
  EXPECT_EQ(pts.size(), 29u);
}
