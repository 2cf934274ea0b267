#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nwidth/asymptotics.hpp"

using namespace nwidth;

namespace {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct Instance {
  std::vector<double> alpha;
  double p, q;
  RegimeLabel label;
  double exponent;
};

const std::vector<Instance> kInstances{
    {{1.0}, 2.0, 2.0, RegimeLabel::R1, 1.0},
    {{2.0, 2.0}, 4.0, 1.0, RegimeLabel::R2, 1.25},
    {{2.0, 2.0}, 4.0, 2.0, RegimeLabel::R3, 1.25},
    {{1.0, 2.0}, 2.0, 4.0, RegimeLabel::R1, 1.0 / 1.5},
};

}  // namespace

TEST(Classify, Examples) {
  const auto r1 = classify(std::vector<double>{1.0, 1.0}, 2.0, 2.0);
  EXPECT_EQ(r1.label, RegimeLabel::R1);
  EXPECT_DOUBLE_EQ(r1.exponent, 0.5);
  const auto r2 = classify(std::vector<double>{2.0, 2.0}, 4.0, 1.0);
  EXPECT_EQ(r2.label, RegimeLabel::R2);
  EXPECT_DOUBLE_EQ(r2.exponent, 1.25);
  const auto r3 = classify(std::vector<double>{2.0, 2.0}, 4.0, 2.0);
  EXPECT_EQ(r3.label, RegimeLabel::R3);
  EXPECT_DOUBLE_EQ(r3.exponent, 1.25);
  const auto none = classify(std::vector<double>{0.2, 0.2}, 4.0, 1.0);
  EXPECT_EQ(none.label, RegimeLabel::Inapplicable);
  EXPECT_FALSE(none.violated().empty());
  EXPECT_EQ(to_string(RegimeLabel::R2), "R2");
  EXPECT_THROW(classify(std::vector<double>{1.0}, kInfinity, 2.0), std::invalid_argument);
}

TEST(Classify, ExponentMatchesCaseFormulas) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ua(0.5, 4.0), up(1.0, 8.0);
  for (int i = 0; i < 500; ++i) {
    const std::vector<double> alpha{ua(rng), ua(rng)};
    const double p = up(rng), q = up(rng);
    const double a = 1.0 / alpha[0] + 1.0 / alpha[1];
    const auto r = classify(alpha, p, q);
    switch (r.label) {
      case RegimeLabel::R1:
        EXPECT_DOUBLE_EQ(r.exponent, 1.0 / a);
        break;
      case RegimeLabel::R2:
        EXPECT_TRUE(q < 2.0 && 2.0 < p);
        EXPECT_NEAR(r.exponent, 1.0 / a - 1.0 / p + 0.5, 1e-14);
        break;
      case RegimeLabel::R3:
        EXPECT_TRUE(2.0 <= q && q < p);
        EXPECT_NEAR(r.exponent, 1.0 / a - 1.0 / p + 1.0 / q, 1e-14);
        break;
      case RegimeLabel::Inapplicable:
        break;
    }
  }
}

TEST(ChooseLevel, ExamplesAndMonotonicity) {
  const std::vector<double> alpha{1.0};
  // Degree l(alpha) - e = (1): R_k = 2^{k+1}.
  EXPECT_EQ(minimal_n(alpha), 4);
  EXPECT_EQ(choose_level(4, alpha).k, 0);
  EXPECT_EQ(choose_level(8, alpha).k, 1);
  EXPECT_EQ(choose_level(15, alpha).k, 1);
  EXPECT_EQ(choose_level(16, alpha).dimension, 8);
  EXPECT_THROW(choose_level(3, alpha), InapplicableError);
  // alpha = (1.5): degree (1), R_k = 2^{floor(k/1.5)+1} repeats; largest k wins.
  const std::vector<double> slow{1.5};
  EXPECT_EQ(choose_level(8, slow).k, 2);
  int previous = -1;
  for (std::int64_t n = minimal_n(slow); n < 5000; n += 7) {
    const auto c = choose_level(n, slow);
    EXPECT_GE(c.k, previous);
    EXPECT_LE(2 * c.dimension, n);
    previous = c.k;
  }
}

TEST(UpperBound, R1DyadicValues) {
  const std::vector<double> alpha{1.0};
  for (int m = 1; m <= 12; ++m) {
    const std::int64_t n = std::int64_t{1} << (m + 1);
    EXPECT_DOUBLE_EQ(upper_bound_value(alpha, 2.0, 2.0, n), std::exp2(-(m - 1)));
  }
  EXPECT_THROW(upper_bound_value(std::vector<double>{0.2, 0.2}, 4.0, 1.0, 1024), InapplicableError);
}

TEST(UpperBound, NonincreasingInN) {
  for (const auto& inst : kInstances) {
    double previous = kInfinity;
    for (std::int64_t n = minimal_n(inst.alpha); n <= 1 << 14; n = n * 3 / 2 + 1) {
      const double v = upper_bound_value(inst.alpha, inst.p, inst.q, n);
      EXPECT_GT(v, 0.0);
      EXPECT_LE(v, previous * (1.0 + 1e-12));
      previous = v;
    }
  }
}

TEST(LowerBound, Examples) {
  EXPECT_DOUBLE_EQ(lower_bound_value(std::vector<double>{1.0, 1.0}, 2.0, 2.0, 64), 0.125);
  EXPECT_NEAR(lower_bound_value(std::vector<double>{2.0, 2.0}, 4.0, 1.0, 16), std::pow(16.0, -1.25), 1e-15);
  EXPECT_THROW(lower_bound_value(std::vector<double>{0.2}, 4.0, kInfinity, 16), InapplicableError);
}

TEST(Rates, SlopesAndBands) {
  for (const auto& inst : kInstances) {
    const auto regime = classify(inst.alpha, inst.p, inst.q);
    ASSERT_EQ(regime.label, inst.label);
    ASSERT_NEAR(regime.exponent, inst.exponent, 1e-14);
    std::vector<double> x, up, lo;
    double band_lo = kInfinity, band_hi = 0.0, ratio_lo = kInfinity, ratio_hi = 0.0;
    for (int e = 6; e <= 14; ++e) {
      const auto n = std::int64_t{1} << e;
      const double u = upper_bound_value(inst.alpha, inst.p, inst.q, n);
      const double l = lower_bound_value(inst.alpha, inst.p, inst.q, n);
      x.push_back(std::log2(static_cast<double>(n)));
      up.push_back(std::log2(u));
      lo.push_back(std::log2(l));
      const double scaled = u * std::pow(static_cast<double>(n), inst.exponent);
      band_lo = std::min(band_lo, scaled);
      band_hi = std::max(band_hi, scaled);
      ratio_lo = std::min(ratio_lo, u / l);
      ratio_hi = std::max(ratio_hi, u / l);
    }
    EXPECT_NEAR(fitted_slope(x, up), -inst.exponent, 0.05) << to_string(inst.label);
    EXPECT_NEAR(fitted_slope(x, lo), -inst.exponent, 0.05) << to_string(inst.label);
    EXPECT_LE(band_hi / band_lo, 20.0);
    EXPECT_LE(ratio_hi / ratio_lo, 20.0);
  }
}

TEST(Bump, Values) {
  EXPECT_EQ(bump(std::vector<double>{0.0}), 0.0);
  EXPECT_EQ(bump(std::vector<double>{0.5, 1.0}), 0.0);
  EXPECT_EQ(bump(std::vector<double>{1.2}), 0.0);
  EXPECT_NEAR(bump(std::vector<double>{0.5, 0.5}), std::exp(-8.0), 1e-18);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    const std::vector<double> y{1.0 - x[0], 1.0 - x[1]};
    // 1 - x is rounded, and the exponent amplifies that by |log bump|.
    const double b = bump(x);
    if (b == 0.0) {
      EXPECT_EQ(bump(y), 0.0);
      continue;
    }
    EXPECT_NEAR(b, bump(y), 1e-14 * (1.0 + std::abs(std::log(b))) * b);
  }
  EXPECT_DOUBLE_EQ(bump_norm(2, kInfinity), std::exp(-8.0));
  EXPECT_NEAR(bump_norm(2, 2.0), bump_norm(1, 2.0) * bump_norm(1, 2.0), 1e-15);
}

TEST(BumpSystem, Examples) {
  const auto s = bump_system(4, std::vector<double>{1.0});
  EXPECT_EQ(s.k, 8);
  EXPECT_EQ(s.resolution, (MultiIndex{8}));
  EXPECT_EQ(s.size(), 8u);
  for (int n : {1, 3, 10}) {
    EXPECT_EQ(bump_system(n, std::vector<double>{1.0, 2.0}).size(), static_cast<std::size_t>(2 * n));
  }
  const auto fixed = bump_system(1, std::vector<double>{1.0}, 5);
  EXPECT_EQ(fixed.resolution, (MultiIndex{5}));
  EXPECT_THROW(bump_system(4, std::vector<double>{1.0}, 3), std::invalid_argument);
}

TEST(BumpSystem, DisjointSupports) {
  const auto s = bump_system(5, std::vector<double>{1.0, 1.5});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(s.size(), 0.0);
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    int active = 0;
    for (std::size_t b = 0; b < s.size(); ++b) {
      std::fill(e.begin(), e.end(), 0.0);
      e[b] = 1.0;
      if (s.evaluate(e, x) != 0.0) ++active;
    }
    EXPECT_LE(active, 1);
  }
}

TEST(BumpSystem, NormIdentity) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (const auto& alpha : {std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}}) {
    const auto s = bump_system(3, alpha);
    for (double r : {1.0, 2.0, kInfinity}) {
      std::vector<double> e1(s.size(), 0.0);
      e1[0] = 1.0;
      const auto one = bump_norm_identity(s, e1, r);
      EXPECT_NEAR(one.lhs, one.rhs, 1e-6 * one.rhs);
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> beta(s.size());
        for (double& b : beta) b = g(rng);
        const auto pair = bump_norm_identity(s, beta, r);
        EXPECT_NEAR(pair.lhs, pair.rhs, 1e-6 * pair.rhs) << "r=" << r;
      }
      const auto zero = bump_norm_identity(s, std::vector<double>(s.size(), 0.0), r);
      EXPECT_EQ(zero.lhs, 0.0);
      EXPECT_EQ(zero.rhs, 0.0);
    }
  }
}

TEST(BumpSystem, MembershipScaling) {
  // Largest s with ||s * bump_1||_B <= 1, against the resolution k (d = 1,
  // alpha = 1, so the lattice resolution equals k).
  const std::vector<double> alpha{1.0};
  const double p = 2.0, theta = 2.0;
  std::vector<double> logk, logs;
  for (int k : {4, 8, 16, 32}) {
    const auto s = bump_system(1, alpha, k);
    std::vector<double> e1(s.size(), 0.0);
    e1[0] = 1.0;
    const auto opts = s.modulus_options();
    const double norm = besov_norm(s.function(e1), alpha, p, theta, TGrid{}, opts).total;
    std::vector<double> e3 = e1;
    e3[0] = 3.0;
    EXPECT_NEAR(besov_norm(s.function(e3), alpha, p, theta, TGrid{}, opts).total, 3.0 * norm, 1e-9 * norm);
    const double smax = 1.0 / norm;
    logk.push_back(std::log2(static_cast<double>(k)));
    logs.push_back(std::log2(smax * std::pow(static_cast<double>(s.resolution[0]), -1.0 / p)));
  }
  EXPECT_NEAR(fitted_slope(logk, logs), -1.0, 0.2);
}

TEST(Certificate, PositiveAndGuarded) {
  CertificateOptions opts;
  opts.samples = 2;
  const double c = constructive_lower_certificate(std::vector<double>{1.0}, 2.0, 2.0, 2.0, 2, opts);
  EXPECT_GT(c, 0.0);
  EXPECT_THROW(constructive_lower_certificate(std::vector<double>{1.0}, 2.0, kInfinity, 2.0, 2), std::invalid_argument);
  EXPECT_THROW(constructive_lower_certificate(std::vector<double>{1.0, 1.0, 1.0}, 2.0, 2.0, 2.0, 2),
               std::invalid_argument);
  EXPECT_THROW(constructive_lower_certificate(std::vector<double>{1.0}, 2.0, 2.0, 2.0, 33), std::invalid_argument);
}
