#include "nwidth/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nwidth/asymptotics.hpp"
#include "nwidth/fdwidths.hpp"
#include "nwidth/harness/config.hpp"
#include "nwidth/harness/rates.hpp"
#include "nwidth/moduli.hpp"
#include "nwidth/polyspace.hpp"
#include "nwidth/projectors.hpp"

namespace nwidth::harness {

namespace {

using Rng = std::mt19937_64;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

PiecewisePoly random_poly(const MultiIndex& level, const MultiIndex& degree, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PiecewisePoly f(level, degree);
  for (double& c : f.coefficients()) c = u(rng);
  return f;
}

std::vector<std::vector<double>> random_points(std::size_t d, int count, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts(count, std::vector<double>(d));
  for (auto& p : pts) {
    for (double& v : p) v = u(rng);
  }
  return pts;
}

double sampled_distance(const PiecewisePoly& a, const PiecewisePoly& b, const std::vector<std::vector<double>>& pts) {
  double m = 0.0;
  for (const auto& x : pts) m = std::max(m, std::abs(a(x) - b(x)));
  return m;
}

double sampled_size(const PiecewisePoly& a, const std::vector<std::vector<double>>& pts) {
  double m = 0.0;
  for (const auto& x : pts) m = std::max(m, std::abs(a(x)));
  return m;
}

struct Recorder {
  std::string suite;
  std::vector<CheckResult>& out;

  void add(const std::string& check, bool passed, const std::string& detail) {
    out.push_back(CheckResult{suite, check, passed, detail});
  }
  void guarded(const std::string& check, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(check, false, std::string("exception: ") + e.what());
    }
  }
};

void suite_indexgrid(Recorder& r, const VerifyOptions& opt) {
  Rng rng(opt.seed);
  const std::vector<double> alpha{1.0, 2.5};
  r.guarded("level-monotone", [&] {
    bool ok = true;
    for (int k = 1; k <= 12; ++k) ok = ok && componentwise_le(dyadic_level(k - 1, alpha), dyadic_level(k, alpha));
    r.add("level-monotone", ok, "k=0..12");
  });
  r.guarded("tiling", [&] {
    const MultiIndex level{3, 2};
    double volume = 0.0;
    for (const auto& c : cells_at(level)) volume += c.volume();
    r.add("tiling", volume == 1.0, "volume=" + fmt(volume));
  });
  r.guarded("nesting", [&] {
    std::uniform_int_distribution<int> lev(0, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
      const MultiIndex fine{lev(rng), lev(rng)};
      const MultiIndex coarse{std::uniform_int_distribution<int>(0, fine[0])(rng),
                              std::uniform_int_distribution<int>(0, fine[1])(rng)};
      const std::vector<double> x{u(rng), u(rng)};
      ok = ok && cell_nesting(Cell(fine, locate_cell(fine, x)), Cell(coarse, locate_cell(coarse, x)));
    }
    r.add("nesting", ok, "200 random intersecting pairs");
  });
  r.guarded("dimension-sandwich", [&] {
    const MultiIndex degree{1, 1};
    const double a = harmonic_sum(alpha);
    double lo = kInfinity, hi = 0.0;
    for (int k = 0; k <= 12; ++k) {
      const double ratio = static_cast<double>(space_dimension(degree, alpha, k)) / std::exp2(k * a);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    const double bound = std::exp2(a) * static_cast<double>(degree.tensor_size());
    r.add("dimension-sandwich", hi / lo <= bound, "spread=" + fmt(hi / lo) + " bound=" + fmt(bound));
  });
}

void suite_polyspace(Recorder& r, const VerifyOptions& opt) {
  Rng rng(opt.seed + 1);
  const std::vector<double> alpha{1.0, 2.0};
  const MultiIndex degree{1, 2};
  r.guarded("l2-exact", [&] {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto f = random_poly(dyadic_level(3, alpha), degree, rng);
      double coeff = 0.0;
      for (double c : f.coefficients()) coeff += c * c;
      double acc = 0.0;
      for (std::size_t c = 0; c < f.cell_count(); ++c) {
        const TensorRule tr = tensor_rule(Box::of(f.cell(c)), degree.max() + 3);
        for (std::size_t m = 0; m < tr.size(); ++m) acc += tr.weights[m] * std::pow(f.evaluate_on_cell(c, tr.point(m)), 2);
      }
      worst = std::max(worst, std::abs(std::sqrt(acc) - std::sqrt(coeff)) / std::sqrt(coeff));
    }
    r.add("l2-exact", worst <= 1e-12, "max rel diff=" + fmt(worst));
  });
  r.guarded("nodal-roundtrip", [&] {
    double worst = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const auto f = random_poly(dyadic_level(k, alpha), degree, rng);
      const auto g = from_nodal_coordinates(nodal_coordinates(f, alpha, k), degree, alpha, k);
      worst = std::max(worst, sampled_distance(f, g, random_points(2, 200, rng)));
    }
    r.add("nodal-roundtrip", worst <= 1e-10, "max diff=" + fmt(worst));
  });
  r.guarded("inclusion", [&] {
    double worst = 0.0;
    for (int k = 1; k <= 4; ++k) {
      const auto f = random_poly(dyadic_level(k - 1, alpha), degree, rng);
      worst = std::max(worst, sampled_distance(f, f.refined(dyadic_level(k, alpha)), random_points(2, 1000, rng)));
    }
    r.add("inclusion", worst <= 1e-10, "max diff=" + fmt(worst));
  });
  r.guarded("vector-norm-inequality", [&] {
    std::normal_distribution<double> g;
    bool ok = true;
    const double ps[] = {1.0, 1.5, 2.0, 3.0, kInfinity};
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(17);
      for (double& v : x) v = g(rng);
      for (double p : ps) {
        for (double q : ps) {
          const double factor = std::pow(17.0, std::max(0.0, reciprocal(q) - reciprocal(p)));
          ok = ok && lp_vector_norm(x, q) <= factor * lp_vector_norm(x, p) * (1 + 1e-12);
        }
      }
    }
    r.add("vector-norm-inequality", ok, "50 random vectors, 25 exponent pairs");
  });
}

void suite_projectors(Recorder& r, const VerifyOptions& opt) {
  Rng rng(opt.seed + 2);
  ProjectorConfig cfg;
  cfg.alpha = {1.0, 1.5};
  cfg.degree = MultiIndex{1, 1};
  cfg.fault = opt.projector_fault;
  const int top = 4;
  const auto pts = random_points(2, 1000, rng);
  std::vector<PiecewisePoly> samples;
  for (int i = 0; i < 5; ++i) samples.push_back(random_poly(dyadic_level(top, cfg.alpha), cfg.degree, rng));

  r.guarded("reproduction", [&] {
    double worst = 0.0;
    for (int k = 0; k <= top; ++k) {
      const auto f = random_poly(dyadic_level(k, cfg.alpha), cfg.degree, rng);
      worst = std::max(worst, sampled_distance(project_level(f, cfg, k), f, pts));
    }
    r.add("reproduction", worst <= 1e-10, "max |E_k f - f|=" + fmt(worst));
  });
  r.guarded("semigroup", [&] {
    double worst = 0.0;
    for (const auto& f : samples) {
      for (int k = 0; k <= top; ++k) {
        const auto ek = project_level(f, cfg, k);
        for (int j = 0; j <= k; ++j) {
          const auto ej = project_level(f, cfg, j);
          worst = std::max(worst, sampled_distance(project_level(ek, cfg, j), ej, pts));
          worst = std::max(worst, sampled_distance(project_level(ej, cfg, k), ej, pts));
        }
      }
    }
    r.add("semigroup", worst <= 1e-10, "max deviation=" + fmt(worst));
  });
  r.guarded("increment-orthogonality", [&] {
    double worst = 0.0;
    for (const auto& f : samples) {
      for (int j = 0; j <= top; ++j) {
        const auto inc = level_increment(f, cfg, j);
        for (int i = 0; i <= top; ++i) {
          const auto twice = level_increment(inc, cfg, i);
          worst = std::max(worst, i == j ? sampled_distance(twice, inc, pts) : sampled_size(twice, pts));
        }
      }
    }
    r.add("increment-orthogonality", worst <= 1e-10, "max deviation=" + fmt(worst));
  });
  r.guarded("block-decomposition", [&] {
    double worst = 0.0;
    for (const auto& f : samples) {
      for (int k = 0; k < top; ++k) {
        for (int j = 1; k + j <= top; ++j) {
          const auto block = block_increment(f, cfg, k, j);
          const auto sum = project_level(f, cfg, k).refined(dyadic_level(k + j, cfg.alpha)) + block;
          worst = std::max(worst, sampled_distance(project_level(f, cfg, k + j), sum, pts));
          worst = std::max(worst, sampled_distance(block_increment(block, cfg, k, j), block, pts));
          worst = std::max(worst, sampled_size(project_level(block, cfg, k), pts));
        }
      }
    }
    r.add("block-decomposition", worst <= 1e-10, "max deviation=" + fmt(worst));
  });
}

void suite_moduli(Recorder& r, const VerifyOptions&) {
  const GridFunction linear = make_catalog_function("linear", 1);
  r.guarded("omega-golden", [&] {
    const double v = averaged_modulus(linear, ModulusSpec{0, 1, 1.0}, 0.5);
    r.add("omega-golden", std::abs(v - 1.0 / 6.0) <= 1e-6, "value=" + fmt(v));
  });
  r.guarded("nikolskii-golden", [&] {
    const std::vector<double> alpha{0.5};
    const auto n = nikolskii_norm(linear, alpha, 1.0);
    const double expect = 1.0 / (3.0 * std::sqrt(2.0));
    r.add("nikolskii-golden", std::abs(n.seminorms[0] - expect) <= 1e-3 && std::abs(n.total - 0.5) <= 1e-6,
          "seminorm=" + fmt(n.seminorms[0]) + " total=" + fmt(n.total));
  });
  r.guarded("embedding", [&] {
    bool ok = true;
    std::string detail;
    const std::vector<std::pair<std::string, std::vector<double>>> cases{
        {"linear", {0.5}}, {"sin:1", {1.5}}, {"abs-power:0.75", {0.5, 0.7}}};
    for (const auto& [name, alpha] : cases) {
      const auto f = make_catalog_function(name, alpha.size());
      const double h = nikolskii_norm(f, alpha, 2.0).total;
      const double b = besov_norm(f, alpha, 2.0, 2.0).total;
      ok = ok && h <= embedding_constant(alpha) * b;
      detail += name + ":" + fmt(h) + "<=" + fmt(embedding_constant(alpha) * b) + " ";
    }
    r.add("embedding", ok, detail);
  });
  r.guarded("subadditivity", [&] {
    const auto f = make_catalog_function("sin:2", 1);
    const auto g = make_catalog_function("abs-power:0.5", 1);
    const auto sum = f + g;
    bool ok = true;
    for (double t : {0.01, 0.1, 0.4, 1.0}) {
      const ModulusSpec s{0, 2, 1.5};
      ok = ok && averaged_modulus(sum, s, t) <= averaged_modulus(f, s, t) + averaged_modulus(g, s, t) + 1e-8;
    }
    r.add("subadditivity", ok, "t in {0.01,0.1,0.4,1}");
  });
}

void suite_fdwidths(Recorder& r, const VerifyOptions& opt) {
  r.guarded("exact-example", [&] {
    const std::vector<double> rho{1.0, 0.5, 0.25};
    const double v = width_ellipsoid_exact(rho, 1.0, 2.0, 2);
    r.add("exact-example", std::abs(v - 1.0 / std::sqrt(5.0)) <= 1e-12, "value=" + fmt(v));
  });
  r.guarded("oracle-bracket", [&] {
    const std::vector<double> rho{1.0, 0.5, 0.25};
    const double exact = width_ellipsoid_exact(rho, 1.0, 2.0, 2);
    const auto o = width_oracle(Ellipsoid(rho, 1.0), 2.0, 2, 200, opt.seed);
    r.add("oracle-bracket", o.value >= exact - 1e-6 && o.value <= exact + 1e-12,
          "oracle=" + fmt(o.value) + " exact=" + fmt(exact));
  });
  r.guarded("box-bound", [&] {
    Rng rng(opt.seed + 4);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    bool ok = true;
    for (int b = 0; b < 3; ++b) {
      std::vector<double> rho(5);
      for (double& v : rho) v = u(rng);
      std::sort(rho.rbegin(), rho.rend());
      const auto o = width_oracle(Ellipsoid(rho, kInfinity), 2.0, 2, 20, opt.seed + b, SubspaceSearch{512, 100, 7});
      ok = ok && o.value <= width_box_l2_upper(rho, 2) + 1e-9;
    }
    r.add("box-bound", ok, "3 random boxes, n=2");
  });
  r.guarded("intersection-gauge", [&] {
    Rng rng(opt.seed + 5);
    std::normal_distribution<double> g;
    const Ellipsoid a({1.0, 2.0, 0.5}, 2.0), b({0.7, 0.7, 3.0}, kInfinity);
    const ConvexBody both = EllipsoidIntersection{{a, b}};
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      const std::vector<double> x{g(rng), g(rng), g(rng)};
      ok = ok && minkowski(both, x) == std::max(a.gauge(x), b.gauge(x));
    }
    r.add("intersection-gauge", ok, "100 random vectors");
  });
}

void suite_asymptotics(Recorder& r, const VerifyOptions& opt) {
  r.guarded("classify", [&] {
    const auto r1 = classify(std::vector<double>{1.0, 1.0}, 2.0, 2.0);
    const auto r2 = classify(std::vector<double>{2.0, 2.0}, 4.0, 1.0);
    const auto r3 = classify(std::vector<double>{2.0, 2.0}, 4.0, 2.0);
    const bool ok = r1.label == RegimeLabel::R1 && std::abs(r1.exponent - 0.5) < 1e-12 &&
                    r2.label == RegimeLabel::R2 && std::abs(r2.exponent - 1.25) < 1e-12 &&
                    (r3.label == RegimeLabel::R2 || r3.label == RegimeLabel::R3) && std::abs(r3.exponent - 1.25) < 1e-12;
    r.add("classify", ok, to_string(r1.label) + "," + to_string(r2.label) + "," + to_string(r3.label));
  });
  r.guarded("rate-slopes", [&] {
    bool ok = true;
    std::string detail;
    const std::vector<std::tuple<std::vector<double>, double, double>> cases{
        {{1.0}, 2.0, 2.0}, {{2.0, 2.0}, 4.0, 1.0}, {{2.0, 2.0}, 4.0, 2.0}};
    for (const auto& [alpha, p, q] : cases) {
      std::vector<double> x, up, lo;
      for (std::int64_t n = 64; n <= 16384; n *= 2) {
        x.push_back(std::log2(static_cast<double>(n)));
        up.push_back(std::log2(upper_bound_value(alpha, p, q, n)));
        lo.push_back(std::log2(lower_bound_value(alpha, p, q, n)));
      }
      const double e = classify(alpha, p, q).exponent;
      const double su = fit_line(x, up).slope, sl = fit_line(x, lo).slope;
      ok = ok && std::abs(su + e) <= 0.05 && std::abs(sl + e) <= 0.05;
      detail += fmt(su) + "/" + fmt(sl) + " vs " + fmt(-e) + "; ";
    }
    r.add("rate-slopes", ok, detail);
  });
  r.guarded("bump-identity", [&] {
    Rng rng(opt.seed + 6);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (std::size_t d = 1; d <= 2; ++d) {
      const auto sys = bump_system(4, std::vector<double>(d, 1.0));
      for (double rr : {1.0, 2.0, kInfinity}) {
        for (int s = 0; s < 5; ++s) {
          std::vector<double> beta(sys.size());
          for (double& v : beta) v = g(rng);
          const auto pair = bump_norm_identity(sys, beta, rr);
          worst = std::max(worst, std::abs(pair.lhs - pair.rhs) / pair.rhs);
        }
      }
    }
    r.add("bump-identity", worst < 1e-6, "max rel err=" + fmt(worst));
  });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"indexgrid", "polyspace", "projectors", "moduli", "fdwidths", "asymptotics"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& name, const VerifyOptions& options) {
  std::vector<CheckResult> out;
  if (name == "all") {
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, options);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  Recorder r{name, out};
  if (name == "indexgrid") {
    suite_indexgrid(r, options);
  } else if (name == "polyspace") {
    suite_polyspace(r, options);
  } else if (name == "projectors") {
    suite_projectors(r, options);
  } else if (name == "moduli") {
    suite_moduli(r, options);
  } else if (name == "fdwidths") {
    suite_fdwidths(r, options);
  } else if (name == "asymptotics") {
    suite_asymptotics(r, options);
  } else {
    throw ConfigError("unknown suite '" + name + "' (known: indexgrid, polyspace, projectors, moduli, fdwidths, asymptotics, all)");
  }
  return out;
}

bool write_verify_report(std::ostream& out, const std::vector<CheckResult>& results) {
  std::size_t failed = 0;
  for (const auto& c : results) {
    if (!c.passed) ++failed;
    out << nlohmann::json{{"suite", c.suite}, {"check", c.check}, {"pass", c.passed}, {"detail", c.detail}}.dump()
        << "\n";
  }
  out << nlohmann::json{{"summary", {{"checks", results.size()}, {"failed", failed}}}}.dump() << "\n";
  return failed == 0;
}

}  // namespace nwidth::harness
