#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nwidth/asymptotics.hpp"
#include "nwidth/harness/config.hpp"
#include "nwidth/harness/rates.hpp"
#include "nwidth/harness/reports.hpp"
#include "nwidth/harness/verify.hpp"

using namespace nwidth;
using namespace nwidth::harness;

namespace {

ExperimentConfig sweep_config(std::vector<double> alpha, double p, double q, std::int64_t n_min, std::int64_t n_max) {
  ExperimentConfig c;
  c.alpha = std::move(alpha);
  c.p = p;
  c.q = q;
  c.n_min = n_min;
  c.n_max = n_max;
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Parsing, ListsAndExponents) {
  EXPECT_EQ(parse_list("1,2.5"), (std::vector<double>{1.0, 2.5}));
  EXPECT_EQ(parse_exponent("inf"), kInfinity);
  EXPECT_EQ(parse_exponent("3"), 3.0);
  EXPECT_THROW(parse_list(""), ConfigError);
  EXPECT_THROW(parse_list("1,,2"), ConfigError);
  EXPECT_THROW(parse_exponent("two"), ConfigError);
}

TEST(Config, JsonRoundTripAndValidation) {
  auto c = sweep_config({2.0, 2.0}, 4.0, 1.0, 64, 1024);
  c.theta = 2.0;
  c.seed = 42;
  const auto back = ExperimentConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  EXPECT_EQ(back.alpha, c.alpha);
  EXPECT_EQ(back.theta, 2.0);
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.n_max, 1024);

  const auto inf = ExperimentConfig::from_json(nlohmann::json{{"q", "inf"}, {"p", 4}});
  EXPECT_EQ(inf.q, kInfinity);
  EXPECT_THROW(ExperimentConfig::from_json(nlohmann::json{{"bogus", 1}}), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_file("/nonexistent/config.json"), ConfigError);

  EXPECT_NO_THROW(sweep_config({1.0}, 2.0, 2.0, 8, 1024).validate(true));
  EXPECT_THROW(sweep_config({1.0}, 2.0, 2.0, 2, 1024).validate(true), ConfigError);
  EXPECT_THROW(sweep_config({1.0}, 2.0, 2.0, 64, 128).validate(true), ConfigError);
  EXPECT_THROW(sweep_config({1.0}, 0.5, 2.0, 64, 1024).validate(true), ConfigError);
  EXPECT_THROW(sweep_config({}, 2.0, 2.0, 64, 1024).validate(true), ConfigError);
}

TEST(Config, FileOverridesDefaults) {
  const auto path = std::filesystem::temp_directory_path() / "nwidth_harness_config.json";
  {
    std::ofstream out(path);
    out << R"({"alpha": [1.5], "p": 3, "n_min": 16})";
  }
  const auto c = ExperimentConfig::from_file(path.string());
  EXPECT_EQ(c.alpha, (std::vector<double>{1.5}));
  EXPECT_EQ(c.p, 3.0);
  EXPECT_EQ(c.n_min, 16);
  EXPECT_EQ(c.q, 2.0);
  std::filesystem::remove(path);
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4}, y{1, -1, -3, -5};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 3.0, 1e-14);
  EXPECT_THROW(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Rates, R1Sweep) {
  const auto s = run_rate_sweep(sweep_config({1.0}, 2.0, 2.0, 8, 1024));
  ASSERT_EQ(s.records.size(), 8u);
  EXPECT_NEAR(s.upper_fit.slope, -1.0, 0.05);
  EXPECT_NEAR(s.lower_fit.slope, -1.0, 0.05);
  EXPECT_TRUE(s.upper_pass());
  EXPECT_TRUE(s.lower_pass());
  for (const auto& r : s.records) {
    EXPECT_EQ(r.regime, "R1");
    EXPECT_GE(r.upper, 0.0);
    EXPECT_GE(r.lower, 0.0);
    EXPECT_FALSE(r.certificate.has_value());
    EXPECT_DOUBLE_EQ(r.theory_exponent, 1.0);
  }
}

TEST(Rates, R2Sweep) {
  const auto s = run_rate_sweep(sweep_config({2.0, 2.0}, 4.0, 1.0, 64, 16384));
  EXPECT_NEAR(s.upper_fit.slope, -1.25, 0.05);
  EXPECT_NEAR(s.lower_fit.slope, -1.25, 0.05);
  EXPECT_LE(s.upper_band, 20.0);
}

TEST(Rates, InapplicableNamesCondition) {
  try {
    run_rate_sweep(sweep_config({0.2, 0.2}, 4.0, 1.0, 64, 1024));
    FAIL() << "expected InapplicableError";
  } catch (const InapplicableError& e) {
    EXPECT_NE(std::string(e.what()).find("1 - A/p"), std::string::npos) << e.what();
  }
}

TEST(Rates, CsvSchemaAndDeterminism) {
  auto c = sweep_config({1.0}, 2.0, 2.0, 8, 64);
  c.seed = 3;
  const auto render = [&] {
    std::ostringstream out;
    write_rates_csv(out, run_rate_sweep(c), c, "test-tag");
    return out.str();
  };
  const std::string a = render();
  EXPECT_EQ(a, render());
  const auto lines = lines_of(a);
  ASSERT_GE(lines.size(), 6u);
  EXPECT_EQ(lines[0].rfind("# config=", 0), 0u);
  EXPECT_NE(lines[0].find("build=test-tag"), std::string::npos);
  const auto config_json = lines[0].substr(9, lines[0].find(" build=") - 9);
  EXPECT_EQ(ExperimentConfig::from_json(nlohmann::json::parse(config_json)).seed, 3u);
  EXPECT_EQ(lines[1], "n,k,regime,upper,lower,certificate,theory_exponent");
  EXPECT_EQ(lines[2].rfind("8,", 0), 0u);
  // Empty certificate field.
  EXPECT_NE(lines[2].find(",R1,"), std::string::npos);
  EXPECT_NE(lines[2].find(",,"), std::string::npos);

  std::ostringstream plot;
  write_plot_data(plot, run_rate_sweep(c));
  const auto plines = lines_of(plot.str());
  EXPECT_FALSE(plines.empty());
  EXPECT_EQ(plines.front().rfind("upper ", 0), 0u);
  EXPECT_FALSE(build_tag().empty());
}

TEST(Reports, Widths) {
  WidthsRequest r;
  r.rho = {1.0, 0.5, 0.25};
  r.p = 1.0;
  r.q = 2.0;
  r.n = 2;
  r.trials = 50;
  const auto j = widths_report(r);
  const double exact = j.at("exact").get<double>();
  EXPECT_NEAR(exact, 0.4472136, 1e-7);
  const double oracle = j.at("oracle").at("value").get<double>();
  EXPECT_LE(oracle, exact + 1e-12);
  EXPECT_GE(oracle, exact - 1e-6);

  r.q = 1.0;
  const auto same = widths_report(r);
  EXPECT_FALSE(same.contains("exact"));
  EXPECT_EQ(same.at("notes")[0].get<std::string>(), "exact formula inapplicable (requires p<q)");
  EXPECT_TRUE(same.contains("oracle"));

  r.q = 2.0;
  r.n = 1;
  EXPECT_NEAR(widths_report(r).at("exact").get<double>(), 1.0, 1e-14);

  r.p = kInfinity;
  r.n = 2;
  const auto box = widths_report(r);
  EXPECT_LE(box.at("oracle").at("value").get<double>(), box.at("box_l2_upper").get<double>() + 1e-9);

  r.n = 5;
  EXPECT_THROW(widths_report(r), ConfigError);
  r.n = 1;
  r.rho = {1.0, -1.0};
  EXPECT_THROW(widths_report(r), ConfigError);
}

TEST(Reports, Norms) {
  NormRequest r;
  r.function = "linear";
  r.alpha = {0.5};
  r.p = 1.0;
  const auto j = norm_report(r);
  EXPECT_NEAR(j.at("nikolskii").at("total").get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j.at("nikolskii").at("seminorms")[0].get<double>(), 0.2357, 1e-3);
  EXPECT_FALSE(j.contains("besov"));

  r.function = "bump";
  r.alpha = {1.0, 2.0};
  r.theta = 2.0;
  const auto b = norm_report(r);
  for (const char* key : {"nikolskii", "besov"}) {
    const double total = b.at(key).at("total").get<double>();
    EXPECT_GT(total, 0.0);
    EXPECT_TRUE(std::isfinite(total));
  }

  r.function = "zero";
  const auto z = norm_report(r);
  EXPECT_EQ(z.at("nikolskii").at("total").get<double>(), 0.0);
  EXPECT_EQ(z.at("besov").at("total").get<double>(), 0.0);

  r.function = "nonsense";
  EXPECT_THROW(norm_report(r), ConfigError);
}

TEST(Verify, SuitesPassAndFaultIsDetected) {
  for (const auto& name : suite_names()) {
    if (name == "all") continue;
    const auto results = run_suite(name);
    EXPECT_FALSE(results.empty()) << name;
    for (const auto& r : results) EXPECT_TRUE(r.passed) << r.suite << "/" << r.check << ": " << r.detail;
  }
  VerifyOptions faulty;
  faulty.projector_fault = 1e-3;
  const auto results = run_suite("projectors", faulty);
  bool semigroup_failed = false;
  for (const auto& r : results) {
    if (r.check == "semigroup" && !r.passed) semigroup_failed = true;
  }
  EXPECT_TRUE(semigroup_failed);
  std::ostringstream out;
  EXPECT_FALSE(write_verify_report(out, results));
  EXPECT_NE(out.str().find("\"summary\""), std::string::npos);
  EXPECT_THROW(run_suite("nonsense"), ConfigError);
}
