// nwidth: rate sweeps, ellipsoid widths, invariant suites and norm reports.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nwidth/asymptotics.hpp"
#include "nwidth/harness/config.hpp"
#include "nwidth/harness/rates.hpp"
#include "nwidth/harness/reports.hpp"
#include "nwidth/harness/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvariantFailure = 1;
constexpr int kInvalid = 2;

using nwidth::harness::ConfigError;
using nwidth::harness::parse_exponent;
using nwidth::harness::parse_list;

struct CommonFlags {
  std::string config;
  std::string alpha;
  std::string p;
  std::string q;
  std::string theta;
  std::optional<std::int64_t> nmin;
  std::optional<std::int64_t> nmax;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
};

nwidth::harness::ExperimentConfig merged_config(const CommonFlags& f) {
  auto c = f.config.empty() ? nwidth::harness::ExperimentConfig{}
                            : nwidth::harness::ExperimentConfig::from_file(f.config);
  if (!f.alpha.empty()) c.alpha = parse_list(f.alpha);
  if (!f.p.empty()) c.p = parse_exponent(f.p);
  if (!f.q.empty()) c.q = parse_exponent(f.q);
  if (!f.theta.empty()) c.theta = parse_exponent(f.theta);
  if (f.nmin) c.n_min = *f.nmin;
  if (f.nmax) c.n_max = *f.nmax;
  if (f.trials) c.trials = *f.trials;
  if (f.seed) c.seed = *f.seed;
  if (!f.out.empty()) c.out = f.out;
  return c;
}

int cmd_rates(const CommonFlags& flags, bool certificate) {
  auto config = merged_config(flags);
  if (certificate) config.certificate = true;
  const auto sweep = nwidth::harness::run_rate_sweep(config);
  const std::string tag = nwidth::harness::build_tag();
  if (config.out.empty()) {
    nwidth::harness::write_rates_csv(std::cout, sweep, config, tag);
  } else {
    std::ofstream csv(config.out);
    if (!csv) throw ConfigError("cannot write '" + config.out + "'");
    nwidth::harness::write_rates_csv(csv, sweep, config, tag);
    std::ofstream plot(config.out + ".plot");
    nwidth::harness::write_plot_data(plot, sweep);
    std::cout << "wrote " << config.out << " and " << config.out << ".plot\n";
    std::cout << "upper slope " << sweep.upper_fit.slope << ", lower slope " << sweep.lower_fit.slope
              << ", theory " << -sweep.records.front().theory_exponent << "\n";
  }
  return sweep.upper_pass() && sweep.lower_pass() ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernstein-width rates for anisotropic Nikolskii/Besov classes"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--alpha", flags.alpha, "smoothness vector a1,a2,...");
    sub->add_option("--p", flags.p, "class exponent p");
    sub->add_option("--q", flags.q, "target exponent q (inf allowed)");
    sub->add_option("--theta", flags.theta, "Besov exponent theta (inf allowed)");
  };

  auto* rates = app.add_subcommand("rates", "dyadic sweep of upper/lower rate values with slope fits");
  rates->add_option("--config", flags.config, "JSON config file; flags override it");
  add_params(rates);
  rates->add_option("--nmin", flags.nmin, "first n of the sweep");
  rates->add_option("--nmax", flags.nmax, "last n of the sweep");
  rates->add_option("--trials", flags.trials, "oracle trials");
  rates->add_option("--seed", flags.seed, "random seed");
  rates->add_option("--out", flags.out, "CSV path (stdout when absent)");
  bool certificate = false;
  rates->add_flag("--certificate", certificate, "compute the bump certificate for n <= 32");

  std::string rho;
  std::int64_t width_n = 1;
  auto* widths = app.add_subcommand("widths", "Bernstein widths of a diagonal ellipsoid");
  widths->add_option("--rho", rho, "semi-axes r1,r2,...")->required();
  widths->add_option("--p", flags.p, "ball exponent (inf allowed)");
  widths->add_option("--q", flags.q, "target exponent (inf allowed)");
  widths->add_option("--n", width_n, "width index");
  widths->add_option("--trials", flags.trials, "oracle trials");
  widths->add_option("--seed", flags.seed, "random seed");

  std::string suite = "all";
  double fault = 0.0;
  auto* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("--suite", suite, "indexgrid|polyspace|projectors|moduli|fdwidths|asymptotics|all");
  verify->add_option("--seed", flags.seed, "random seed");
  verify->add_option("--fault", fault, "constant added to every level projection (sensitivity check)");

  std::string func;
  auto* norm = app.add_subcommand("norm", "Nikolskii/Besov-type norms of a catalog function");
  norm->add_option("--func", func, "zero|linear|abs-power:<g>|sin:<w>|bump|piecewise-poly:<file>")->required();
  add_params(norm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (rates->parsed()) return cmd_rates(flags, certificate);
    if (widths->parsed()) {
      nwidth::harness::WidthsRequest r;
      r.rho = parse_list(rho);
      if (!flags.p.empty()) r.p = parse_exponent(flags.p);
      if (!flags.q.empty()) r.q = parse_exponent(flags.q);
      r.n = width_n;
      if (flags.trials) r.trials = *flags.trials;
      if (flags.seed) r.seed = *flags.seed;
      std::cout << nwidth::harness::widths_report(r).dump(2) << "\n";
      return kOk;
    }
    if (verify->parsed()) {
      nwidth::harness::VerifyOptions o;
      if (flags.seed) o.seed = *flags.seed;
      o.projector_fault = fault;
      const auto results = nwidth::harness::run_suite(suite, o);
      return nwidth::harness::write_verify_report(std::cout, results) ? kOk : kInvariantFailure;
    }
    if (norm->parsed()) {
      nwidth::harness::NormRequest r;
      r.function = func;
      r.alpha = flags.alpha.empty() ? std::vector<double>{1.0} : parse_list(flags.alpha);
      if (!flags.p.empty()) r.p = parse_exponent(flags.p);
      if (!flags.theta.empty()) r.theta = parse_exponent(flags.theta);
      std::cout << nwidth::harness::norm_report(r).dump(2) << "\n";
      return kOk;
    }
  } catch (const nwidth::InapplicableError& e) {
    std::cerr << "inapplicable: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvariantFailure;
  }
  return kInvalid;
}
