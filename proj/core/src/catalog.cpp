#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "nwidth/asymptotics.hpp"
#include "nwidth/moduli.hpp"
#include "nwidth/polyspace.hpp"

namespace nwidth {

namespace {

double parse_parameter(const std::string& name, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("catalog function '" + name + "': bad parameter '" + text + "'");
  }
  return v;
}

}  // namespace

GridFunction make_catalog_function(const std::string& name, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("catalog functions need dimension >= 1");
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : name.substr(colon + 1);
  auto require_arg = [&](bool wanted) {
    if (wanted == arg.empty()) {
      throw std::invalid_argument("catalog function '" + name + (wanted ? "' needs a parameter" : "' takes no parameter"));
    }
  };

  if (head == "zero") {
    require_arg(false);
    return GridFunction(dim, [](std::span<const double>) { return 0.0; }, name);
  }
  if (head == "linear") {
    require_arg(false);
    return GridFunction(dim, [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    }, name);
  }
  if (head == "abs-power") {
    require_arg(true);
    const double g = parse_parameter(name, arg);
    if (!(g > 0.0)) throw std::invalid_argument("abs-power exponent must be positive");
    return GridFunction(dim, [g](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += std::pow(std::abs(v - 0.5), g);
      return s;
    }, name);
  }
  if (head == "sin") {
    require_arg(true);
    const double w = parse_parameter(name, arg);
    return GridFunction(dim, [w](std::span<const double> x) {
      double s = 1.0;
      for (double v : x) s *= std::sin(std::numbers::pi * w * v);
      return s;
    }, name);
  }
  if (head == "bump") {
    require_arg(false);
    return GridFunction(dim, [](std::span<const double> x) { return bump(x); }, name);
  }
  if (head == "piecewise-poly") {
    require_arg(true);
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open piecewise-poly file '" + arg + "'");
    const auto poly = std::make_shared<const PiecewisePoly>(piecewise_poly_from_json(nlohmann::json::parse(in)));
    if (poly->dim() != dim) {
      throw std::invalid_argument("piecewise-poly file has dimension " + std::to_string(poly->dim()) +
                                  ", expected " + std::to_string(dim));
    }
    return GridFunction(dim, [poly](std::span<const double> x) {
      // Points pushed slightly past the faces by roundoff are clamped.
      std::vector<double> y(x.begin(), x.end());
      for (double& v : y) v = std::clamp(v, 0.0, 1.0);
      return (*poly)(y);
    }, name);
  }
  throw std::invalid_argument("unknown catalog function '" + name +
                              "' (known: zero, linear, abs-power:<g>, sin:<w>, bump, piecewise-poly:<file>)");
}

}  // namespace nwidth
