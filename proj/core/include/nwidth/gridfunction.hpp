#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>

namespace nwidth {

/// A deterministic real function on the closed unit cube [0,1]^dim.
///
/// Catalog functions are defined on all of R^dim, which the moduli rely on
/// only inside the cube; the affine transfer may evaluate them elsewhere.
class GridFunction {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  GridFunction(std::size_t dim, Evaluator evaluator, std::string label)
      : dim_(dim),
        evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
        label_(std::move(label)) {}

  double operator()(std::span<const double> x) const { return (*evaluator_)(x); }
  std::size_t dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  GridFunction scaled(double c) const {
    auto inner = evaluator_;
    return GridFunction(dim_, [inner, c](std::span<const double> x) { return c * (*inner)(x); },
                        label_ + "*" + std::to_string(c));
  }

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    auto fa = a.evaluator_;
    auto fb = b.evaluator_;
    return GridFunction(a.dim_, [fa, fb](std::span<const double> x) { return (*fa)(x) + (*fb)(x); },
                        a.label_ + "+" + b.label_);
  }

 private:
  std::size_t dim_;
  std::shared_ptr<const Evaluator> evaluator_;
  std::string label_;
};

}  // namespace nwidth
