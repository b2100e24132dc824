#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dgsm {

enum class DistributionKind { uniform01, normal };

std::string to_string(DistributionKind kind);

/// Marginal law of one input. Uniform01 carries no parameters; Normal needs sigma > 0.
struct Distribution {
  DistributionKind kind = DistributionKind::uniform01;
  double mean = 0.0;
  double sigma = 1.0;

  static Distribution uniform01() { return {}; }
  static Distribution normal(double mean, double sigma);

  /// Maps a unit-cube coordinate to the physical input value.
  double from_unit(double u) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

using Evaluator = std::function<double(std::span<const double>)>;
using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;

enum class GradientMode { analytic, finite_difference };

/// Scalar model of d independent inputs. Evaluator and gradient callbacks
/// must be pure and safe to call concurrently.
///
/// When no analytic gradient is supplied, gradient() uses central
/// differences with step h_i = max(1, |x_i|) * eps^(1/3). For Uniform01
/// coordinates within h_i of 0 or 1 the stencil switches to a one-sided
/// second-order formula so no evaluation leaves the cube.
class Model {
public:
  Model(std::string name, std::size_t dimension, Evaluator evaluator,
        std::optional<GradientFn> gradient = std::nullopt,
        std::vector<Distribution> inputs = {});

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<Distribution>& inputs() const noexcept { return inputs_; }
  bool has_analytic_gradient() const noexcept { return gradient_.has_value(); }
  GradientMode gradient_mode() const noexcept {
    return gradient_ ? GradientMode::analytic : GradientMode::finite_difference;
  }

  bool all_uniform() const noexcept;
  bool all_normal() const noexcept;

  /// Returns a copy with different input distributions (same callbacks).
  Model with_inputs(std::vector<Distribution> inputs) const;
  /// Returns a copy that ignores the analytic gradient.
  Model without_gradient() const;

  double evaluate(std::span<const double> point) const;
  std::vector<double> gradient(std::span<const double> point) const;
  /// Writes the gradient into out (size d). Returns the number of function
  /// evaluations spent (0 on the analytic path).
  std::size_t gradient_into(std::span<const double> point, std::span<double> out) const;

  static double fd_step(double x) noexcept;

private:
  void check_point(std::span<const double> point) const;
  double checked_eval(std::span<const double> point) const;

  std::string name_;
  std::size_t dimension_;
  Evaluator evaluator_;
  std::optional<GradientFn> gradient_;
  std::vector<Distribution> inputs_;
};

double evaluate(const Model& model, std::span<const double> point);
std::vector<double> gradient(const Model& model, std::span<const double> point);

}  // namespace dgsm
