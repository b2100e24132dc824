#include "dgsm/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dgsm/error.hpp"
#include "dgsm/numerics.hpp"

namespace dgsm {
namespace {

std::string format_point(std::span<const double> point) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (k) os << ", ";
    os << point[k];
  }
  os << ')';
  return os.str();
}

}  // namespace

std::string to_string(DistributionKind kind) {
  return kind == DistributionKind::uniform01 ? "uniform01" : "normal";
}

Distribution Distribution::normal(double mean, double sigma) {
  require(std::isfinite(mean), ErrorCode::invalid_argument, "normal mean must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, ErrorCode::invalid_argument,
          "normal sigma must be positive");
  return {DistributionKind::normal, mean, sigma};
}

double Distribution::from_unit(double u) const {
  if (kind == DistributionKind::uniform01) return u;
  // Keep the inverse CDF finite for coordinates that round to 0 or 1.
  constexpr double tiny = 0x1p-53;
  const double p = std::min(std::max(u, tiny), 1.0 - tiny);
  return mean + sigma * inverse_normal_cdf(p);
}

Model::Model(std::string name, std::size_t dimension, Evaluator evaluator,
             std::optional<GradientFn> gradient, std::vector<Distribution> inputs)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluator_(std::move(evaluator)),
      gradient_(std::move(gradient)),
      inputs_(std::move(inputs)) {
  require(dimension_ > 0, ErrorCode::invalid_argument, "model dimension must be positive");
  require(static_cast<bool>(evaluator_), ErrorCode::invalid_argument, "model needs an evaluator");
  if (gradient_) {
    require(static_cast<bool>(*gradient_), ErrorCode::invalid_argument, "empty gradient callback");
  }
  if (inputs_.empty()) inputs_.assign(dimension_, Distribution::uniform01());
  require(inputs_.size() == dimension_, ErrorCode::dimension_mismatch,
          "model '" + name_ + "' has " + std::to_string(dimension_) + " inputs but " +
              std::to_string(inputs_.size()) + " distributions");
  for (const auto& in : inputs_) {
    if (in.kind == DistributionKind::normal) {
      require(std::isfinite(in.sigma) && in.sigma > 0.0, ErrorCode::invalid_argument,
              "normal sigma must be positive");
    }
  }
}

bool Model::all_uniform() const noexcept {
  for (const auto& in : inputs_) {
    if (in.kind != DistributionKind::uniform01) return false;
  }
  return true;
}

bool Model::all_normal() const noexcept {
  for (const auto& in : inputs_) {
    if (in.kind != DistributionKind::normal) return false;
  }
  return true;
}

Model Model::with_inputs(std::vector<Distribution> inputs) const {
  return Model(name_, dimension_, evaluator_, gradient_, std::move(inputs));
}

Model Model::without_gradient() const {
  return Model(name_, dimension_, evaluator_, std::nullopt, inputs_);
}

void Model::check_point(std::span<const double> point) const {
  require(point.size() == dimension_, ErrorCode::dimension_mismatch,
          "model '" + name_ + "' expects " + std::to_string(dimension_) + " coordinates, got " +
              std::to_string(point.size()));
  for (std::size_t k = 0; k < dimension_; ++k) {
    const double x = point[k];
    const bool ok = inputs_[k].kind == DistributionKind::uniform01 ? (x >= 0.0 && x <= 1.0)
                                                                   : std::isfinite(x);
    if (!ok) {
      fail(ErrorCode::domain_error, "coordinate " + std::to_string(k + 1) + " of " +
                                        format_point(point) + " is outside the domain");
    }
  }
}

double Model::checked_eval(std::span<const double> point) const {
  const double y = evaluator_(point);
  if (!std::isfinite(y)) {
    fail(ErrorCode::non_finite,
         "model '" + name_ + "' returned " + std::to_string(y) + " at " + format_point(point));
  }
  return y;
}

double Model::evaluate(std::span<const double> point) const {
  check_point(point);
  return checked_eval(point);
}

double Model::fd_step(double x) noexcept {
  static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
  return std::max(1.0, std::abs(x)) * cbrt_eps;
}

std::size_t Model::gradient_into(std::span<const double> point, std::span<double> out) const {
  check_point(point);
  require(out.size() == dimension_, ErrorCode::dimension_mismatch, "gradient buffer has wrong size");

  std::size_t spent = 0;
  if (gradient_) {
    (*gradient_)(point, out);
  } else {
    std::vector<double> probe(point.begin(), point.end());
    std::optional<double> f_center;
    auto center = [&] {
      if (!f_center) {
        f_center = checked_eval(point);
        ++spent;
      }
      return *f_center;
    };
    for (std::size_t i = 0; i < dimension_; ++i) {
      const double x = point[i];
      const double h = fd_step(x);
      auto at = [&](double value) {
        probe[i] = value;
        const double y = checked_eval(probe);
        ++spent;
        return y;
      };
      const bool bounded = inputs_[i].kind == DistributionKind::uniform01;
      if (bounded && x < h) {
        out[i] = (-3.0 * center() + 4.0 * at(x + h) - at(x + 2.0 * h)) / (2.0 * h);
      } else if (bounded && x > 1.0 - h) {
        out[i] = (3.0 * center() - 4.0 * at(x - h) + at(x - 2.0 * h)) / (2.0 * h);
      } else {
        out[i] = (at(x + h) - at(x - h)) / (2.0 * h);
      }
      probe[i] = x;
    }
  }
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (!std::isfinite(out[i])) {
      fail(ErrorCode::non_finite, "derivative " + std::to_string(i + 1) + " of model '" + name_ +
                                      "' is non-finite at " + format_point(point));
    }
  }
  return spent;
}

std::vector<double> Model::gradient(std::span<const double> point) const {
  std::vector<double> out(dimension_);
  gradient_into(point, out);
  return out;
}

double evaluate(const Model& model, std::span<const double> point) {
  return model.evaluate(point);
}

std::vector<double> gradient(const Model& model, std::span<const double> point) {
  return model.gradient(point);
}

}  // namespace dgsm
