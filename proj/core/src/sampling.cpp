#include "dgsm/sampling.hpp"

#include <cmath>

#include "dgsm/error.hpp"

namespace dgsm {

SamplePlan make_plan(const Model& model, std::size_t count,
                     std::optional<std::vector<double>> shift, std::uint64_t seed) {
  SamplePlan plan{2 * model.dimension(), count, std::move(shift), seed};
  plan.validate();
  return plan;
}

BaseSample draw_base(const Model& model, const SamplePlan& plan, unsigned threads) {
  const std::size_t d = model.dimension();
  require(plan.dimension == 2 * d, ErrorCode::dimension_mismatch,
          "plan dimension " + std::to_string(plan.dimension) + " must be twice the model dimension " +
              std::to_string(d));
  const Matrix points = sobol_points(plan);
  const std::size_t n = plan.count;

  BaseSample base;
  base.dimension = d;
  base.count = n;
  base.unit_a = Matrix(n, d);
  base.unit_b = Matrix(n, d);
  base.a = Matrix(n, d);
  base.b = Matrix(n, d);
  const auto& inputs = model.inputs();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double ua = points(k, i);
      const double ub = points(k, d + i);
      base.unit_a(k, i) = ua;
      base.unit_b(k, i) = ub;
      base.a(k, i) = inputs[i].from_unit(ua);
      base.b(k, i) = inputs[i].from_unit(ub);
    }
  }

  base.f_a.resize(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) base.f_a[k] = model.evaluate(base.a.row(k));
  });
  return base;
}

PickFreezeSample sample_pick_freeze(const Model& model, const BaseSample& base, unsigned threads) {
  const std::size_t d = base.dimension;
  PickFreezeSample s;
  s.f_b.resize(base.count);
  s.f_ab = Matrix(base.count, d);
  parallel_for(base.count, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> probe(d);
    for (std::size_t k = begin; k < end; ++k) {
      s.f_b[k] = model.evaluate(base.b.row(k));
      const auto a = base.a.row(k);
      for (std::size_t i = 0; i < d; ++i) {
        std::copy(a.begin(), a.end(), probe.begin());
        probe[i] = base.b(k, i);
        s.f_ab(k, i) = model.evaluate(probe);
      }
    }
  });
  return s;
}

DerivativeSample sample_derivatives(const Model& model, const BaseSample& base, unsigned threads) {
  const std::size_t d = base.dimension;
  const std::size_t n = base.count;
  DerivativeSample s;
  s.mode = model.gradient_mode();
  s.gradient = Matrix(n, d);
  s.log_unit_a = Matrix(n, d);
  std::vector<std::size_t> fd_calls(n, 0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      fd_calls[k] = model.gradient_into(base.a.row(k), s.gradient.row(k));
      for (std::size_t i = 0; i < d; ++i) s.log_unit_a(k, i) = std::log(base.unit_a(k, i));
    }
  });
  s.gradient_calls = n;
  for (auto c : fd_calls) s.fd_function_calls += c;
  return s;
}

EndpointSample sample_endpoints(const Model& model, const BaseSample& base, unsigned threads) {
  require(model.all_uniform(), ErrorCode::unsupported_distribution,
          "f(0, z) and f(1, z) are defined for Uniform01 inputs only");
  const std::size_t d = base.dimension;
  EndpointSample s;
  s.f_one = Matrix(base.count, d);
  s.f_zero = Matrix(base.count, d);
  parallel_for(base.count, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> probe(d);
    for (std::size_t k = begin; k < end; ++k) {
      const auto a = base.a.row(k);
      for (std::size_t i = 0; i < d; ++i) {
        std::copy(a.begin(), a.end(), probe.begin());
        probe[i] = 1.0;
        s.f_one(k, i) = model.evaluate(probe);
        probe[i] = 0.0;
        s.f_zero(k, i) = model.evaluate(probe);
      }
    }
  });
  return s;
}

}  // namespace dgsm
