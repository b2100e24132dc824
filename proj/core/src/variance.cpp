#include "dgsm/variance.hpp"

#include <algorithm>
#include <cmath>

#include "dgsm/error.hpp"
#include "dgsm/numerics.hpp"
#include "dgsm/quadrature.hpp"

namespace dgsm {

VarianceEstimate estimate_variance(const BaseSample& base) {
  const std::span<const double> f = base.f_a;
  const double mean = compensated_mean(f);
  CompensatedSum centered;
  for (double y : f) centered.add((y - mean) * (y - mean));
  const double n = static_cast<double>(f.size());
  VarianceEstimate v{mean, centered.value() / n, f.size(), f.size()};
  return v;
}

void require_nondegenerate(const VarianceEstimate& v) {
  const double scale = std::max(v.mean * v.mean, 1e-300);
  if (!(v.variance > 1e-14 * scale)) {
    fail(ErrorCode::constant_model,
         "output variance " + std::to_string(v.variance) +
             " is zero to working precision; bounds need D > 0");
  }
}

VarianceEstimate estimate_variance(const Model& model, const SamplePlan& plan, unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  VarianceEstimate v = estimate_variance(base);
  require_nondegenerate(v);
  return v;
}

IndexEstimate estimate_indices(const BaseSample& base, const PickFreezeSample& pf,
                               const VarianceEstimate& v) {
  require_nondegenerate(v);
  const std::size_t d = base.dimension;
  const std::size_t n = base.count;
  IndexEstimate out;
  out.first_order.resize(d);
  out.total.resize(d);
  out.mean = v.mean;
  out.variance = v.variance;
  out.count = n;
  out.total_path_evaluations = n * (d + 1);
  out.evaluations_used = n * (d + 2);
  for (std::size_t i = 0; i < d; ++i) {
    CompensatedSum total, first;
    for (std::size_t k = 0; k < n; ++k) {
      const double diff = base.f_a[k] - pf.f_ab(k, i);
      total.add(diff * diff);
      first.add(pf.f_b[k] * (pf.f_ab(k, i) - base.f_a[k]));
    }
    out.total[i] = total.value() / (2.0 * static_cast<double>(n) * v.variance);
    out.first_order[i] = first.value() / (static_cast<double>(n) * v.variance);
  }
  return out;
}

IndexEstimate estimate_indices(const Model& model, const SamplePlan& plan, unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  const VarianceEstimate v = estimate_variance(base);
  require_nondegenerate(v);
  const PickFreezeSample pf = sample_pick_freeze(model, base, threads);
  return estimate_indices(base, pf, v);
}

namespace {

// One oracle pass at a fixed resolution.
IndexEstimate tensor_oracle(const Model& model, std::size_t nodes, const OracleOptions& options) {
  const std::size_t d = model.dimension();
  std::vector<QuadratureRule> rules;
  rules.reserve(d);
  for (const auto& input : model.inputs()) rules.push_back(rule_for(input, nodes, options.panels));
  const std::size_t m = rules.front().nodes.size();

  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= m;

  // values[flat], flat = sum_i idx_i * m^(d-1-i)
  std::vector<double> values(total);
  std::vector<double> weight(total);
  parallel_for(total, options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(d);
    for (std::size_t flat = begin; flat < end; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (std::size_t i = d; i-- > 0;) {
        const std::size_t idx = rem % m;
        rem /= m;
        x[i] = rules[i].nodes[idx];
        w *= rules[i].weights[idx];
      }
      values[flat] = model.evaluate(x);
      weight[flat] = w;
    }
  });

  CompensatedSum s0;
  for (std::size_t f = 0; f < total; ++f) s0.add(weight[f] * values[f]);
  const double f0 = s0.value();
  CompensatedSum s2;
  for (std::size_t f = 0; f < total; ++f) s2.add(weight[f] * (values[f] - f0) * (values[f] - f0));
  const double D = s2.value();

  IndexEstimate out;
  out.mean = f0;
  out.variance = D;
  out.count = total;
  out.evaluations_used = total;
  out.total_path_evaluations = total;
  out.first_order.assign(d, 0.0);
  out.total.assign(d, 0.0);
  if (!(D > 1e-14 * std::max(f0 * f0, 1e-300))) {
    fail(ErrorCode::constant_model, "oracle variance is zero for model '" + model.name() + "'");
  }

  for (std::size_t i = 0; i < d; ++i) {
    std::size_t stride = 1;
    for (std::size_t j = i + 1; j < d; ++j) stride *= m;
    const std::size_t outer = total / (stride * m);

    // Total: for each z (all axes but i), u_i = f - int f dx_i.
    CompensatedSum dtot;
    // First order: E[f | x_i = node] accumulated per node of axis i.
    std::vector<CompensatedSum> conditional(m);
    for (std::size_t hi = 0; hi < outer; ++hi) {
      for (std::size_t lo = 0; lo < stride; ++lo) {
        const std::size_t base_index = hi * stride * m + lo;
        double inner = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          const std::size_t f = base_index + r * stride;
          inner += rules[i].weights[r] * values[f];
        }
        // Weight of z alone: the product of weights on the other axes.
        const double zw = weight[base_index] / rules[i].weights[0];
        for (std::size_t r = 0; r < m; ++r) {
          const std::size_t f = base_index + r * stride;
          const double u = values[f] - inner;
          dtot.add(zw * rules[i].weights[r] * u * u);
          conditional[r].add(zw * values[f]);
        }
      }
    }
    CompensatedSum dfirst;
    for (std::size_t r = 0; r < m; ++r) {
      const double c = conditional[r].value() - f0;
      dfirst.add(rules[i].weights[r] * c * c);
    }
    out.total[i] = dtot.value() / D;
    out.first_order[i] = dfirst.value() / D;
  }
  return out;
}

}  // namespace

IndexEstimate oracle_indices(const Model& model, std::size_t nodes_per_axis,
                             const OracleOptions& options, double* richardson_delta) {
  require(model.dimension() <= 4, ErrorCode::invalid_argument,
          "tensor quadrature oracle supports at most 4 inputs");
  require(nodes_per_axis >= 2, ErrorCode::invalid_argument, "oracle needs at least 2 nodes per axis");

  IndexEstimate fine = tensor_oracle(model, nodes_per_axis, options);
  const IndexEstimate coarse = tensor_oracle(model, (nodes_per_axis + 1) / 2, options);

  double delta = std::abs(fine.variance - coarse.variance) / fine.variance;
  for (std::size_t i = 0; i < model.dimension(); ++i) {
    delta = std::max(delta, std::abs(fine.total[i] - coarse.total[i]));
    delta = std::max(delta, std::abs(fine.first_order[i] - coarse.first_order[i]));
  }
  if (richardson_delta) *richardson_delta = delta;
  if (delta > options.richardson_tolerance) {
    fail(ErrorCode::accuracy_unattainable,
         "oracle for '" + model.name() + "' changed by " + std::to_string(delta) + " between " +
             std::to_string((nodes_per_axis + 1) / 2) + " and " + std::to_string(nodes_per_axis) +
             " nodes per axis");
  }
  return fine;
}

}  // namespace dgsm
