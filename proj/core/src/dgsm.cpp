#include "dgsm/dgsm.hpp"

#include <cmath>

#include "dgsm/error.hpp"
#include "dgsm/quadrature.hpp"

namespace dgsm {
namespace {

void check_grid(std::span<const double> m_grid) {
  for (double m : m_grid) {
    require(std::isfinite(m) && m > 0.0, ErrorCode::invalid_argument,
            "m_grid values must be positive");
  }
}

}  // namespace

std::vector<double> default_m_grid() { return log_spaced(0.1, 100.0, 64); }

double moment_weighted_derivative(const DerivativeSample& derivs, std::size_t variable, double m) {
  const std::size_t n = derivs.gradient.rows();
  CompensatedSum sum;
  for (std::size_t k = 0; k < n; ++k) {
    sum.add(std::exp(m * derivs.log_unit_a(k, variable)) * derivs.gradient(k, variable));
  }
  return sum.value() / static_cast<double>(n);
}

DgsmSet estimate_dgsm(const Model& model, const BaseSample& base, const DerivativeSample& derivs,
                      std::span<const double> m_grid) {
  check_grid(m_grid);
  const bool uniform = model.all_uniform();
  const bool normal = model.all_normal();
  require(uniform || normal, ErrorCode::unsupported_distribution,
          "DGSM estimation needs all inputs Uniform01 or all Normal");

  const std::size_t d = base.dimension;
  const std::size_t n = base.count;
  const double inv_n = 1.0 / static_cast<double>(n);

  DgsmSet out;
  out.count = n;
  out.evaluations_used = derivs.gradient_calls * d;
  out.morris_mu.resize(d);
  out.nu.resize(d);
  if (uniform) {
    out.zeta.resize(d);
    out.m_grid.assign(m_grid.begin(), m_grid.end());
    out.w_curve = Matrix(d, m_grid.size());
  } else {
    out.w_normal.resize(d);
  }

  for (std::size_t i = 0; i < d; ++i) {
    CompensatedSum abs_sum, sq_sum, zeta_sum, mean_sum;
    for (std::size_t k = 0; k < n; ++k) {
      const double g = derivs.gradient(k, i);
      abs_sum.add(std::abs(g));
      sq_sum.add(g * g);
      if (uniform) {
        const double x = base.unit_a(k, i);
        zeta_sum.add(0.5 * x * (1.0 - x) * g * g);
      } else {
        mean_sum.add(g);
      }
    }
    out.morris_mu[i] = abs_sum.value() * inv_n;
    out.nu[i] = sq_sum.value() * inv_n;
    if (uniform) {
      out.zeta[i] = zeta_sum.value() * inv_n;
      for (std::size_t j = 0; j < m_grid.size(); ++j) {
        out.w_curve(i, j) = moment_weighted_derivative(derivs, i, m_grid[j]);
      }
    } else {
      out.w_normal[i] = mean_sum.value() * inv_n;
    }
  }
  return out;
}

DgsmSet estimate_dgsm(const Model& model, const SamplePlan& plan, std::span<const double> m_grid,
                      unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  const DerivativeSample derivs = sample_derivatives(model, base, threads);
  return estimate_dgsm(model, base, derivs, m_grid);
}

DgsmSet oracle_dgsm(const Model& model, std::size_t nodes_per_axis, std::size_t panels,
                    std::span<const double> m_grid) {
  check_grid(m_grid);
  const std::size_t d = model.dimension();
  require(d <= 4, ErrorCode::invalid_argument, "tensor quadrature oracle supports at most 4 inputs");
  const bool uniform = model.all_uniform();
  require(uniform || model.all_normal(), ErrorCode::unsupported_distribution,
          "DGSM oracle needs all inputs Uniform01 or all Normal");

  std::vector<QuadratureRule> rules;
  for (const auto& input : model.inputs()) rules.push_back(rule_for(input, nodes_per_axis, panels));
  const std::size_t m = rules.front().nodes.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= m;

  std::vector<CompensatedSum> abs_sum(d), sq_sum(d), zeta_sum(d), mean_sum(d);
  std::vector<std::vector<CompensatedSum>> w_sum(d, std::vector<CompensatedSum>(m_grid.size()));
  std::vector<double> x(d), g(d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    double w = 1.0;
    for (std::size_t i = d; i-- > 0;) {
      const std::size_t idx = rem % m;
      rem /= m;
      x[i] = rules[i].nodes[idx];
      w *= rules[i].weights[idx];
    }
    model.gradient_into(x, g);
    for (std::size_t i = 0; i < d; ++i) {
      abs_sum[i].add(w * std::abs(g[i]));
      sq_sum[i].add(w * g[i] * g[i]);
      if (uniform) {
        zeta_sum[i].add(w * 0.5 * x[i] * (1.0 - x[i]) * g[i] * g[i]);
        for (std::size_t j = 0; j < m_grid.size(); ++j) {
          w_sum[i][j].add(w * std::pow(x[i], m_grid[j]) * g[i]);
        }
      } else {
        mean_sum[i].add(w * g[i]);
      }
    }
  }

  DgsmSet out;
  out.count = total;
  out.evaluations_used = total * d;
  for (std::size_t i = 0; i < d; ++i) {
    out.morris_mu.push_back(abs_sum[i].value());
    out.nu.push_back(sq_sum[i].value());
  }
  if (uniform) {
    out.m_grid.assign(m_grid.begin(), m_grid.end());
    out.w_curve = Matrix(d, m_grid.size());
    for (std::size_t i = 0; i < d; ++i) {
      out.zeta.push_back(zeta_sum[i].value());
      for (std::size_t j = 0; j < m_grid.size(); ++j) out.w_curve(i, j) = w_sum[i][j].value();
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) out.w_normal.push_back(mean_sum[i].value());
  }
  return out;
}

}  // namespace dgsm
