#include "dgsm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dgsm/error.hpp"

namespace dgsm {
namespace {

void require_positive_variance(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) {
    fail(ErrorCode::constant_model, "bounds need a positive output variance");
  }
}

}  // namespace

LowerBoundOne lower_bound_one(const BaseSample& base, const EndpointSample& ends,
                              std::span<const double> nu, double D) {
  require_positive_variance(D);
  const std::size_t d = base.dimension;
  require(nu.size() == d, ErrorCode::dimension_mismatch, "nu has wrong size");
  LowerBoundOne out{std::vector<double>(d, 0.0), std::vector<bool>(d, false)};
  const double n = static_cast<double>(base.count);
  for (std::size_t i = 0; i < d; ++i) {
    if (nu[i] < kInertFactor * D) {
      out.inert[i] = true;
      continue;
    }
    CompensatedSum sum;
    for (std::size_t k = 0; k < base.count; ++k) {
      const double one = ends.f_one(k, i);
      const double zero = ends.f_zero(k, i);
      sum.add((one - zero) * (one + zero - 2.0 * base.f_a[k]));
    }
    const double integral = sum.value() / n;
    out.value[i] = integral * integral / (4.0 * nu[i] * D);
  }
  return out;
}

LowerBoundOne lower_bound_one(const Model& model, const SamplePlan& plan, double D,
                              unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  const DerivativeSample derivs = sample_derivatives(model, base, threads);
  const DgsmSet set = estimate_dgsm(model, base, derivs, {});
  const EndpointSample ends = sample_endpoints(model, base, threads);
  return lower_bound_one(base, ends, set.nu, D);
}

GammaEvaluator::GammaEvaluator(const BaseSample& base, const EndpointSample& ends,
                               const DerivativeSample& derivs, double D)
    : derivs_(&derivs), endpoint_mean_(base.dimension), variance_(D) {
  require_positive_variance(D);
  const double n = static_cast<double>(base.count);
  for (std::size_t i = 0; i < base.dimension; ++i) {
    CompensatedSum sum;
    for (std::size_t k = 0; k < base.count; ++k) sum.add(ends.f_one(k, i) - base.f_a[k]);
    endpoint_mean_[i] = sum.value() / n;
  }
}

double GammaEvaluator::operator()(std::size_t i, double m) const {
  require(m > 0.0, ErrorCode::invalid_argument, "gamma(m) needs m > 0");
  const double diff = endpoint_mean_.at(i) - moment_weighted_derivative(*derivs_, i, m + 1.0);
  return (2.0 * m + 1.0) * diff * diff / ((m + 1.0) * (m + 1.0) * variance_);
}

std::vector<double> gamma(const GammaEvaluator& eval, double m) {
  std::vector<double> out(eval.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(i, m);
  return out;
}

std::vector<double> gamma(const Model& model, const SamplePlan& plan, double m, unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  const VarianceEstimate v = estimate_variance(base);
  require_nondegenerate(v);
  const DerivativeSample derivs = sample_derivatives(model, base, threads);
  const EndpointSample ends = sample_endpoints(model, base, threads);
  return gamma(GammaEvaluator(base, ends, derivs, v.variance), m);
}

GammaMaximum maximize_gamma_curve(const std::function<double(double)>& gamma_i,
                                  const MStarOptions& options) {
  require(options.m_lo > 0.0 && options.m_hi > options.m_lo, ErrorCode::invalid_argument,
          "m range must satisfy 0 < lo < hi");
  require(options.coarse_points >= 3, ErrorCode::invalid_argument,
          "m* search needs at least 3 coarse points");
  const std::vector<double> grid = log_spaced(options.m_lo, options.m_hi, options.coarse_points);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double g = gamma_i(grid[k]);
    if (g > best_value) {
      best_value = g;
      best = k;
    }
  }
  if (!(best_value > 0.0)) return {};

  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double m = golden_section_maximize(gamma_i, lo, hi, options.tolerance);
  const double refined = gamma_i(m);
  if (refined >= best_value) return {m, refined};
  return {grid[best], best_value};
}

std::vector<GammaMaximum> maximize_gamma(const GammaEvaluator& eval, const MStarOptions& options) {
  std::vector<GammaMaximum> out(eval.dimension());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = maximize_gamma_curve([&](double m) { return eval(i, m); }, options);
  }
  return out;
}

std::vector<GammaMaximum> maximize_gamma(const Model& model, const SamplePlan& plan,
                                         const MStarOptions& options, unsigned threads) {
  const BaseSample base = draw_base(model, plan, threads);
  const VarianceEstimate v = estimate_variance(base);
  require_nondegenerate(v);
  const DerivativeSample derivs = sample_derivatives(model, base, threads);
  const EndpointSample ends = sample_endpoints(model, base, threads);
  return maximize_gamma(GammaEvaluator(base, ends, derivs, v.variance), options);
}

std::vector<double> lb_star(std::span<const double> lb1, std::span<const double> lb2) {
  require(lb1.size() == lb2.size(), ErrorCode::dimension_mismatch,
          "LB1 and LB2 have different sizes");
  std::vector<double> out(lb1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(lb1[i], lb2[i]);
  return out;
}

UpperBounds upper_bounds(const DgsmSet& dgsm, double D) {
  require_positive_variance(D);
  require(dgsm.zeta.size() == dgsm.nu.size(), ErrorCode::unsupported_distribution,
          "UB2 needs the uniform-measure zeta");
  UpperBounds out;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (std::size_t i = 0; i < dgsm.nu.size(); ++i) {
    out.ub1.push_back(dgsm.nu[i] / (pi2 * D));
    out.ub2.push_back(dgsm.zeta[i] / D);
  }
  return out;
}

std::vector<RangeBound> range_bounds(std::span<const double> c, std::span<const double> C,
                                     double D, std::span<const Distribution> inputs) {
  require_positive_variance(D);
  require(c.size() == C.size() && c.size() == inputs.size(), ErrorCode::dimension_mismatch,
          "range bounds need c, C and inputs of equal size");
  std::vector<RangeBound> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    require(c[i] >= 0.0 && c[i] <= C[i], ErrorCode::invalid_argument,
            "range bounds need 0 <= c <= C for input " + std::to_string(i + 1));
    const double scale = inputs[i].kind == DistributionKind::uniform01
                             ? 1.0 / (12.0 * D)
                             : inputs[i].sigma * inputs[i].sigma / D;
    out[i] = {c[i] * c[i] * scale, C[i] * C[i] * scale};
  }
  return out;
}

void empirical_derivative_range(const DerivativeSample& derivs, std::vector<double>& c,
                                std::vector<double>& C) {
  const std::size_t d = derivs.gradient.cols();
  c.assign(d, std::numeric_limits<double>::infinity());
  C.assign(d, 0.0);
  for (std::size_t k = 0; k < derivs.gradient.rows(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      const double g = std::abs(derivs.gradient(k, i));
      c[i] = std::min(c[i], g);
      C[i] = std::max(C[i], g);
    }
  }
}

NormalBounds normal_bounds(const DgsmSet& dgsm, std::span<const double> sigmas, double D) {
  require_positive_variance(D);
  require(dgsm.w_normal.size() == dgsm.nu.size(), ErrorCode::unsupported_distribution,
          "normal bounds need DGSM estimated under normal inputs");
  require(sigmas.size() == dgsm.nu.size(), ErrorCode::dimension_mismatch,
          "sigmas have wrong size");
  NormalBounds out;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double s2 = sigmas[i] * sigmas[i];
    require(sigmas[i] >= 0.0, ErrorCode::invalid_argument, "sigma must be non-negative");
    out.lower.push_back(s2 * dgsm.w_normal[i] * dgsm.w_normal[i] / D);
    out.upper.push_back(s2 * dgsm.nu[i] / D);
    out.inert.push_back(sigmas[i] == 0.0);
  }
  return out;
}

BoundsReport assemble_report(const Model& model, const SamplePlan& plan,
                             const ReportOptions& options) {
  const bool uniform = model.all_uniform();
  const bool normal = model.all_normal();
  require(uniform || normal, ErrorCode::unsupported_distribution,
          "reports need all inputs Uniform01 or all Normal");
  const std::size_t d = model.dimension();
  const unsigned threads = options.threads;

  const BaseSample base = draw_base(model, plan, threads);
  const VarianceEstimate v = estimate_variance(base);
  require_nondegenerate(v);
  const double D = v.variance;

  const PickFreezeSample pf = sample_pick_freeze(model, base, threads);
  const IndexEstimate indices = estimate_indices(base, pf, v);

  const DerivativeSample derivs = sample_derivatives(model, base, threads);
  const std::vector<double> m_grid =
      log_spaced(options.m_star.m_lo, options.m_star.m_hi, options.m_star.coarse_points);
  const DgsmSet set = estimate_dgsm(model, base, derivs, uniform ? m_grid : std::vector<double>{});

  BoundsReport report;
  report.model = model.name();
  report.distribution = uniform ? DistributionKind::uniform01 : DistributionKind::normal;
  report.dimension = d;
  report.count = plan.count;
  report.seed = plan.seed;
  report.mean = v.mean;
  report.variance = D;
  report.variables.resize(d);

  for (std::size_t i = 0; i < d; ++i) {
    auto& var = report.variables[i];
    var.s_first = indices.first_order[i];
    var.s_total = indices.total[i];
    var.morris_mu = set.morris_mu[i];
    var.nu = set.nu[i];
    var.inert = set.nu[i] < kInertFactor * D;
  }

  EvaluationLedger& ledger = report.ledger;
  ledger.gradient_mode = derivs.mode;
  ledger.gradient_calls = derivs.gradient_calls;
  ledger.fd_function_calls = derivs.fd_function_calls;
  ledger.n_f_s = base.f_a.size() + pf.f_ab.rows() * pf.f_ab.cols();
  ledger.n_f_first_order = pf.f_b.size();
  ledger.n_f_ub = base.f_a.size() + derivs.gradient_calls * d;
  ledger.n_f_lb = ledger.n_f_ub;

  if (uniform) {
    const EndpointSample ends = sample_endpoints(model, base, threads);
    ledger.n_f_lb += ends.f_one.rows() * ends.f_one.cols() + ends.f_zero.rows() * ends.f_zero.cols();

    const LowerBoundOne lb1 = lower_bound_one(base, ends, set.nu, D);
    const GammaEvaluator gamma_eval(base, ends, derivs, D);
    const UpperBounds ub = upper_bounds(set, D);
    for (std::size_t i = 0; i < d; ++i) {
      auto& var = report.variables[i];
      var.zeta = set.zeta[i];
      var.lb1 = lb1.value[i];
      if (var.inert) {
        var.lb2 = 0.0;
      } else {
        const GammaMaximum best =
            maximize_gamma_curve([&](double m) { return gamma_eval(i, m); }, options.m_star);
        var.lb2 = best.lb2;
        var.m_star = best.m_star;
      }
      var.lb_star = std::max(*var.lb1, *var.lb2);
      var.ub1 = ub.ub1[i];
      var.ub2 = ub.ub2[i];
    }
  } else {
    std::vector<double> sigmas;
    for (const auto& in : model.inputs()) sigmas.push_back(in.sigma);
    const NormalBounds nb = normal_bounds(set, sigmas, D);
    for (std::size_t i = 0; i < d; ++i) {
      auto& var = report.variables[i];
      var.w_normal = set.w_normal[i];
      var.lb_normal = nb.lower[i];
      var.ub_normal = nb.upper[i];
    }
  }
  if (options.range != RangeMode::none) {
    std::vector<double> c = options.range_c;
    std::vector<double> C = options.range_C;
    if (options.range == RangeMode::empirical) {
      empirical_derivative_range(derivs, c, C);
      report.range_heuristic = true;
    }
    const auto ranges = range_bounds(c, C, D, model.inputs());
    for (std::size_t i = 0; i < d; ++i) {
      report.variables[i].range_lower = ranges[i].lower;
      report.variables[i].range_upper = ranges[i].upper;
    }
  }
  return report;
}

}  // namespace dgsm
