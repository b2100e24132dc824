#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgsm/dgsm.hpp"
#include "dgsm/model.hpp"
#include "dgsm/qmc.hpp"
#include "dgsm/sampling.hpp"
#include "dgsm/variance.hpp"

namespace dgsm {

/// Variables with nu_i < kInertFactor * D are treated as inert: LB1 is
/// defined as 0 and no bound divides by nu_i.
inline constexpr double kInertFactor = 1e-14;

struct LowerBoundOne {
  std::vector<double> value;
  std::vector<bool> inert;
};

/// LB1_i = (E[(f(1,z) - f(0,z)) (f(1,z) + f(0,z) - 2 f(x))])^2 / (4 nu_i D)
LowerBoundOne lower_bound_one(const BaseSample& base, const EndpointSample& ends,
                              std::span<const double> nu, double D);
LowerBoundOne lower_bound_one(const Model& model, const SamplePlan& plan, double D,
                              unsigned threads = 1);

/// Cached pieces for the gamma(m) family: A_i = E[f(1,z) - f(x)] and the
/// derivative samples that give w_i^(m+1).
class GammaEvaluator {
public:
  GammaEvaluator(const BaseSample& base, const EndpointSample& ends,
                 const DerivativeSample& derivs, double D);

  std::size_t dimension() const noexcept { return endpoint_mean_.size(); }
  double endpoint_difference(std::size_t i) const { return endpoint_mean_.at(i); }

  /// gamma_i(m) = (2m+1) [A_i - w_i^(m+1)]^2 / ((m+1)^2 D)
  double operator()(std::size_t i, double m) const;

private:
  const DerivativeSample* derivs_;
  std::vector<double> endpoint_mean_;
  double variance_;
};

std::vector<double> gamma(const GammaEvaluator& eval, double m);
std::vector<double> gamma(const Model& model, const SamplePlan& plan, double m,
                          unsigned threads = 1);

struct MStarOptions {
  double m_lo = 0.1;
  double m_hi = 100.0;
  std::size_t coarse_points = 64;
  double tolerance = 1e-3;
};

struct GammaMaximum {
  std::optional<double> m_star;  // absent when gamma is identically zero
  double lb2 = 0.0;
};

/// Coarse log-grid scan, then golden-section refinement around the best
/// grid point. Works for any callable gamma_i(m).
GammaMaximum maximize_gamma_curve(const std::function<double(double)>& gamma_i,
                                  const MStarOptions& options = {});
std::vector<GammaMaximum> maximize_gamma(const GammaEvaluator& eval,
                                         const MStarOptions& options = {});
std::vector<GammaMaximum> maximize_gamma(const Model& model, const SamplePlan& plan,
                                         const MStarOptions& options = {}, unsigned threads = 1);

std::vector<double> lb_star(std::span<const double> lb1, std::span<const double> lb2);

struct UpperBounds {
  std::vector<double> ub1;  // nu_i / (pi^2 D)
  std::vector<double> ub2;  // zeta_i / D
};
UpperBounds upper_bounds(const DgsmSet& dgsm, double D);

struct RangeBound {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds from c <= |df/dx_i| <= C. Uniform: c^2/(12D) .. C^2/(12D);
/// Normal: sigma_i^2 c^2 / D .. sigma_i^2 C^2 / D.
std::vector<RangeBound> range_bounds(std::span<const double> c, std::span<const double> C,
                                     double D, std::span<const Distribution> inputs);

/// Sample min / max of |df/dx_i|. Heuristic: the sample under-covers the
/// true extremes, so bounds derived from it are not guaranteed.
void empirical_derivative_range(const DerivativeSample& derivs, std::vector<double>& c,
                                std::vector<double>& C);

struct NormalBounds {
  std::vector<double> lower;  // sigma_i^2 w_i^2 / D
  std::vector<double> upper;  // sigma_i^2 nu_i / D
  std::vector<bool> inert;    // sigma_i == 0
};
NormalBounds normal_bounds(const DgsmSet& dgsm, std::span<const double> sigmas, double D);

struct EvaluationLedger {
  std::uint64_t n_f_lb = 0;  // f(x), gradients (d each), f(1,z), f(0,z): N(3d+1)
  std::uint64_t n_f_ub = 0;  // f(x), gradients: N(d+1)
  std::uint64_t n_f_s = 0;   // f(A), f(A_B^i): N(d+1)
  std::uint64_t n_f_first_order = 0;  // f(B) block for first-order indices: N
  std::uint64_t gradient_calls = 0;
  std::uint64_t fd_function_calls = 0;  // actual calls inside finite differences
  GradientMode gradient_mode = GradientMode::analytic;

  friend bool operator==(const EvaluationLedger&, const EvaluationLedger&) = default;
};

struct VariableReport {
  double s_first = 0.0;
  double s_total = 0.0;
  double morris_mu = 0.0;
  double nu = 0.0;
  std::optional<double> zeta;
  std::optional<double> lb1;
  std::optional<double> lb2;
  std::optional<double> m_star;
  std::optional<double> lb_star;
  std::optional<double> ub1;
  std::optional<double> ub2;
  std::optional<double> w_normal;
  std::optional<double> lb_normal;
  std::optional<double> ub_normal;
  std::optional<double> range_lower;
  std::optional<double> range_upper;
  bool inert = false;

  friend bool operator==(const VariableReport&, const VariableReport&) = default;
};

struct BoundsReport {
  std::string model;
  DistributionKind distribution = DistributionKind::uniform01;
  std::size_t dimension = 0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<VariableReport> variables;
  EvaluationLedger ledger;
  /// True when range bounds come from sample extremes of |df/dx_i|.
  bool range_heuristic = false;

  friend bool operator==(const BoundsReport&, const BoundsReport&) = default;
};

enum class RangeMode { none, empirical, supplied };

struct ReportOptions {
  MStarOptions m_star;
  unsigned threads = 1;
  RangeMode range = RangeMode::none;
  std::vector<double> range_c;  // used with RangeMode::supplied
  std::vector<double> range_C;
};

/// Runs the whole pipeline on one plan: variance and pick-freeze indices,
/// DGSM from one gradient pass, endpoint evaluations for LB1 / LB2, and all
/// bounds. Every denominator uses the single D estimated from f(A).
BoundsReport assemble_report(const Model& model, const SamplePlan& plan,
                             const ReportOptions& options = {});

}  // namespace dgsm
