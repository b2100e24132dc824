#pragma once

#include <cstddef>
#include <vector>

#include "dgsm/model.hpp"
#include "dgsm/qmc.hpp"
#include "dgsm/sampling.hpp"

namespace dgsm {

struct VarianceEstimate {
  double mean = 0.0;      // f0
  double variance = 0.0;  // D
  std::size_t count = 0;
  std::size_t evaluations_used = 0;
};

struct IndexEstimate {
  std::vector<double> first_order;  // S_i
  std::vector<double> total;        // S_i^tot
  double mean = 0.0;
  double variance = 0.0;            // D
  std::size_t count = 0;
  /// N(d+1) for the totals (f(A) and f(A_B^i)) plus N for the f(B) block
  /// used by the first-order estimator.
  std::size_t evaluations_used = 0;
  std::size_t total_path_evaluations = 0;
};

/// Mean and variance of f over the A block. Throws constant_model when the
/// variance is zero to within roundoff of the second moment.
VarianceEstimate estimate_variance(const BaseSample& base);
VarianceEstimate estimate_variance(const Model& model, const SamplePlan& plan,
                                   unsigned threads = 1);

/// Raises constant_model if D cannot serve as a denominator.
void require_nondegenerate(const VarianceEstimate& v);

/// Pick-freeze estimates:
///   S_i^tot = 1/(2N) sum_k (f(A_k) - f(A_B^i,k))^2 / D        (Jansen)
///   S_i     = 1/N    sum_k f(B_k) (f(A_B^i,k) - f(A_k)) / D    (Saltelli)
IndexEstimate estimate_indices(const BaseSample& base, const PickFreezeSample& pf,
                               const VarianceEstimate& v);
IndexEstimate estimate_indices(const Model& model, const SamplePlan& plan, unsigned threads = 1);

struct OracleOptions {
  std::size_t panels = 2;  // Gauss–Legendre panels per unit axis (breaks at 1/2)
  /// Maximum allowed change of D, S_i, S_i^tot between nodes_per_axis and
  /// nodes_per_axis / 2 (relative to D for D, absolute for indices).
  double richardson_tolerance = 1e-6;
  unsigned threads = 1;
};

/// Tensor-product quadrature of the ANOVA integrals. Returns the estimate
/// from nodes_per_axis nodes; `richardson_delta` receives the largest change
/// against the half-resolution rule.
IndexEstimate oracle_indices(const Model& model, std::size_t nodes_per_axis,
                             const OracleOptions& options = {}, double* richardson_delta = nullptr);

}  // namespace dgsm
