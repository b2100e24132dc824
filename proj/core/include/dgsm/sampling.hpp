#pragma once

#include <cstddef>
#include <vector>

#include "dgsm/model.hpp"
#include "dgsm/numerics.hpp"
#include "dgsm/qmc.hpp"

namespace dgsm {

// Coordinated sample caches shared by the variance, DGSM and bound
// estimators. A plan of dimension 2d is split columnwise: the first d
// coordinates form block A, the last d form block B. Every estimator reads
// the same A points, so one report run uses one set of f(A) values and one D.

struct BaseSample {
  std::size_t dimension = 0;  // d
  std::size_t count = 0;      // N
  Matrix unit_a;              // N x d, in [0, 1)
  Matrix unit_b;
  Matrix a;                   // physical inputs (inverse-CDF mapped for Normal inputs)
  Matrix b;
  std::vector<double> f_a;    // f(A_k), N evaluations
};

/// f(B) and the pick-freeze evaluations f(A_B^i): A_k with coordinate i
/// taken from B_k.
struct PickFreezeSample {
  std::vector<double> f_b;  // N
  Matrix f_ab;              // N x d
};

/// Gradients at the A points, reused by every derivative-based measure.
struct DerivativeSample {
  GradientMode mode = GradientMode::analytic;
  Matrix gradient;            // N x d
  Matrix log_unit_a;          // log of unit coordinates, for x^m weights
  std::size_t gradient_calls = 0;
  std::size_t fd_function_calls = 0;
};

/// f(1, z) and f(0, z) at the A points: A_k with coordinate i set to 1 / 0.
struct EndpointSample {
  Matrix f_one;   // N x d
  Matrix f_zero;  // N x d
};

/// Plan for a model: 2d Sobol' dimensions, N points.
SamplePlan make_plan(const Model& model, std::size_t count,
                     std::optional<std::vector<double>> shift = std::nullopt,
                     std::uint64_t seed = 0);

BaseSample draw_base(const Model& model, const SamplePlan& plan, unsigned threads = 1);
PickFreezeSample sample_pick_freeze(const Model& model, const BaseSample& base,
                                    unsigned threads = 1);
DerivativeSample sample_derivatives(const Model& model, const BaseSample& base,
                                    unsigned threads = 1);
EndpointSample sample_endpoints(const Model& model, const BaseSample& base,
                                unsigned threads = 1);

}  // namespace dgsm
