#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dgsm/model.hpp"
#include "dgsm/numerics.hpp"
#include "dgsm/qmc.hpp"
#include "dgsm/sampling.hpp"

namespace dgsm {

/// Derivative-based measures for every input, all reduced from one shared
/// set of gradient samples.
///
/// Uniform01 inputs:
///   morris_mu_i = E|df/dx_i|
///   nu_i        = E[(df/dx_i)^2]
///   zeta_i      = E[x_i (1 - x_i) (df/dx_i)^2] / 2
///   w_i^(m)     = E[x_i^m df/dx_i]           (tabulated on m_grid)
/// Normal inputs: nu_i as above under the normal measure and
///   w_normal_i  = E[df/dx_i]
/// The derivative is taken in the physical variable; there is no Jacobian
/// factor from the inverse-CDF map. zeta and the w-curve are empty for
/// normal models, w_normal is empty for uniform ones.
struct DgsmSet {
  std::vector<double> morris_mu;
  std::vector<double> nu;
  std::vector<double> zeta;
  std::vector<double> m_grid;
  Matrix w_curve;  // d x m_grid.size()
  std::vector<double> w_normal;
  std::size_t count = 0;
  std::size_t evaluations_used = 0;  // gradient calls charged d evaluations each
};

std::vector<double> default_m_grid();

DgsmSet estimate_dgsm(const Model& model, const BaseSample& base, const DerivativeSample& derivs,
                      std::span<const double> m_grid);
DgsmSet estimate_dgsm(const Model& model, const SamplePlan& plan,
                      std::span<const double> m_grid, unsigned threads = 1);

/// w_i^(m) = E[x_i^m df/dx_i] evaluated from cached samples (no model calls).
double moment_weighted_derivative(const DerivativeSample& derivs, std::size_t variable, double m);

/// Tensor Gauss–Legendre / Gauss–Hermite evaluation of the same integrals.
DgsmSet oracle_dgsm(const Model& model, std::size_t nodes_per_axis, std::size_t panels,
                    std::span<const double> m_grid);

}  // namespace dgsm
