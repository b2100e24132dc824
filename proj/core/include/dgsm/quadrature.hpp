#pragma once

#include <cstddef>
#include <vector>

#include "dgsm/model.hpp"

namespace dgsm {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1 (probability measure)
};

/// Gauss–Legendre rule on [0, 1]; `panels` > 1 gives the composite rule on
/// equal subintervals, which integrates piecewise polynomials with breaks at
/// the panel edges exactly.
QuadratureRule gauss_legendre_unit(std::size_t nodes, std::size_t panels = 1);

/// Gauss–Hermite rule for N(mean, sigma^2).
QuadratureRule gauss_hermite_normal(std::size_t nodes, double mean, double sigma);

/// Rule matching the marginal law of one input.
QuadratureRule rule_for(const Distribution& input, std::size_t nodes, std::size_t panels);

}  // namespace dgsm
