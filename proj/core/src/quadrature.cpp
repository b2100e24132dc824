#include "dgsm/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "dgsm/error.hpp"

namespace dgsm {

QuadratureRule gauss_legendre_unit(std::size_t nodes, std::size_t panels) {
  require(nodes >= 1, ErrorCode::invalid_argument, "quadrature needs at least one node");
  require(panels >= 1, ErrorCode::invalid_argument, "quadrature needs at least one panel");

  // Nodes on [-1, 1] by Newton iteration on P_n.
  std::vector<double> t(nodes), w(nodes);
  const std::size_t n = nodes;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / static_cast<double>(k);
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    t[i] = -z;
    t[n - 1 - i] = z;
    w[i] = weight;
    w[n - 1 - i] = weight;
  }
  if (n % 2 == 1) t[n / 2] = 0.0;

  QuadratureRule rule;
  rule.nodes.reserve(n * panels);
  rule.weights.reserve(n * panels);
  const double width = 1.0 / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = width * static_cast<double>(p);
    for (std::size_t i = 0; i < n; ++i) {
      rule.nodes.push_back(lo + 0.5 * width * (t[i] + 1.0));
      rule.weights.push_back(0.5 * width * w[i]);
    }
  }
  return rule;
}

QuadratureRule gauss_hermite_normal(std::size_t nodes, double mean, double sigma) {
  require(nodes >= 1, ErrorCode::invalid_argument, "quadrature needs at least one node");
  require(nodes <= 200, ErrorCode::invalid_argument, "Gauss-Hermite limited to 200 nodes");

  // Physicists' Hermite nodes (weight exp(-t^2)) by Newton iteration with
  // orthonormal recurrences, then t -> mean + sigma * sqrt(2) * t.
  const std::size_t n = nodes;
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  std::vector<double> t(n), w(n);
  double z = 0.0;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    const double nn = static_cast<double>(n);
    if (i == 0) {
      z = std::sqrt(2.0 * nn + 1.0) - 1.85575 * std::pow(2.0 * nn + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(nn, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * t[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * t[1];
    } else {
      z = 2.0 * z - t[i - 2];
    }
    double pp = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jj = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / (jj + 1.0)) * p2 - std::sqrt(jj / (jj + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * nn) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 3e-15 * std::max(1.0, std::abs(z))) break;
    }
    t[i] = z;
    t[n - 1 - i] = -z;
    w[i] = 2.0 / (pp * pp);
    w[n - 1 - i] = w[i];
  }
  if (n % 2 == 1) t[n / 2] = 0.0;

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mean + sigma * std::numbers::sqrt2 * t[n - 1 - i];
    rule.weights[i] = w[n - 1 - i] * inv_sqrt_pi;
  }
  return rule;
}

QuadratureRule rule_for(const Distribution& input, std::size_t nodes, std::size_t panels) {
  if (input.kind == DistributionKind::uniform01) return gauss_legendre_unit(nodes, panels);
  return gauss_hermite_normal(nodes, input.mean, input.sigma);
}

}  // namespace dgsm
