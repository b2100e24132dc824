#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dgsm/numerics.hpp"

namespace dgsm::test {

// Composite Simpson on [a, b] with n (even) panels. Deliberately generic and
// unrelated to the library's Gauss rules.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t n = 2000) {
  if (n % 2) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < n; ++k) s += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// L2-star discrepancy by Warnock's formula.
inline double l2_star_discrepancy(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  double t1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) p *= (1.0 - x(k, j) * x(k, j)) / 2.0;
    t1 += p;
  }
  double t2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      double p = 1.0;
      for (std::size_t j = 0; j < d; ++j) p *= 1.0 - std::max(x(k, j), x(l, j));
      t2 += p;
    }
  }
  const double nn = static_cast<double>(n);
  return std::sqrt(std::pow(3.0, -static_cast<double>(d)) - 2.0 / nn * t1 + t2 / (nn * nn));
}

// Exact variance decomposition of the Hartmann-6 function (a sum of
// separable Gaussian products) from 1-D integrals.
struct HartmannExact {
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> first_order;
  std::vector<double> total;
};

inline HartmannExact hartmann_exact() {
  const double c[4] = {1.0, 1.2, 3.0, 3.2};
  const double a[4][6] = {{10, 3, 17, 3.5, 1.7, 8},
                          {0.05, 10, 17, 0.1, 8, 14},
                          {3, 3.5, 1.7, 10, 17, 8},
                          {17, 8, 0.05, 10, 0.1, 14}};
  const double p[4][6] = {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
                          {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
                          {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
                          {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}};
  auto e = [&](int i, int j, double x) { return std::exp(-a[i][j] * (x - p[i][j]) * (x - p[i][j])); };
  double I1[4][6], I2[4][4][6];
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 6; ++j) {
      I1[i][j] = simpson([&](double x) { return e(i, j, x); }, 0.0, 1.0);
      for (int k = 0; k < 4; ++k) {
        I2[i][k][j] = simpson([&](double x) { return e(i, j, x) * e(k, j, x); }, 0.0, 1.0);
      }
    }
  }
  HartmannExact out;
  double f0 = 0.0, ef2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    double pr = 1.0;
    for (int j = 0; j < 6; ++j) pr *= I1[i][j];
    f0 -= c[i] * pr;
    for (int k = 0; k < 4; ++k) {
      double q = 1.0;
      for (int j = 0; j < 6; ++j) q *= I2[i][k][j];
      ef2 += c[i] * c[k] * q;
    }
  }
  out.mean = f0;
  out.variance = ef2 - f0 * f0;
  for (int j = 0; j < 6; ++j) {
    // E[E[f|x_j]^2] and E[E[f|x_~j]^2]
    double cond = 0.0, rest = 0.0;
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) {
        double oi = 1.0, ok = 1.0, q = 1.0;
        for (int l = 0; l < 6; ++l) {
          if (l == j) continue;
          oi *= I1[i][l];
          ok *= I1[k][l];
          q *= I2[i][k][l];
        }
        cond += c[i] * c[k] * oi * ok * I2[i][k][j];
        rest += c[i] * c[k] * I1[i][j] * I1[k][j] * q;
      }
    }
    out.first_order.push_back((cond - f0 * f0) / out.variance);
    out.total.push_back((out.variance - (rest - f0 * f0)) / out.variance);
  }
  return out;
}

}  // namespace dgsm::test
