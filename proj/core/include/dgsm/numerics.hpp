#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dgsm {

/// Dense row-major matrix of doubles. Rows are sample points.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Neumaier-compensated running sum. Summation order is the caller's, so a
/// fixed traversal gives bitwise-reproducible totals.
class CompensatedSum {
public:
  void add(double value) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_mean(std::span<const double> values);

/// Runs body(begin, end) over contiguous blocks of [0, count). threads == 0
/// selects hardware concurrency. Callers write to disjoint slots only, so
/// results do not depend on the worker count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

unsigned resolve_threads(unsigned requested) noexcept;

double normal_cdf(double x) noexcept;

/// Inverse of the standard normal CDF on (0, 1): rational initial guess
/// refined by one Halley step against erfc; absolute error well below 1e-12.
double inverse_normal_cdf(double p);

/// Maximizes a unimodal function on [lo, hi] by golden-section search.
/// Returns the abscissa; stops when the bracket is narrower than tol.
double golden_section_maximize(const std::function<double(double)>& fn, double lo, double hi,
                               double tol);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace dgsm
