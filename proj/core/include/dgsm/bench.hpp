#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dgsm/bounds.hpp"
#include "dgsm/qmc.hpp"
#include "dgsm/testfns.hpp"

namespace dgsm {

enum class Quantity { s_first, s_total, lb1, lb2, ub1, ub2 };

std::string to_string(Quantity q);
/// Accepts "s", "s_tot", "lb1", "lb2", "ub1", "ub2" (and a few spellings).
Quantity parse_quantity(const std::string& name);

struct ConvergenceRow {
  std::size_t count = 0;  // N
  double rmse = 0.0;      // eps_i
};

struct TrendFit {
  double coefficient = 0.0;  // c in c N^-alpha
  double exponent = 0.0;     // alpha
  double r_squared = 0.0;
  std::size_t rows_used = 0;
  std::optional<std::size_t> excluded_count;  // smallest N, dropped when R^2 < 0.9
  std::vector<std::string> warnings;
};

struct ConvergenceTable {
  Quantity quantity = Quantity::s_total;
  std::size_t variable = 0;  // 0-based
  std::size_t replicates = 0;
  double reference = 0.0;    // I0
  /// Set when I0 == 0 and eps is an absolute RMSE.
  bool absolute_error = false;
  std::vector<ConvergenceRow> rows;
  std::optional<TrendFit> fit;
};

/// Least squares on (log N, log eps). Rows with eps == 0 are skipped with a
/// warning; at least 3 usable rows are required. If R^2 < 0.9 the smallest
/// N is dropped once and the fit repeated (if 3 rows remain).
TrendFit fit_trend(const std::vector<ConvergenceRow>& rows);

/// Estimator for one randomized replicate.
using ReplicateEstimator = std::function<double(const SamplePlan&)>;

struct ConvergenceOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;  // replicates run in parallel
};

/// Generic driver: for every N runs K shifted replicates of a plan with the
/// given Sobol' dimension and reports the RMSE against `reference`.
ConvergenceTable rmse_convergence(const ReplicateEstimator& estimator, std::size_t plan_dimension,
                                  double reference, const std::vector<std::size_t>& n_grid,
                                  std::size_t K, const ConvergenceOptions& options = {});

/// Value of a quantity for one variable inside a report.
double report_value(const BoundsReport& report, Quantity q, std::size_t variable);
/// Closed-form reference; throws missing_reference when not available.
double reference_value(const AnalyticReference& ref, Quantity q, std::size_t variable);

/// Protocol driver for a registry function: I0 from the analytic provider,
/// estimates from assemble_report on each replicate.
ConvergenceTable rmse_convergence(const TestFunction& fn, Quantity q, std::size_t variable,
                                  const std::vector<std::size_t>& n_grid, std::size_t K,
                                  const ConvergenceOptions& options = {},
                                  const ReportOptions& report_options = {});

/// Several quantities for one variable from a single set of replicate runs.
std::vector<ConvergenceTable> rmse_convergence(const TestFunction& fn,
                                               const std::vector<Quantity>& quantities,
                                               std::size_t variable,
                                               const std::vector<std::size_t>& n_grid,
                                               std::size_t K,
                                               const ConvergenceOptions& options = {},
                                               const ReportOptions& report_options = {});

/// K independent shifted reports at one N; used for standard errors.
std::vector<BoundsReport> replicate_reports(const Model& model, std::size_t count, std::size_t K,
                                            std::uint64_t seed,
                                            const ReportOptions& options = {});

/// Powers of two from lo to hi inclusive (both must be powers of two).
std::vector<std::size_t> power_of_two_grid(std::size_t lo, std::size_t hi);

}  // namespace dgsm
