#include "dgsm/bench.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "dgsm/error.hpp"
#include "dgsm/numerics.hpp"

namespace dgsm {

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::s_first: return "s";
    case Quantity::s_total: return "s_tot";
    case Quantity::lb1: return "lb1";
    case Quantity::lb2: return "lb2";
    case Quantity::ub1: return "ub1";
    case Quantity::ub2: return "ub2";
  }
  return "unknown";
}

Quantity parse_quantity(const std::string& name) {
  std::string s;
  for (char ch : name) s.push_back(ch == '-' ? '_' : static_cast<char>(std::tolower(ch)));
  if (s == "s" || s == "s_first" || s == "first_order") return Quantity::s_first;
  if (s == "s_tot" || s == "s_total" || s == "total") return Quantity::s_total;
  if (s == "lb1") return Quantity::lb1;
  if (s == "lb2") return Quantity::lb2;
  if (s == "ub1") return Quantity::ub1;
  if (s == "ub2") return Quantity::ub2;
  fail(ErrorCode::invalid_argument, "unknown quantity '" + name + "'");
}

namespace {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace

TrendFit fit_trend(const std::vector<ConvergenceRow>& rows) {
  TrendFit out;
  std::vector<ConvergenceRow> usable;
  for (const auto& r : rows) {
    if (r.rmse > 0.0 && std::isfinite(r.rmse) && r.count > 0) {
      usable.push_back(r);
    } else {
      out.warnings.push_back("excluded N=" + std::to_string(r.count) + " (rmse " +
                             std::to_string(r.rmse) + ")");
    }
  }
  std::sort(usable.begin(), usable.end(),
            [](const ConvergenceRow& l, const ConvergenceRow& r) { return l.count < r.count; });
  require(usable.size() >= 3, ErrorCode::insufficient_data,
          "trend fit needs at least 3 rows with positive error, have " +
              std::to_string(usable.size()));

  auto run = [](const std::vector<ConvergenceRow>& rs) {
    std::vector<double> x, y;
    for (const auto& r : rs) {
      x.push_back(std::log(static_cast<double>(r.count)));
      y.push_back(std::log(r.rmse));
    }
    return least_squares(x, y);
  };
  LineFit fit = run(usable);
  if (fit.r_squared < 0.9 && usable.size() > 3) {
    out.excluded_count = usable.front().count;
    out.warnings.push_back("R^2 " + std::to_string(fit.r_squared) + " < 0.9; excluded N=" +
                           std::to_string(usable.front().count));
    usable.erase(usable.begin());
    fit = run(usable);
  }
  out.coefficient = std::exp(fit.intercept);
  out.exponent = -fit.slope;
  out.r_squared = fit.r_squared;
  out.rows_used = usable.size();
  return out;
}

namespace {

// Runs `estimate(plan) -> values` for every (N, k) and folds each value
// column into its own RMSE table.
std::vector<ConvergenceTable> drive(
    const std::function<std::vector<double>(const SamplePlan&)>& estimate,
    std::size_t plan_dimension, const std::vector<double>& references,
    const std::vector<std::size_t>& n_grid, std::size_t K, const ConvergenceOptions& options) {
  require(K >= 2, ErrorCode::invalid_argument, "K >= 2 replicates required");
  require(!n_grid.empty(), ErrorCode::invalid_argument, "N grid is empty");
  std::vector<std::size_t> grid = n_grid;
  std::sort(grid.begin(), grid.end());
  require(grid.front() > 0, ErrorCode::invalid_argument, "N must be positive");

  const std::size_t nq = references.size();
  std::vector<ConvergenceTable> tables(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    tables[q].replicates = K;
    tables[q].reference = references[q];
    tables[q].absolute_error = references[q] == 0.0;
  }

  for (std::size_t n : grid) {
    // Shifts depend only on (seed, k), so replicate k uses the same shift at every N.
    const auto plans = replicate_plans(plan_dimension, n, K, options.seed);
    std::vector<std::vector<double>> values(K);
    parallel_for(K, options.threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) values[k] = estimate(plans[k]);
    });
    for (std::size_t q = 0; q < nq; ++q) {
      CompensatedSum sq;
      for (std::size_t k = 0; k < K; ++k) {
        const double err = tables[q].absolute_error
                               ? values[k][q]
                               : (values[k][q] - references[q]) / references[q];
        sq.add(err * err);
      }
      tables[q].rows.push_back({n, std::sqrt(sq.value() / static_cast<double>(K))});
    }
  }
  for (auto& t : tables) {
    try {
      t.fit = fit_trend(t.rows);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::insufficient_data) throw;
    }
  }
  return tables;
}

}  // namespace

ConvergenceTable rmse_convergence(const ReplicateEstimator& estimator, std::size_t plan_dimension,
                                  double reference, const std::vector<std::size_t>& n_grid,
                                  std::size_t K, const ConvergenceOptions& options) {
  require(std::isfinite(reference), ErrorCode::invalid_argument, "reference must be finite");
  auto tables = drive([&](const SamplePlan& p) { return std::vector<double>{estimator(p)}; },
                      plan_dimension, {reference}, n_grid, K, options);
  return std::move(tables.front());
}

double report_value(const BoundsReport& report, Quantity q, std::size_t variable) {
  require(variable < report.variables.size(), ErrorCode::invalid_argument,
          "variable index out of range");
  const VariableReport& v = report.variables[variable];
  auto need = [&](const std::optional<double>& x) {
    require(x.has_value(), ErrorCode::missing_reference,
            to_string(q) + " is not part of this report");
    return *x;
  };
  switch (q) {
    case Quantity::s_first: return v.s_first;
    case Quantity::s_total: return v.s_total;
    case Quantity::lb1: return need(v.lb1);
    case Quantity::lb2: return need(v.lb2);
    case Quantity::ub1: return need(v.ub1);
    case Quantity::ub2: return need(v.ub2);
  }
  return 0.0;
}

double reference_value(const AnalyticReference& ref, Quantity q, std::size_t variable) {
  auto pick = [&](const std::vector<double>& v) {
    require(variable < v.size(), ErrorCode::missing_reference,
            "no analytic reference for " + to_string(q));
    return v[variable];
  };
  switch (q) {
    case Quantity::s_first: return pick(ref.first_order);
    case Quantity::s_total: return pick(ref.total);
    case Quantity::lb1: return pick(ref.lb1);
    case Quantity::lb2: return pick(ref.lb2);
    case Quantity::ub1: return pick(ref.ub1);
    case Quantity::ub2: return pick(ref.ub2);
  }
  return 0.0;
}

std::vector<ConvergenceTable> rmse_convergence(const TestFunction& fn,
                                               const std::vector<Quantity>& quantities,
                                               std::size_t variable,
                                               const std::vector<std::size_t>& n_grid,
                                               std::size_t K, const ConvergenceOptions& options,
                                               const ReportOptions& report_options) {
  require(fn.analytic.has_value(), ErrorCode::missing_reference,
          "function '" + fn.name + "' has no analytic reference");
  require(variable < fn.model.dimension(), ErrorCode::invalid_argument,
          "variable index out of range");
  require(!quantities.empty(), ErrorCode::invalid_argument, "no quantities requested");
  std::vector<double> refs;
  for (Quantity q : quantities) refs.push_back(reference_value(*fn.analytic, q, variable));

  ReportOptions per_run = report_options;
  per_run.threads = 1;
  auto tables = drive(
      [&](const SamplePlan& plan) {
        const BoundsReport r = assemble_report(fn.model, plan, per_run);
        std::vector<double> out;
        for (Quantity q : quantities) out.push_back(report_value(r, q, variable));
        return out;
      },
      2 * fn.model.dimension(), refs, n_grid, K, options);
  for (std::size_t k = 0; k < tables.size(); ++k) {
    tables[k].quantity = quantities[k];
    tables[k].variable = variable;
  }
  return tables;
}

ConvergenceTable rmse_convergence(const TestFunction& fn, Quantity q, std::size_t variable,
                                  const std::vector<std::size_t>& n_grid, std::size_t K,
                                  const ConvergenceOptions& options,
                                  const ReportOptions& report_options) {
  return std::move(rmse_convergence(fn, std::vector<Quantity>{q}, variable, n_grid, K, options,
                                    report_options)
                       .front());
}

std::vector<BoundsReport> replicate_reports(const Model& model, std::size_t count, std::size_t K,
                                            std::uint64_t seed, const ReportOptions& options) {
  require(K >= 1, ErrorCode::invalid_argument, "K >= 1 required");
  const auto plans = replicate_plans(2 * model.dimension(), count, K, seed);
  ReportOptions per_run = options;
  per_run.threads = 1;
  std::vector<BoundsReport> out(K);
  parallel_for(K, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = assemble_report(model, plans[k], per_run);
  });
  return out;
}

std::vector<std::size_t> power_of_two_grid(std::size_t lo, std::size_t hi) {
  require(lo > 0 && std::has_single_bit(lo) && std::has_single_bit(hi) && lo <= hi,
          ErrorCode::invalid_argument, "N grid bounds must be powers of two with lo <= hi");
  std::vector<std::size_t> grid;
  for (std::size_t n = lo; n <= hi; n *= 2) grid.push_back(n);
  return grid;
}

}  // namespace dgsm
