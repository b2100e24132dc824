#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "dgsm/bench.hpp"
#include "dgsm/error.hpp"

using namespace dgsm;

namespace {

std::vector<ConvergenceRow> power_rows(double c, double alpha) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t n = 256; n <= 16384; n *= 2) rows.push_back({n, c * std::pow(double(n), -alpha)});
  return rows;
}

}  // namespace

TEST(FitTrend, ExactPowerLaws) {
  const auto f = fit_trend(power_rows(4.0, 1.0));
  EXPECT_NEAR(f.coefficient, 4.0, 1e-10);
  EXPECT_NEAR(f.exponent, 1.0, 1e-10);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_EQ(f.rows_used, 7u);
  EXPECT_FALSE(f.excluded_count.has_value());
  EXPECT_NEAR(fit_trend(power_rows(1.0, 0.5)).exponent, 0.5, 1e-10);
}

TEST(FitTrend, ZeroRowsAreExcludedWithWarning) {
  auto rows = power_rows(2.0, 0.8);
  rows[3].rmse = 0.0;
  const auto f = fit_trend(rows);
  EXPECT_EQ(f.rows_used, 6u);
  ASSERT_FALSE(f.warnings.empty());
  EXPECT_NEAR(f.exponent, 0.8, 1e-10);
}

TEST(FitTrend, NeedsThreeUsableRows) {
  std::vector<ConvergenceRow> rows = {{256, 0.1}, {512, 0.0}, {1024, 0.05}};
  try {
    fit_trend(rows);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::insufficient_data);
  }
}

TEST(FitTrend, PoorFitDropsSmallestN) {
  auto rows = power_rows(1.0, 1.0);
  rows[0].rmse = 1e-9;  // wild preasymptotic point
  const auto f = fit_trend(rows);
  ASSERT_TRUE(f.excluded_count.has_value());
  EXPECT_EQ(*f.excluded_count, 256u);
  EXPECT_NEAR(f.exponent, 1.0, 1e-10);
  EXPECT_EQ(f.rows_used, 6u);
}

TEST(RmseConvergence, ExactEstimatorHasZeroError) {
  const auto t = rmse_convergence([](const SamplePlan&) { return 0.3; }, 4, 0.3,
                                  power_of_two_grid(16, 256), 5);
  ASSERT_EQ(t.rows.size(), 5u);
  for (const auto& r : t.rows) EXPECT_EQ(r.rmse, 0.0);
  EXPECT_FALSE(t.fit.has_value());
  EXPECT_FALSE(t.absolute_error);
}

TEST(RmseConvergence, RowsSortedAndRelative) {
  const auto t = rmse_convergence(
      [](const SamplePlan& p) { return 2.0 * (1.0 + 1.0 / double(p.count)); }, 2, 2.0,
      {1024, 64, 256}, 3);
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].count, 64u);
  EXPECT_EQ(t.rows[2].count, 1024u);
  EXPECT_NEAR(t.rows[0].rmse, 1.0 / 64.0, 1e-15);
  ASSERT_TRUE(t.fit.has_value());
  EXPECT_NEAR(t.fit->exponent, 1.0, 1e-10);
}

TEST(RmseConvergence, ZeroReferenceSwitchesToAbsoluteError) {
  const auto t = rmse_convergence([](const SamplePlan&) { return 1e-3; }, 2, 0.0, {64, 128}, 2);
  EXPECT_TRUE(t.absolute_error);
  EXPECT_NEAR(t.rows[0].rmse, 1e-3, 1e-18);
}

TEST(RmseConvergence, ValidatesArguments) {
  auto est = [](const SamplePlan&) { return 1.0; };
  EXPECT_THROW(rmse_convergence(est, 2, 1.0, {64}, 1), Error);
  EXPECT_THROW(rmse_convergence(est, 2, 1.0, {}, 3), Error);
  const auto hart = make_hartmann6();
  try {
    rmse_convergence(hart, Quantity::s_total, 0, {64, 128, 256}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_reference);
  }
}

TEST(RmseConvergence, GFunctionTotalIndexDecreases) {
  const auto fn = make_g_function({0, 1, 4.5, 9, 99, 99, 99, 99});
  ConvergenceOptions opts;
  opts.seed = 11;
  const auto t = rmse_convergence(fn, Quantity::s_total, 0, power_of_two_grid(256, 16384), 25, opts);
  ASSERT_TRUE(t.fit.has_value());
  EXPECT_GE(t.fit->exponent, 0.6);
  EXPECT_LT(t.rows.back().rmse, t.rows.front().rmse);
}

TEST(RmseConvergence, DeterministicForSameSeed) {
  const auto fn = make_g_function({0, 1, 4.5});
  ConvergenceOptions opts;
  opts.seed = 3;
  const auto grid = power_of_two_grid(64, 1024);
  const auto a = rmse_convergence(fn, {Quantity::lb2, Quantity::ub1}, 1, grid, 6, opts);
  opts.threads = 3;
  const auto b = rmse_convergence(fn, {Quantity::lb2, Quantity::ub1}, 1, grid, 6, opts);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t q = 0; q < 2; ++q) {
    ASSERT_EQ(a[q].rows.size(), b[q].rows.size());
    for (std::size_t k = 0; k < a[q].rows.size(); ++k) EXPECT_EQ(a[q].rows[k].rmse, b[q].rows[k].rmse);
  }
  EXPECT_EQ(a[0].quantity, Quantity::lb2);
  EXPECT_EQ(a[1].variable, 1u);
}

TEST(RmseConvergence, InvariantUnderReplicateRelabeling) {
  const auto fn = make_g_function({0, 2});
  const std::size_t K = 7, N = 512;
  const auto table = rmse_convergence(fn, Quantity::ub2, 0, {N}, K, {5, 1});
  auto reports = replicate_reports(fn.model, N, K, 5);
  std::reverse(reports.begin(), reports.end());
  const double ref = fn.analytic->ub2[0];
  double sq = 0.0;
  for (const auto& r : reports) sq += std::pow((*r.variables[0].ub2 - ref) / ref, 2);
  EXPECT_NEAR(table.rows[0].rmse, std::sqrt(sq / K), 1e-15);
}

TEST(RmseConvergence, DoublingReplicatesIsStatisticallyStable) {
  const auto fn = make_g_function({0, 1, 4.5});
  const auto grid = std::vector<std::size_t>{1024};
  const auto small = rmse_convergence(fn, Quantity::s_total, 0, grid, 25, {1, 1});
  const auto large = rmse_convergence(fn, Quantity::s_total, 0, grid, 50, {1, 1});
  const double rel = std::abs(large.rows[0].rmse - small.rows[0].rmse) / small.rows[0].rmse;
  EXPECT_LT(rel, 3.0 / std::sqrt(25.0));
}

TEST(Quantity, NamesRoundTrip) {
  for (Quantity q : {Quantity::s_first, Quantity::s_total, Quantity::lb1, Quantity::lb2, Quantity::ub1,
                     Quantity::ub2}) {
    EXPECT_EQ(parse_quantity(to_string(q)), q);
  }
  EXPECT_EQ(parse_quantity("S-TOT"), Quantity::s_total);
  EXPECT_THROW(parse_quantity("lb3"), Error);
}

TEST(PowerOfTwoGrid, Validates) {
  EXPECT_EQ(power_of_two_grid(256, 16384).size(), 7u);
  EXPECT_THROW(power_of_two_grid(100, 200), Error);
  EXPECT_THROW(power_of_two_grid(512, 256), Error);
}
