#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dgsm/error.hpp"
#include "dgsm/qmc.hpp"
#include "support.hpp"

using namespace dgsm;

TEST(Sobol, DimensionOneIsVanDerCorput) {
  const Matrix x = sobol_points({1, 8, std::nullopt, 0});
  const double expected[] = {0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875, 0.0625};
  for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(x(k, 0), expected[k]);
}

// Reference rows from an independent Joe–Kuo implementation, re-ordered from
// Gray-code to natural index order.
TEST(Sobol, FrozenSixDimensionalPrefix) {
  const Matrix x = sobol_points({6, 5, std::nullopt, 0});
  const double expected[5][6] = {{0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
                                 {0.25, 0.75, 0.75, 0.75, 0.25, 0.25},
                                 {0.75, 0.25, 0.25, 0.25, 0.75, 0.75},
                                 {0.125, 0.625, 0.375, 0.125, 0.125, 0.375},
                                 {0.625, 0.125, 0.875, 0.625, 0.625, 0.875}};
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(x(k, j), expected[k][j]) << k << "," << j;
  }
}

TEST(Sobol, SinglePointMatchesMatrixRow) {
  const Matrix x = sobol_points({20, 300, std::nullopt, 0});
  std::vector<double> p(20);
  for (std::uint64_t n : {1u, 2u, 77u, 256u, 300u}) {
    sobol_point(DirectionTable::builtin(), n, 20, p);
    for (std::size_t j = 0; j < 20; ++j) EXPECT_EQ(p[j], x(n - 1, j));
  }
}

TEST(Sobol, EachCoordinateIsAPermutedDyadicGrid) {
  // Indices 0..2^m-1 hit each 2^-m cell exactly once in every coordinate;
  // skipping index 0 leaves exactly the first cell missing.
  const std::size_t n = 1024;
  const Matrix x = sobol_points({50, n - 1, std::nullopt, 0});
  for (std::size_t j = 0; j < 50; ++j) {
    std::vector<int> cells(n, 0);
    for (std::size_t k = 0; k < n - 1; ++k) ++cells[static_cast<std::size_t>(x(k, j) * n)];
    EXPECT_EQ(cells[0], 0) << j;
    for (std::size_t c = 1; c < n; ++c) ASSERT_EQ(cells[c], 1) << j;
  }
}

TEST(Sobol, SupportsAtLeastFiftyDimensionsAndRejectsBeyondTable) {
  EXPECT_GE(DirectionTable::builtin().max_dimension(), 50u);
  EXPECT_NO_THROW(sobol_points({1024, 4, std::nullopt, 0}));
  EXPECT_THROW(sobol_points({1025, 4, std::nullopt, 0}), Error);
  EXPECT_THROW(sobol_points({0, 4, std::nullopt, 0}), Error);
  EXPECT_THROW(sobol_points({2, 0, std::nullopt, 0}), Error);
}

TEST(Sobol, ShiftIsCoordinatewiseFractionalPart) {
  const std::vector<double> s = {0.3, 0.9, 0.0};
  const Matrix raw = sobol_points({3, 64, std::nullopt, 0});
  const Matrix shifted = sobol_points({3, 64, s, 0});
  for (std::size_t k = 0; k < 64; ++k) {
    for (std::size_t j = 0; j < 3; ++j) {
      double v = raw(k, j) + s[j];
      v -= std::floor(v);
      EXPECT_DOUBLE_EQ(shifted(k, j), v);
      EXPECT_GE(shifted(k, j), 0.0);
      EXPECT_LT(shifted(k, j), 1.0);
    }
  }
}

TEST(Sobol, RejectsBadShift) {
  EXPECT_THROW(sobol_points({2, 4, std::vector<double>{0.1}, 0}), Error);
  EXPECT_THROW(sobol_points({2, 4, std::vector<double>{0.1, 1.0}, 0}), Error);
  EXPECT_THROW(sobol_points({2, 4, std::vector<double>{-0.1, 0.5}, 0}), Error);
}

TEST(Sobol, NestedPrefixConsistency) {
  const auto shift = replicate_shift(5, 3, 0);
  const Matrix small = sobol_points({5, 512, shift, 3});
  const Matrix big = sobol_points({5, 1024, shift, 3});
  for (std::size_t k = 0; k < 512; ++k) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(small(k, j), big(k, j));
  }
}

TEST(Sobol, DeterministicForSamePlan) {
  const auto shift = replicate_shift(7, 11, 2);
  EXPECT_EQ(sobol_points({7, 333, shift, 11}), sobol_points({7, 333, shift, 11}));
}

TEST(Sobol, LowerDiscrepancyThanRandomSampling) {
  const std::size_t n = 1024;
  const double qmc = test::l2_star_discrepancy(sobol_points({2, n, std::nullopt, 0}));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double random_mean = 0.0;
  for (int run = 0; run < 25; ++run) {
    Matrix x(n, 2);
    for (std::size_t k = 0; k < n; ++k) {
      x(k, 0) = u(rng);
      x(k, 1) = u(rng);
    }
    random_mean += test::l2_star_discrepancy(x) / 25.0;
  }
  EXPECT_LT(qmc, random_mean);
  EXPECT_LT(qmc, 0.2 * random_mean);
}

TEST(Sobol, IntegratesEvenPowers) {
  const std::size_t n = 1u << 14;
  const std::size_t d = 4;
  const Matrix x = sobol_points({d, n, std::nullopt, 0});
  for (int m : {1, 2, 5}) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += std::pow(x(k, j), 2 * m);
      EXPECT_NEAR(s / n, 1.0 / (2 * m + 1), 1e-4) << "m=" << m << " j=" << j;
    }
  }
}

TEST(DirectionTable, ParsesJoeKuoLayout) {
  const auto table = DirectionTable::parse(
      "# comment\n"
      "d s a m_i\n"
      "2 1 0 1\n"
      "3 2 1 1 3\n");
  ASSERT_EQ(table.max_dimension(), 3u);
  // Dimension 2 (polynomial x + 1, m_1 = 1): v_k = v_{k-1} ^ (v_{k-1} >> 1).
  EXPECT_EQ(table.directions(1)[0], 1u << 31);
  EXPECT_EQ(table.directions(1)[1], 3u << 30);
  EXPECT_EQ(table.directions(1)[2], 5u << 29);
  std::vector<double> p(3);
  sobol_point(table, 3, 3, p);
  EXPECT_EQ(p[0], 0.75);
  EXPECT_EQ(p[1], 0.25);
}

TEST(DirectionTable, RejectsMalformedRows) {
  EXPECT_THROW(DirectionTable::parse("2 1 0\n"), Error);
  EXPECT_THROW(DirectionTable::parse("2 1 0 2\n"), Error);  // even m
  EXPECT_THROW(DirectionTable::parse("3 1 0 1\n"), Error);  // out of order
}

TEST(ReplicatePlans, SingleReplicateIsReproducible) {
  const auto a = replicate_plans(4, 128, 1, 99);
  const auto b = replicate_plans(4, 128, 1, 99);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_TRUE(a[0].shift.has_value());
  EXPECT_EQ(*a[0].shift, *b[0].shift);
}

TEST(ReplicatePlans, SameSeedSameShifts) {
  const auto a = replicate_plans(6, 64, 25, 7);
  const auto b = replicate_plans(6, 64, 25, 7);
  ASSERT_EQ(a.size(), 25u);
  for (std::size_t k = 0; k < 25; ++k) {
    EXPECT_EQ(*a[k].shift, *b[k].shift);
    EXPECT_EQ(*a[k].shift, replicate_shift(6, 7, k));
  }
  EXPECT_NE(*a[0].shift, *replicate_plans(6, 64, 1, 8)[0].shift);
}

TEST(ReplicatePlans, ShiftDependsOnlyOnSeedAndIndex) {
  const auto few = replicate_plans(3, 16, 3, 5);
  const auto many = replicate_plans(3, 4096, 30, 5);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(*few[k].shift, *many[k].shift);
}

TEST(ReplicatePlans, ShiftsLookUniform) {
  const auto plans = replicate_plans(8, 16, 25, 7);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& p : plans) {
    for (double s : *p.shift) {
      EXPECT_GE(s, 0.0);
      EXPECT_LT(s, 1.0);
      sum += s;
      ++count;
    }
  }
  ASSERT_GE(count, 100u);
  EXPECT_GT(sum / count, 0.4);
  EXPECT_LT(sum / count, 0.6);
}

TEST(ReplicatePlans, RejectsZeroReplicates) {
  EXPECT_THROW(replicate_plans(2, 16, 0, 1), Error);
}
