#include <array>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lqcp/ustat.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace lqcp;

TEST(PrefixPowerSums, CumulativeSquares) {
  const auto x = validate_matrix({{1}, {2}, {3}});
  const PrefixPowerSums pps(x, EvenOrder(2));
  EXPECT_EQ(pps.cumulative(2, 1, 0), 0.0);
  EXPECT_EQ(pps.cumulative(2, 1, 1), 1.0);
  EXPECT_EQ(pps.cumulative(2, 1, 2), 5.0);
  EXPECT_EQ(pps.cumulative(2, 1, 3), 14.0);
  EXPECT_EQ(pps.interval_sum(2, 1, Interval{2, 3}), 13.0);
  EXPECT_EQ(pps.interval_sum(1, 1, Interval{1, 3}), 6.0);
}

TEST(DistinctProductSum, SmallCases) {
  const auto x = validate_matrix({{1}, {2}, {3}});
  const PrefixPowerSums pps(x, EvenOrder(2));
  // 2! (1*2 + 1*3 + 2*3)
  EXPECT_DOUBLE_EQ(distinct_product_sum(pps, Interval{1, 3}, 2, 1), 22.0);
  EXPECT_EQ(distinct_product_sum(pps, Interval{1, 3}, 0, 1), 1.0);
  EXPECT_EQ(distinct_product_sum(pps, Interval{1, 3}, 1, 1), 6.0);
  const PrefixPowerSums one(validate_matrix({{5}}), EvenOrder(2));
  EXPECT_EQ(distinct_product_sum(one, Interval{1, 1}, 2, 1), 0.0);
  try {
    distinct_product_sum(pps, Interval{1, 3}, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OrderExceedsQ);
  }
}

TEST(DistinctProductSum, MatchesEnumeration) {
  std::mt19937_64 rng(11);
  const auto x = testutil::random_matrix(7, 2, rng);
  const PrefixPowerSums pps(x, EvenOrder(4));
  for (int c = 0; c <= 4; ++c) {
    for (std::size_t l = 1; l <= 2; ++l) {
      double brute = 0.0;
      for (const auto& tup : oracle::distinct_tuples(2, 6, c)) {
        double prod = 1.0;
        for (std::size_t i : tup) prod *= x(i - 1, l - 1);
        brute += prod;
      }
      if (c == 0) brute = 1.0;
      EXPECT_NEAR(distinct_product_sum(pps, Interval{2, 6}, c, l), brute, 1e-10 * (1 + std::abs(brute)));
    }
  }
}

TEST(UStat, StepExample) {
  const auto x = validate_matrix({{0}, {0}, {1}, {1}});
  EXPECT_DOUBLE_EQ(u_stat(x, EvenOrder(2), 2, 1, 4), 4.0);
  EXPECT_DOUBLE_EQ(u_stat_naive(x, EvenOrder(2), 2, 1, 4), 4.0);
}

TEST(UStat, ConstantSeriesIsZero) {
  const auto x = validate_matrix({{3.3, -1}, {3.3, -1}, {3.3, -1}, {3.3, -1}, {3.3, -1}, {3.3, -1}});
  for (std::size_t s = 1; s <= 6; ++s)
    for (std::size_t m = s + 1; m <= 6; ++m)
      for (std::size_t k = s; k < m; ++k) EXPECT_EQ(u_stat(x, EvenOrder(2), k, s, m), 0.0);
}

TEST(UStat, ShortSidesAreZero) {
  std::mt19937_64 rng(3);
  const auto x = testutil::random_matrix(8, 2, rng);
  EXPECT_EQ(u_stat(x, EvenOrder(4), 3, 1, 8), 0.0);
  EXPECT_EQ(u_stat(x, EvenOrder(4), 5, 1, 8), 0.0);
  EXPECT_NE(u_stat(x, EvenOrder(4), 4, 1, 8), 0.0);
}

TEST(UStat, InvalidSplit) {
  std::mt19937_64 rng(3);
  const auto x = testutil::random_matrix(8, 2, rng);
  for (auto [k, s, m] : std::vector<std::array<std::size_t, 3>>{{0, 1, 4}, {4, 1, 4}, {2, 3, 5}, {5, 1, 9}}) {
    try {
      u_stat(x, EvenOrder(2), k, s, m);
      FAIL() << k << " " << s << " " << m;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidSplit);
    }
  }
}

TEST(UStat, FastMatchesNaiveEverywhere) {
  std::mt19937_64 rng(2024);
  const auto x = testutil::random_matrix(8, 3, rng);
  const auto ox = testutil::rows(x);
  for (std::size_t s = 1; s <= 8; ++s)
    for (std::size_t m = s + 1; m <= 8; ++m)
      for (std::size_t k = s; k < m; ++k) {
        const double ref = oracle::u(ox, 4, k, s, m);
        EXPECT_NEAR(u_stat(x, EvenOrder(4), k, s, m), ref, 1e-9 * (1 + std::abs(ref)));
        EXPECT_NEAR(u_stat_naive(x, EvenOrder(4), k, s, m), ref, 1e-9 * (1 + std::abs(ref)));
      }
}

TEST(UStat, NaiveQ2ClosedForm) {
  // For q = 2 the sum expands into sums over distinct pairs:
  // sum*_{i1 != i2} sum*_{j1 != j2} (x_i1 - x_j1)(x_i2 - x_j2)
  //   = R(R-1) P2(left) - 2 (L-1)(R-1) S(left) S(right) + L(L-1) P2(right),
  // with P2 the ordered distinct-pair product sum and S the plain sum.
  std::mt19937_64 rng(6);
  const auto x = testutil::random_matrix(6, 2, rng);
  for (std::size_t k = 2; k <= 4; ++k) {
    double total = 0.0;
    const double L = static_cast<double>(k);
    const double R = static_cast<double>(6 - k);
    for (std::size_t l = 0; l < 2; ++l) {
      double sl = 0, sl2 = 0, sr = 0, sr2 = 0;
      for (std::size_t t = 0; t < k; ++t) sl += x(t, l), sl2 += x(t, l) * x(t, l);
      for (std::size_t t = k; t < 6; ++t) sr += x(t, l), sr2 += x(t, l) * x(t, l);
      const double pl = sl * sl - sl2;
      const double pr = sr * sr - sr2;
      total += R * (R - 1) * pl - 2 * (L - 1) * (R - 1) * sl * sr + L * (L - 1) * pr;
    }
    EXPECT_NEAR(u_stat_naive(x, EvenOrder(2), k, 1, 6), total, 1e-10 * (1 + std::abs(total)));
  }
}

TEST(UStat, NaiveSizeGuard) {
  std::mt19937_64 rng(1);
  const auto x = testutil::random_matrix(20, 2, rng);
  try {
    u_stat_naive(x, EvenOrder(4), 10, 1, 20, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeGuard);
  }
}

TEST(UStat, ShiftAndScale) {
  std::mt19937_64 rng(99);
  const auto x = testutil::random_matrix(12, 4, rng);
  const auto shifted = testutil::affine(x, 1.0, {5, -3, 100, 0.25});
  const auto scaled = testutil::affine(x, -1.7, {0, 0, 0, 0});
  for (int q : {2, 4, 6}) {
    const double base = u_stat(x, EvenOrder(q), 6, 1, 12);
    EXPECT_NEAR(u_stat(shifted, EvenOrder(q), 6, 1, 12), base, 1e-8 * std::abs(base));
    EXPECT_NEAR(u_stat(scaled, EvenOrder(q), 6, 1, 12), std::pow(-1.7, q) * base, 1e-9 * std::abs(base) * std::pow(1.7, q));
  }
}

TEST(UStat, TimeReversal) {
  std::mt19937_64 rng(5);
  const auto x = testutil::random_matrix(10, 3, rng);
  const auto r = testutil::reverse_rows(x);
  for (std::size_t k = 1; k < 10; ++k) {
    const double a = u_stat(x, EvenOrder(2), k, 1, 10);
    const double b = u_stat(r, EvenOrder(2), 10 - k, 1, 10);
    EXPECT_NEAR(a, b, 1e-9 * (1 + std::abs(a)));
  }
}

TEST(UProfile, MatchesPointwise) {
  std::mt19937_64 rng(17);
  const auto x = testutil::random_matrix(10, 2, rng);
  const auto prof = u_profile(x, EvenOrder(2), Interval{1, 10});
  ASSERT_EQ(prof.size(), 10u - 1 - 4 + 2);
  const auto ox = testutil::rows(x);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double ref = oracle::u(ox, 2, i + 2, 1, 10);
    EXPECT_NEAR(prof[i], ref, 1e-9 * (1 + std::abs(ref)));
  }
  EXPECT_EQ(u_profile(x, EvenOrder(2), Interval{3, 6}).size(), 1u);
  try {
    u_profile(x, EvenOrder(2), Interval{3, 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IntervalTooShort);
  }
}

TEST(UStat, NullAndAlternativeMeans) {
  // E T(k) = 0 under the null and ||Delta||_q^q under one shift at k.
  const int q = 2;
  const std::size_t n = 16, p = 3, k = 8;
  const std::vector<double> delta{1.0, -0.5, 0.0};
  double target = 0.0;
  for (double d : delta) target += std::pow(d, q);
  const double norm = falling_factorial(k, q) * falling_factorial(n - k, q);
  std::mt19937_64 rng(123);
  const int reps = 4000;
  double s0 = 0, ss0 = 0, s1 = 0, ss1 = 0;
  for (int r = 0; r < reps; ++r) {
    const auto x = testutil::random_matrix(n, p, rng);
    const double t0 = u_stat(x, EvenOrder(q), k, 1, n) / norm;
    std::vector<double> v(x.values().begin(), x.values().end());
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t l = 0; l < p; ++l) v[t * p + l] += delta[l];
    const double t1 = u_stat(DataMatrix(n, p, v), EvenOrder(q), k, 1, n) / norm;
    s0 += t0, ss0 += t0 * t0, s1 += t1, ss1 += t1 * t1;
  }
  const double m0 = s0 / reps, m1 = s1 / reps;
  const double se0 = std::sqrt((ss0 / reps - m0 * m0) / reps);
  const double se1 = std::sqrt((ss1 / reps - m1 * m1) / reps);
  EXPECT_LT(std::abs(m0), 4 * se0);
  EXPECT_LT(std::abs(m1 - target), 4 * se1);
}
