#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lqcp/simgen.hpp"

using namespace lqcp;

namespace {

std::vector<std::vector<double>> sample_cov(const DataMatrix& x) {
  const std::size_t n = x.n(), p = x.p();
  std::vector<double> mean(p, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t l = 0; l < p; ++l) mean[l] += x(t, l) / n;
  std::vector<std::vector<double>> c(p, std::vector<double>(p, 0.0));
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) c[i][j] += (x(t, i) - mean[i]) * (x(t, j) - mean[j]) / (n - 1);
  return c;
}

double sigma(const CovarianceSpec& cov, std::size_t i, std::size_t j) {
  if (i == j) return 1.0;
  switch (cov.kind) {
    case CovarianceKind::Identity: return 0.0;
    case CovarianceKind::AR: return std::pow(cov.rho, std::abs(static_cast<double>(i) - static_cast<double>(j)));
    case CovarianceKind::CompoundSymmetric: return cov.rho;
  }
  return 0.0;
}

}  // namespace

TEST(Gaussian, Determinism) {
  const auto a = gen_gaussian(30, 4, CovarianceSpec::ar(0.5), 9);
  EXPECT_EQ(a, gen_gaussian(30, 4, CovarianceSpec::ar(0.5), 9));
  EXPECT_FALSE(a == gen_gaussian(30, 4, CovarianceSpec::ar(0.5), 10));
}

TEST(Gaussian, CrossCoordinateMoments) {
  const auto ar = gen_gaussian(5000, 2, CovarianceSpec::ar(0.5), 1);
  EXPECT_NEAR(sample_cov(ar)[0][1], 0.5, 0.03);
  const auto cs = gen_gaussian(5000, 5, CovarianceSpec::compound_symmetric(0.25), 2);
  const auto c = sample_cov(cs);
  double off = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) off += c[i][j] / std::sqrt(c[i][i] * c[j][j]) / 20.0;
  EXPECT_NEAR(off, 0.25, 0.03);
}

TEST(Gaussian, SampleCovarianceConverges) {
  const std::vector<CovarianceSpec> specs{CovarianceSpec::identity(), CovarianceSpec::ar(0.5), CovarianceSpec::ar(0.8),
                                          CovarianceSpec::compound_symmetric(0.3),
                                          CovarianceSpec::compound_symmetric(-0.05)};
  std::uint64_t seed = 100;
  for (const auto& cov : specs) {
    const auto c = sample_cov(gen_gaussian(20000, 10, cov, seed++));
    double frob = 0;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) frob += std::pow(c[i][j] - sigma(cov, i, j), 2);
    // Frobenius error of a 10 x 10 sample covariance at n = 20000 concentrates near 0.07-0.1.
    EXPECT_LT(std::sqrt(frob) / 10.0, 0.05) << static_cast<int>(cov.kind) << " " << cov.rho;
  }
}

TEST(Gaussian, InvalidCovariance) {
  EXPECT_THROW(gen_gaussian(5, 3, CovarianceSpec::ar(1.0), 1), Error);
  EXPECT_THROW(gen_gaussian(5, 3, CovarianceSpec::compound_symmetric(-0.5), 1), Error);
  EXPECT_NO_THROW(gen_gaussian(5, 3, CovarianceSpec::compound_symmetric(-0.49), 1));
}

TEST(MeanShifts, CumulativeAndValidated) {
  const auto x = validate_matrix({{0, 0}, {0, 0}, {0, 0}, {0, 0}});
  EXPECT_EQ(apply_mean_shifts(x, {}), x);
  const auto y = apply_mean_shifts(x, {{1, {1, 2}}, {3, {-1, 0}}});
  EXPECT_EQ(y, validate_matrix({{0, 0}, {1, 2}, {1, 2}, {0, 2}}));
  EXPECT_THROW(apply_mean_shifts(x, {{4, {1, 1}}}), Error);
  EXPECT_THROW(apply_mean_shifts(x, {{2, {1, 1}}, {2, {1, 1}}}), Error);
  EXPECT_THROW(apply_mean_shifts(x, {{2, {1}}}), Error);
}

TEST(MeanShifts, OppositeShiftsRestoreLevel) {
  const auto x = validate_matrix(std::vector<std::vector<double>>(120, {0.0, 0.0, 0.0}));
  const auto th = block_shift(3, 2, 0.7);
  std::vector<double> neg{-0.7, -0.7, 0.0};
  const auto y = apply_mean_shifts(x, {{30, th}, {60, neg}, {90, th}});
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(y(0, l), y(70, l));
    EXPECT_EQ(y(40, l), y(100, l));
  }
  EXPECT_DOUBLE_EQ(power_shift(4, 2, 2.0)[0], 1.0);
  EXPECT_EQ(power_shift(4, 2, 2.0)[3], 0.0);
}

TEST(MeanShifts, CommuteWithPermutation) {
  const auto x = gen_gaussian(10, 3, CovarianceSpec::identity(), 3);
  const std::vector<std::size_t> perm{2, 0, 1};
  auto permute = [&](const DataMatrix& m) {
    std::vector<double> v(m.values().size());
    for (std::size_t t = 0; t < m.n(); ++t)
      for (std::size_t l = 0; l < 3; ++l) v[t * 3 + l] = m(t, perm[l]);
    return DataMatrix(m.n(), 3, v);
  };
  const std::vector<double> d{1, 2, 3};
  const std::vector<double> dp{3, 1, 2};
  EXPECT_EQ(permute(apply_mean_shifts(x, {{4, d}})), apply_mean_shifts(permute(x), {{4, dp}}));
}

TEST(Vech, OrderingAndInverse) {
  SquareMatrix a{3, {0, 1, 0, 1, 0, 1, 0, 1, 0}};
  EXPECT_EQ(vech(a), (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(unvech(vech(a)), a);
  SquareMatrix two{2, {0, 1, 1, 0}};
  EXPECT_EQ(vech(two).size(), 1u);
  SquareMatrix asym{2, {0, 1, 0, 0}};
  EXPECT_THROW(vech(asym), Error);
  SquareMatrix diag{2, {1, 0, 0, 0}};
  EXPECT_THROW(vech(diag), Error);
  EXPECT_THROW(unvech({1, 2}), Error);
  EXPECT_EQ(vech_nodes(45), 10u);
}

TEST(Sbm, EntriesAndFrequencies) {
  const auto spec = SbmSpec::first_r_singletons(10, 10);
  const std::size_t n = 5000;
  const auto x = gen_sbm_series(n, spec, std::vector<double>(n, 0.1), 4);
  ASSERT_EQ(x.p(), 45u);
  double total = 0;
  for (double v : x.values()) {
    EXPECT_TRUE(v == 0.0 || v == 1.0);
    total += v;
  }
  EXPECT_NEAR(total / (n * 45.0), 0.1, 0.01);
  const double se = std::sqrt(0.1 * 0.9 / n);
  for (std::size_t k = 0; k < 45; ++k) {
    double col = 0;
    for (std::size_t t = 0; t < n; ++t) col += x(t, k);
    EXPECT_LT(std::abs(col / n - 0.1), 4 * se) << k;
  }
}

TEST(Sbm, UnassignedNodesAndRangeChecks) {
  const auto spec = SbmSpec::first_r_singletons(5, 3);
  EXPECT_EQ(spec.mean(0, 1, 0.5), 0.5);
  EXPECT_EQ(spec.mean(0, 4, 0.5), 0.0);
  EXPECT_EQ(spec.mean(2, 2, 0.5), 0.0);
  EXPECT_THROW(gen_sbm_series(3, spec, {0.5, 1.2, 0.5}, 1), Error);
  EXPECT_THROW(gen_sbm_series(3, spec, {0.5, 0.5}, 1), Error);
}
