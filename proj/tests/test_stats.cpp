#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "affinedim/rng.hpp"
#include "affinedim/stats.hpp"

using namespace affinedim;

TEST(Stats, FitLineExact) {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-15);
  EXPECT_NEAR(f.intercept, 1.0, 1e-15);
  EXPECT_NEAR(f.r2, 1.0, 1e-15);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), Error);
}

TEST(Stats, Quantiles) {
  const std::vector<double> v{4, 1, 3, 2};
  EXPECT_EQ(median(v), 2.5);
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 4.0);
  EXPECT_THROW(median({}), Error);
}

namespace {

MmdTest shift_test(double shift, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> pts;
  for (int i = 0; i < 200; ++i) pts.push_back(rng.normal());
  for (int i = 0; i < 200; ++i) pts.push_back(rng.normal() + shift);
  const Matrix K = gaussian_gram(pts.size(), [&](std::size_t i, std::size_t j) { return std::abs(pts[i] - pts[j]); }, 1.0);
  return mmd_resampling_test(K, 200, 200, rng);
}

}  // namespace

TEST(Mmd, IdenticalGroupsGiveZero) {
  const Matrix K = Matrix::Ones(6, 6);
  const std::vector<std::size_t> a{0, 1, 2}, b{3, 4, 5};
  EXPECT_EQ(mmd_from_gram(K, a, b), 0.0);
}

TEST(Mmd, DetectsShiftAndAcceptsNull) {
  EXPECT_FALSE(shift_test(1.0, 1).pass);
  int passes = 0;
  for (std::uint64_t s = 0; s < 20; ++s) passes += shift_test(0.0, 100 + s).pass;
  EXPECT_GE(passes, 16);
}

TEST(Mmd, PointMassPasses) {
  Rng rng(3);
  const auto t = mmd_resampling_test(Matrix::Ones(8, 8), 4, 50, rng);
  EXPECT_EQ(t.statistic, 0.0);
  EXPECT_TRUE(t.pass);
}
