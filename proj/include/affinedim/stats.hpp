#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "affinedim/common.hpp"

namespace affinedim {

class Rng;

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y ≈ slope·x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
/// Linear-interpolated empirical quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Symmetric matrix of exp(−dist(i, j)² / σ²) over n pooled points.
Matrix gaussian_gram(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                     double sigma);

/// Biased (V-statistic) MMD between index sets of a pooled Gram matrix,
/// returned as sqrt(max(MMD², 0)).
double mmd_from_gram(const Matrix& gram, std::span<const std::size_t> xs,
                     std::span<const std::size_t> ys);

struct MmdTest {
  double statistic = 0.0;
  double null_q95 = 0.0;
  std::vector<double> null;
  /// statistic below the 95th percentile of the null (or exactly 0).
  bool pass = false;
};

/// Two-sample test on a pooled Gram matrix whose first nx rows are X and the
/// rest Y. The null distribution comes from `resamples` random relabellings
/// of the pooled sample into groups of the original sizes.
MmdTest mmd_resampling_test(const Matrix& gram, std::size_t nx, int resamples, Rng& rng);

}  // namespace affinedim
