#include "affinedim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "affinedim/rng.hpp"

namespace affinedim {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), "fit_line: x and y differ in length");
  require(x.size() >= 2, "fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, "fit_line: x values are all equal");
  LinearFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

Matrix gaussian_gram(std::size_t n, const std::function<double(std::size_t, std::size_t)>& dist,
                     double sigma) {
  require(sigma > 0.0, "gaussian_gram: sigma must be positive");
  const auto N = static_cast<Eigen::Index>(n);
  Matrix K(N, N);
  const double inv = 1.0 / (sigma * sigma);
  for (Eigen::Index i = 0; i < N; ++i) {
    K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double r = dist(i, j);
      K(i, j) = K(j, i) = std::exp(-r * r * inv);
    }
  }
  return K;
}

namespace {

double block_mean(const Matrix& K, std::span<const std::size_t> a, std::span<const std::size_t> b) {
  double s = 0.0;
  for (auto i : a) {
    const double* col = K.data() + static_cast<Eigen::Index>(i) * K.rows();
    for (auto j : b) s += col[j];
  }
  return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

double mmd_from_gram(const Matrix& gram, std::span<const std::size_t> xs,
                     std::span<const std::size_t> ys) {
  require(!xs.empty() && !ys.empty(), "mmd: empty sample");
  const double v = block_mean(gram, xs, xs) + block_mean(gram, ys, ys) - 2.0 * block_mean(gram, xs, ys);
  return std::sqrt(std::max(v, 0.0));
}

MmdTest mmd_resampling_test(const Matrix& gram, std::size_t nx, int resamples, Rng& rng) {
  const auto n = static_cast<std::size_t>(gram.rows());
  require(nx >= 1 && nx < n, "mmd test: both groups must be non-empty");
  require(resamples >= 1, "mmd test: need at least one resample");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  MmdTest out;
  out.statistic = mmd_from_gram(gram, std::span(idx).first(nx), std::span(idx).subspan(nx));
  out.null.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    // Fisher-Yates with the local generator keeps the test reproducible.
    for (std::size_t i = n - 1; i > 0; --i) std::swap(idx[i], idx[rng.below(i + 1)]);
    out.null.push_back(mmd_from_gram(gram, std::span(idx).first(nx), std::span(idx).subspan(nx)));
  }
  out.null_q95 = quantile(out.null, 0.95);
  // Identical samples give an all-zero null; they pass.
  out.pass = out.statistic < out.null_q95 || out.statistic == 0.0;
  return out;
}

}  // namespace affinedim
