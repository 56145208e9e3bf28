#include "affinedim/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "affinedim/exterior.hpp"
#include "affinedim/rng.hpp"

namespace affinedim {

Vector singular_values(const Matrix& M) {
  require(M.rows() == M.cols() && M.rows() > 0, "singular_values: matrix must be square");
  Vector sv = Eigen::JacobiSVD<Matrix>(M).singularValues();
  require(sv(0) > 0.0 && sv(sv.size() - 1) / sv(0) >= kInvertibilityTolerance,
          "singular_values: matrix is singular within tolerance");
  return sv;
}

namespace {

struct StreamResult {
  Vector log_sum;             // total over all steps of the stream
  std::vector<Vector> rates;  // per batch
};

StreamResult run_stream(std::span<const Matrix> matrices, const Categorical& pick,
                        std::int64_t steps, int batches, std::uint64_t seed,
                        std::uint64_t stream) {
  const auto d = matrices.front().rows();
  Rng rng(seed, stream);
  Matrix Q = Matrix::Identity(d, d);
  StreamResult out{Vector::Zero(d), {}};
  Eigen::HouseholderQR<Matrix> qr(d, d);
  for (int b = 0; b < batches; ++b) {
    const std::int64_t len = steps / batches + (b < steps % batches ? 1 : 0);
    Vector acc = Vector::Zero(d);
    for (std::int64_t s = 0; s < len; ++s) {
      qr.compute(matrices[pick(rng)] * Q);
      Q = qr.householderQ();
      const auto& R = qr.matrixQR();
      for (Eigen::Index i = 0; i < d; ++i) acc(i) += std::log(std::abs(R(i, i)));
    }
    if (!acc.allFinite())
      throw Error("estimate_lyapunov: overflow guard tripped (non-finite log growth)");
    out.log_sum += acc;
    out.rates.push_back(acc / static_cast<double>(std::max<std::int64_t>(len, 1)));
  }
  return out;
}

}  // namespace

LyapunovEstimate estimate_lyapunov(std::span<const Matrix> matrices, std::span<const double> p,
                                   const LyapunovOptions& options) {
  require(!matrices.empty(), "estimate_lyapunov: no matrices");
  require(matrices.size() == p.size(), "estimate_lyapunov: one probability per matrix required");
  validate_probabilities(std::vector<double>(p.begin(), p.end()));
  require(options.n_steps >= 1000, "estimate_lyapunov: n_steps must be >= 1000");
  require(options.n_substreams >= 1, "estimate_lyapunov: n_substreams must be >= 1");
  const auto d = matrices.front().rows();
  for (const auto& M : matrices) {
    require(M.rows() == d && M.cols() == d, "estimate_lyapunov: matrices must share a square shape");
    singular_values(M);
  }

  const Categorical pick(p);
  const int streams = options.n_substreams;
  const int per_stream_batches = std::max(1, (options.n_batches + streams - 1) / streams);
  std::vector<StreamResult> results(streams);
  parallel_for(streams, options.threads, [&](std::size_t s) {
    const std::int64_t steps =
        options.n_steps / streams + (static_cast<std::int64_t>(s) < options.n_steps % streams ? 1 : 0);
    results[s] = run_stream(matrices, pick, steps, per_stream_batches, options.seed, s);
  });

  Vector total = Vector::Zero(d);
  std::vector<Vector> rates;
  for (const auto& r : results) {
    total += r.log_sum;
    rates.insert(rates.end(), r.rates.begin(), r.rates.end());
  }
  const Vector raw = total / static_cast<double>(options.n_steps);

  std::vector<Eigen::Index> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw(a) > raw(b); });

  LyapunovEstimate est;
  est.gammas.resize(d);
  est.stderr_.resize(d);
  const auto B = static_cast<Eigen::Index>(rates.size());
  est.batch_rates.resize(B, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    est.gammas(j) = raw(order[j]);
    for (Eigen::Index b = 0; b < B; ++b) est.batch_rates(b, j) = rates[b](order[j]);
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto col = est.batch_rates.col(j);
    const double mean = col.mean();
    const double var = B > 1 ? (col.array() - mean).square().sum() / static_cast<double>(B - 1) : 0.0;
    est.stderr_(j) = std::sqrt(var / static_cast<double>(B));
  }
  return est;
}

double entropy(std::span<const double> p) {
  require(!p.empty(), "entropy: empty probability vector");
  double h = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x > 0.0, "entropy: weights must be positive");
    h -= x * std::log(x);
  }
  return std::max(h, 0.0);
}

Multiplicity multiplicity_m(const Vector& gammas, double tol_cluster) {
  const auto d = static_cast<int>(gammas.size());
  require(d >= 1, "multiplicity: empty spectrum");
  Multiplicity out;
  out.tol_cluster = tol_cluster;
  const double bottom = gammas(d - 1);
  int m = 1;
  while (m < d && gammas(d - 1 - m) - bottom <= tol_cluster) ++m;
  out.m = m;
  out.gap = m < d ? gammas(d - 1 - m) - bottom : 0.0;
  out.ambiguous = m < d && out.gap > tol_cluster && out.gap < 2.0 * tol_cluster;
  return out;
}

int k_index(double h, const Vector& gammas) {
  int k = 0;
  double partial = h;
  for (Eigen::Index i = 0; i < gammas.size(); ++i) {
    partial += gammas(i);
    if (partial > 0.0) k = static_cast<int>(i) + 1;
  }
  return k;
}

double lyapunov_dimension(double h, const Vector& gammas) {
  const auto d = static_cast<int>(gammas.size());
  require(d >= 1, "lyapunov_dimension: empty spectrum");
  const int k = k_index(h, gammas);
  if (k < d) {
    require(gammas(k) < 0.0, "lyapunov_dimension: undefined for non-negative exponent gamma_{k+1}");
    const double partial = h + gammas.head(k).sum();
    return std::max(0.0, k - partial / gammas(k));
  }
  const double sum = gammas.sum();
  require(sum < 0.0, "lyapunov_dimension: undefined for non-negative exponent sum");
  return std::max(0.0, -d * h / sum);
}

LyapunovReport lyapunov_report(const IFSSpec& spec, const LyapunovOptions& options,
                               double tol_cluster) {
  const auto mats = spec.matrices();
  const auto p = spec.probabilities();
  const auto est = estimate_lyapunov(mats, p, options);

  LyapunovReport r;
  r.gammas = est.gammas;
  r.stderr_ = est.stderr_;
  r.h = entropy(p);
  const double tol = tol_cluster > 0.0 ? tol_cluster : std::max(5.0 * est.stderr_.maxCoeff(), 1e-3);
  r.multiplicity = multiplicity_m(r.gammas, tol);
  r.k = k_index(r.h, r.gammas);
  // The exponent sum is known exactly: Σ p_i log|det A_i|.
  double log_det = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) log_det += p[i] * std::log(std::abs(mats[i].determinant()));
  try {
    if (r.k < spec.d() || log_det < 0.0) r.D = lyapunov_dimension(r.h, r.gammas);
  } catch (const Error&) {
    r.D.reset();
  }
  r.n_steps = options.n_steps;
  r.seed = options.seed;

  // Batch-level D values carry the correlation between exponents.
  const auto B = est.batch_rates.rows();
  std::vector<double> per_batch;
  try {
    for (Eigen::Index b = 0; b < B; ++b) {
      Vector g = est.batch_rates.row(b).transpose();
      std::sort(g.data(), g.data() + g.size(), std::greater<>());
      per_batch.push_back(lyapunov_dimension(r.h, g));
    }
  } catch (const Error&) {
    per_batch.clear();
  }
  if (r.D && per_batch.size() > 1) {
    const double mean = std::accumulate(per_batch.begin(), per_batch.end(), 0.0) / per_batch.size();
    double var = 0.0;
    for (double x : per_batch) var += (x - mean) * (x - mean);
    var /= static_cast<double>(per_batch.size() - 1);
    r.D_stderr = std::sqrt(var / static_cast<double>(per_batch.size()));
  }
  return r;
}

}  // namespace affinedim
