#include "affinedim/furstenberg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "affinedim/exterior.hpp"
#include "affinedim/rng.hpp"

namespace affinedim {

// ---------------------------------------------------------------------------
// Chain sampling

GrassmannCloud sample_chain(std::span<const Matrix> step, std::span<const double> p, int m,
                            const ChainOptions& options) {
  require(!step.empty() && step.size() == p.size(), "sample_chain: one probability per matrix");
  validate_probabilities(std::vector<double>(p.begin(), p.end()));
  const int d = static_cast<int>(step.front().rows());
  require(m >= 1 && m < d, "sample_chain: need 1 <= m < d");
  require(options.burn_in >= 0 && options.n >= 1 && options.stride >= 1 && options.n_chains >= 1,
          "sample_chain: need burn_in >= 0, n >= 1, stride >= 1");
  Subspace start = options.start.value_or(Subspace(Matrix::Identity(d, m)));
  require(start.d() == d && start.m() == m, "sample_chain: start subspace has the wrong shape");

  const Categorical pick(p);
  const int chains = options.n_chains;
  std::vector<std::vector<Subspace>> parts(chains);
  parallel_for(chains, options.threads, [&](std::size_t c) {
    const std::int64_t keep = options.n / chains + (static_cast<std::int64_t>(c) < options.n % chains ? 1 : 0);
    Rng rng(options.seed, c);
    Subspace W = start;
    for (std::int64_t k = 0; k < options.burn_in; ++k) W = act(step[pick(rng)], W);
    auto& out = parts[c];
    out.reserve(keep);
    for (std::int64_t k = 0; k < keep; ++k) {
      for (std::int64_t s = 0; s < options.stride; ++s) W = act(step[pick(rng)], W);
      out.push_back(W);
    }
  });

  GrassmannCloud cloud;
  cloud.d = d;
  cloud.m = m;
  cloud.provenance = {options.seed, options.burn_in, options.stride, chains};
  cloud.points.reserve(options.n);
  for (auto& part : parts)
    for (auto& W : part) cloud.points.push_back(std::move(W));
  return cloud;
}

GrassmannCloud sample_chain(const IFSSpec& spec, int m, const ChainOptions& options) {
  const auto inv = spec.inverse_matrices();
  const auto p = spec.probabilities();
  return sample_chain(inv, p, m, options);
}

// ---------------------------------------------------------------------------
// Stationarity

namespace {

// Points of a metric space flattened to fixed-width rows.
struct PackedPoints {
  int width = 0;
  std::vector<double> data;
  std::size_t size() const { return width ? data.size() / width : 0; }
  const double* at(std::size_t i) const { return data.data() + i * width; }
  void push(const double* p) { data.insert(data.end(), p, p + width); }
};


MmdTest pooled_test(const PackedPoints& pooled, std::size_t nx,
                    const std::function<double(const double*, const double*)>& metric,
                    int resamples, Rng& rng, double* sigma_out) {
  const std::size_t n = pooled.size();
  std::vector<double> pair_d;
  pair_d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pair_d.push_back(metric(pooled.at(i), pooled.at(j)));
  double sigma = pair_d.empty() ? 0.0 : median(pair_d);
  // A point-mass sample has no natural bandwidth; any positive value works.
  if (!(sigma > 1e-9)) sigma = 1.0;
  if (sigma_out) *sigma_out = sigma;
  const auto N = static_cast<Eigen::Index>(n);
  Matrix K(N, N);
  const double inv = 1.0 / (sigma * sigma);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    K(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < N; ++j) {
      const double r = pair_d[k++];
      K(i, j) = K(j, i) = std::exp(-r * r * inv);
    }
  }
  return mmd_resampling_test(K, nx, resamples, rng);
}

// Splits n_probe·2 distinct cloud indices into an observed half and a
// half that gets pushed forward.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> probe_indices(std::size_t n,
                                                                             std::size_t n_probe,
                                                                             Rng& rng) {
  require(n >= 2, "stationarity: cloud needs at least two points");
  if (n_probe == 0 || 2 * n_probe > n) n_probe = n / 2;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < 2 * n_probe; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
  return {std::vector<std::size_t>(idx.begin(), idx.begin() + n_probe),
          std::vector<std::size_t>(idx.begin() + n_probe, idx.begin() + 2 * n_probe)};
}

}  // namespace

StationarityResult stationarity_test(const GrassmannCloud& cloud, const IFSSpec& spec,
                                     const StationarityOptions& options) {
  require(!cloud.points.empty(), "stationarity: empty cloud");
  require(spec.d() == cloud.d, "stationarity: spec and cloud dimensions differ");
  const auto inv = spec.inverse_matrices();
  const auto p = spec.probabilities();
  const Categorical pick(p);
  Rng rng(options.seed, 0);

  StationarityResult out;
  if (cloud.size() == 1) {
    // Single point: compare it with its own pushforward.
    const Subspace pushed = act(inv[pick(rng)], cloud.points[0]);
    out.gap = dist(pushed, cloud.points[0]) > 0.0 ? std::sqrt(2.0 - 2.0 * std::exp(-1.0)) : 0.0;
    out.sigma = 1.0;
    return out;
  }
  const auto [xs, ys] = probe_indices(cloud.size(), options.n_probe, rng);
  PackedPoints pooled{cloud.d * cloud.m, {}};
  for (auto i : xs) pooled.push(cloud.points[i].frame().data());
  for (auto j : ys) pooled.push(act(inv[pick(rng)], cloud.points[j]).frame().data());
  const int d = cloud.d, m = cloud.m;
  out.test = pooled_test(
      pooled, xs.size(), [d, m](const double* a, const double* b) { return frame_dist(a, b, d, m); },
      options.resamples, rng, &out.sigma);
  out.gap = out.test.statistic;
  return out;
}

double stationarity_gap(const GrassmannCloud& cloud, const IFSSpec& spec,
                        const StationarityOptions& options) {
  StationarityOptions quick = options;
  quick.resamples = 1;
  return stationarity_test(cloud, spec, quick).gap;
}

StationarityResult projective_stationarity_test(const GrassmannCloud& cloud, const IFSSpec& spec,
                                                const StationarityOptions& options) {
  require(cloud.size() >= 2, "stationarity: cloud needs at least two points");
  std::vector<Matrix> induced;
  for (const auto& A : spec.inverse_matrices()) induced.push_back(compound(A, cloud.m).entries);
  const Categorical pick(spec.probabilities());
  Rng rng(options.seed, 1);
  const auto [xs, ys] = probe_indices(cloud.size(), options.n_probe, rng);
  const int q = wedge_dimension(cloud.d, cloud.m);
  PackedPoints pooled{q, {}};
  for (auto i : xs) pooled.push(psi(cloud.points[i]).direction.coeffs.data());
  for (auto j : ys) {
    Vector xi = induced[pick(rng)] * psi(cloud.points[j]).direction.coeffs;
    xi.normalize();
    pooled.push(xi.data());
  }
  const int d = cloud.d, m = cloud.m;
  StationarityResult out;
  out.test = pooled_test(
      pooled, xs.size(),
      [d, m, q](const double* a, const double* b) {
        Vector va = Eigen::Map<const Vector>(a, q), vb = Eigen::Map<const Vector>(b, q);
        return proj_dist(ProjectivePoint{MultiVector(d, m, va)}, ProjectivePoint{MultiVector(d, m, vb)});
      },
      options.resamples, rng, &out.sigma);
  out.gap = out.test.statistic;
  return out;
}

MmdTest cloud_mmd_test(const GrassmannCloud& a, const GrassmannCloud& b,
                       const StationarityOptions& options) {
  require(a.d == b.d && a.m == b.m, "cloud mmd: clouds have different shapes");
  require(!a.points.empty() && !b.points.empty(), "cloud mmd: empty cloud");
  Rng rng(options.seed, 2);
  auto draw = [&](const GrassmannCloud& c) {
    std::size_t k = options.n_probe == 0 ? c.size() : std::min(options.n_probe, c.size());
    std::vector<std::size_t> idx(c.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(c.size() - i)]);
    idx.resize(k);
    return idx;
  };
  const auto ia = draw(a);
  const auto ib = draw(b);
  PackedPoints pooled{a.d * a.m, {}};
  for (auto i : ia) pooled.push(a.points[i].frame().data());
  for (auto i : ib) pooled.push(b.points[i].frame().data());
  const int d = a.d, m = a.m;
  return pooled_test(
      pooled, ia.size(), [d, m](const double* x, const double* y) { return frame_dist(x, y, d, m); },
      std::max(options.resamples, 1), rng, nullptr);
}

// ---------------------------------------------------------------------------
// Correlation dimension

CorrelationDimension correlation_dimension(const GrassmannCloud& cloud,
                                           const CorrelationOptions& options) {
  const std::size_t n = cloud.size();
  require(n >= 1000, "correlation_dimension: need at least 10^3 points");
  require(options.n_r >= 2, "correlation_dimension: need at least two radii");
  const int d = cloud.d, m = cloud.m, w = d * m;
  std::vector<double> packed(n * w);
  for (std::size_t i = 0; i < n; ++i)
    std::copy_n(cloud.points[i].frame().data(), w, packed.data() + i * w);
  auto frame = [&](std::size_t i) { return packed.data() + i * w; };

  const int threads = std::max(options.threads, 1);
  const std::size_t blocks = static_cast<std::size_t>(threads) * 8;

  // Pass 1: nearest-neighbour distances and diameter.
  std::vector<std::vector<double>> nn_parts(blocks, std::vector<double>(n, 2.0));
  std::vector<double> diam_parts(blocks, 0.0);
  parallel_for(blocks, threads, [&](std::size_t b) {
    auto& nn = nn_parts[b];
    double diam = 0.0;
    for (std::size_t i = b; i < n; i += blocks) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = frame_dist(frame(i), frame(j), d, m);
        nn[i] = std::min(nn[i], r);
        nn[j] = std::min(nn[j], r);
        diam = std::max(diam, r);
      }
    }
    diam_parts[b] = diam;
  });
  std::vector<double> nn(n, 2.0);
  for (const auto& part : nn_parts)
    for (std::size_t i = 0; i < n; ++i) nn[i] = std::min(nn[i], part[i]);
  nn_parts.clear();

  CorrelationDimension out;
  out.diameter = *std::max_element(diam_parts.begin(), diam_parts.end());
  out.median_nn = median(nn);
  out.n_pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  if (out.diameter <= 0.0) {
    out.degenerate = true;
    return out;
  }
  out.r_lo = options.r_lo > 0.0 ? options.r_lo : std::max(2.0 * out.median_nn, 1e-12 * out.diameter);
  out.r_hi = options.r_hi > 0.0 ? options.r_hi : 0.25 * out.diameter;
  require(out.r_lo > 0.0 && out.r_lo < out.r_hi, "correlation_dimension: need 0 < r_lo < r_hi");

  const int nr = options.n_r;
  out.radii.resize(nr);
  const double llo = std::log(out.r_lo), lhi = std::log(out.r_hi);
  for (int k = 0; k < nr; ++k) out.radii[k] = std::exp(llo + (lhi - llo) * k / (nr - 1));

  // Pass 2: pair counts below each radius (integer sums, order independent).
  std::vector<std::vector<std::int64_t>> hist(blocks, std::vector<std::int64_t>(nr + 1, 0));
  parallel_for(blocks, threads, [&](std::size_t b) {
    auto& h = hist[b];
    for (std::size_t i = b; i < n; i += blocks)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double r = frame_dist(frame(i), frame(j), d, m);
        if (r > out.r_hi) continue;
        ++h[std::lower_bound(out.radii.begin(), out.radii.end(), r) - out.radii.begin()];
      }
  });
  out.counts.assign(nr, 0);
  std::int64_t running = 0;
  for (int k = 0; k < nr; ++k) {
    for (std::size_t b = 0; b < blocks; ++b) running += hist[b][k];
    out.counts[k] = running;
  }
  std::vector<double> lx, ly;
  out.fractions.resize(nr);
  for (int k = 0; k < nr; ++k) {
    out.fractions[k] = static_cast<double>(out.counts[k]) / static_cast<double>(out.n_pairs);
    if (out.counts[k] > 0) {
      lx.push_back(std::log(out.radii[k]));
      ly.push_back(std::log(out.fractions[k]));
    }
  }
  if (lx.size() >= 2) {
    out.fit = fit_line(lx, ly);
    out.estimate = out.fit.slope;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Irreducibility

std::string to_string(IrreducibilityCertificate::Verdict v) {
  switch (v) {
    case IrreducibilityCertificate::Verdict::IrreducibleCertified: return "irreducible-certified";
    case IrreducibilityCertificate::Verdict::ReducibleCertified: return "reducible-certified";
    case IrreducibilityCertificate::Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

// Orthonormal basis of a growing subspace of R^N (modified Gram-Schmidt
// with one re-orthogonalization pass).
class SpanBuilder {
 public:
  explicit SpanBuilder(Eigen::Index dim) : dim_(dim) {}
  bool add(Vector v, double tol = 1e-9) {
    const double scale = v.norm();
    if (scale == 0.0) return false;
    v /= scale;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis_) v -= b.dot(v) * b;
    const double r = v.norm();
    if (r <= tol) return false;
    basis_.push_back(v / r);
    return true;
  }
  int rank() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vector>& basis() const { return basis_; }
  Eigen::Index dim() const { return dim_; }

 private:
  Eigen::Index dim_;
  std::vector<Vector> basis_;
};

Vector vec(const Matrix& M) { return Eigen::Map<const Vector>(M.data(), M.size()); }

// Orthonormal basis of span{B v : B in algebra, v in V}.
Matrix algebra_orbit(const std::vector<Matrix>& algebra, const Matrix& V) {
  const auto q = V.rows();
  Matrix stacked(q, static_cast<Eigen::Index>(algebra.size()) * V.cols());
  for (std::size_t i = 0; i < algebra.size(); ++i)
    stacked.middleCols(static_cast<Eigen::Index>(i) * V.cols(), V.cols()) = algebra[i] * V;
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > 1e-9 * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix orthonormal_complement(const Matrix& S) {
  const auto q = S.rows();
  Eigen::HouseholderQR<Matrix> qr(S);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(q - S.cols());
}

// Candidate seeds for invariant subspaces: real eigenvectors and real
// 2-planes of complex pairs.
std::vector<Matrix> eigen_candidates(const Matrix& X) {
  Eigen::EigenSolver<Matrix> es(X);
  std::vector<Matrix> out;
  const double scale = std::max(1.0, X.norm());
  for (Eigen::Index k = 0; k < X.rows(); ++k) {
    const auto lambda = es.eigenvalues()(k);
    const Eigen::VectorXcd v = es.eigenvectors().col(k);
    if (std::abs(lambda.imag()) <= 1e-9 * scale) {
      out.push_back(v.real());
    } else if (lambda.imag() > 0.0) {
      Matrix plane(X.rows(), 2);
      plane << v.real(), v.imag();
      out.push_back(plane);
    }
  }
  return out;
}

}  // namespace

bool is_invariant(std::span<const Matrix> matrices, int m, const Matrix& basis) {
  if (basis.cols() == 0) return false;
  const Matrix P = basis * basis.transpose();
  for (const auto& A : matrices) {
    const Matrix C = compound_unchecked(A, m).entries;
    const Matrix image = C * basis;
    const Matrix leak = image - P * image;
    if (leak.norm() > 1e-8 * std::max(C.norm(), 1e-300)) return false;
  }
  return true;
}

IrreducibilityCertificate irreducibility_check(std::span<const Matrix> matrices, int m, int L_max,
                                               std::uint64_t seed) {
  require(!matrices.empty(), "irreducibility: no matrices");
  const int d = static_cast<int>(matrices.front().rows());
  const int q = wedge_dimension(d, m);
  require(q <= 70, "irreducibility: q = C(d, m) too large for dense rank computation");
  std::vector<Matrix> gens;
  for (const auto& A : matrices) {
    require(A.rows() == d && A.cols() == d, "irreducibility: matrices must share shape d×d");
    gens.push_back(compound(A, m).entries);
  }

  IrreducibilityCertificate cert;
  cert.q = q;
  const int full = q * q;
  const int limit = L_max > 0 ? L_max : full;
  SpanBuilder span(full);
  std::vector<Matrix> algebra;  // normalized elements, parallel to span basis
  span.add(vec(Matrix::Identity(q, q)));
  algebra.push_back(Matrix::Identity(q, q) / std::sqrt(static_cast<double>(q)));
  std::vector<Matrix> frontier{Matrix::Identity(q, q)};
  for (int L = 1; L <= limit && span.rank() < full; ++L) {
    std::vector<Matrix> next;
    for (const auto& F : frontier)
      for (const auto& G : gens) {
        Matrix X = G * F;
        X /= X.norm();
        if (span.add(vec(X))) {
          algebra.push_back(X);
          next.push_back(std::move(X));
        }
      }
    cert.words_used = L;
    if (next.empty()) break;
    frontier = std::move(next);
  }
  cert.algebra_rank = span.rank();
  if (cert.algebra_rank == full) {
    cert.verdict = IrreducibilityCertificate::Verdict::IrreducibleCertified;
    return cert;
  }

  // The algebra is a proper subspace of End(Λ^m). Look for an invariant
  // subspace: the orbit algebra·v of any vector is invariant, and
  // eigenvectors of a random element seed the small orbits.
  std::vector<Matrix> algebra_t;
  for (const auto& X : algebra) algebra_t.push_back(X.transpose());
  Rng rng(seed, 7);
  std::optional<Matrix> best;
  for (int attempt = 0; attempt < 4 && !best; ++attempt) {
    Matrix X = Matrix::Zero(q, q);
    for (const auto& B : algebra) X += rng.normal() * B;
    for (const auto& seed_space : eigen_candidates(X)) {
      const Matrix S = algebra_orbit(algebra, seed_space);
      if (S.cols() > 0 && S.cols() < q && is_invariant(matrices, m, S)) {
        if (!best || S.cols() < best->cols()) best = S;
      }
    }
    // Invariant subspaces of the transposed algebra give invariant
    // orthogonal complements for the original one.
    for (const auto& seed_space : eigen_candidates(X.transpose())) {
      const Matrix St = algebra_orbit(algebra_t, seed_space);
      if (St.cols() == 0 || St.cols() >= q) continue;
      const Matrix S = orthonormal_complement(St);
      if (is_invariant(matrices, m, S)) {
        if (!best || S.cols() < best->cols()) best = S;
      }
    }
  }
  if (best) {
    cert.verdict = IrreducibilityCertificate::Verdict::ReducibleCertified;
    cert.witness = std::move(best);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Contraction and the bottom singular subspace

ContractionResult contraction_check(const IFSSpec& spec, int m, const LyapunovOptions& options) {
  require(m >= 1 && m < spec.d(), "contraction_check: need 1 <= m < d");
  std::vector<Matrix> induced;
  for (const auto& A : spec.inverse_matrices()) induced.push_back(compound(A, m).entries);
  const auto p = spec.probabilities();
  const auto est = estimate_lyapunov(induced, p, options);
  ContractionResult r;
  r.eta1 = est.gammas(0);
  r.eta2 = est.gammas(1);
  r.eta_gap = r.eta1 - r.eta2;
  const Vector gaps = est.batch_rates.col(0) - est.batch_rates.col(1);
  const auto B = gaps.size();
  if (B > 1) {
    const double mean = gaps.mean();
    const double var = (gaps.array() - mean).square().sum() / static_cast<double>(B - 1);
    r.gap_stderr = std::sqrt(var / static_cast<double>(B));
  }
  r.contracting = r.eta_gap > std::max(3.0 * r.gap_stderr, kContractionFloor);
  return r;
}

BottomSubspaceTrack bottom_subspace_track(const IFSSpec& spec, int m, std::int64_t n_steps,
                                          std::uint64_t seed) {
  const int d = spec.d();
  require(m >= 1 && m < d, "bottom_subspace_track: need 1 <= m < d");
  require(n_steps >= 2, "bottom_subspace_track: need at least two steps");
  const auto mats = spec.matrices();
  const Categorical pick(spec.probabilities());
  Rng rng(seed, 0);

  // A_{ω|n}^T = A_{ω_{n−1}}^T···A_{ω_0}^T = Q_n R_n. The left singular
  // vectors of A_{ω|n} are the right singular vectors of R_n.
  Matrix Q = Matrix::Identity(d, d);
  Matrix R = Matrix::Identity(d, d);
  Vector log_diag = Vector::Zero(d);
  BottomSubspaceTrack out;
  out.subspaces.reserve(n_steps);
  Eigen::HouseholderQR<Matrix> qr(d, d);
  for (std::int64_t n = 1; n <= n_steps; ++n) {
    qr.compute(mats[pick(rng)].transpose() * Q);
    Q = qr.householderQ();
    const Matrix Rstep = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) log_diag(i) += std::log(std::abs(Rstep(i, i)));
    R = Rstep * R;
    R /= R.cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeFullV);
    out.subspaces.push_back(Subspace::from_orthonormal(svd.matrixV().rightCols(m)));
  }
  for (std::size_t n = 0; n + 1 < out.subspaces.size(); ++n)
    out.step_dists.push_back(dist(out.subspaces[n], out.subspaces[n + 1]));
  for (std::size_t n = 1; 2 * n <= out.subspaces.size(); ++n)
    out.doubling_dists.push_back(dist(out.subspaces[n - 1], out.subspaces[2 * n - 1]));

  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < out.step_dists.size(); ++n)
    if (out.step_dists[n] > 1e-13) {
      xs.push_back(static_cast<double>(n + 1));
      ys.push_back(std::log(out.step_dists[n]));
    }
  if (xs.size() >= 3) out.decay_rate = -fit_line(xs, ys).slope;

  std::vector<double> sorted(log_diag.data(), log_diag.data() + d);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  out.singular_gap_rate = (sorted[d - m - 1] - sorted[d - m]) / static_cast<double>(n_steps);
  const double tail = out.step_dists.empty() ? 0.0 : out.step_dists.back();
  out.no_convergence = out.singular_gap_rate < kContractionFloor ||
                       (tail > 1e-10 && out.decay_rate < kContractionFloor);
  return out;
}

double transversality_rate(const GrassmannCloud& cloud, const Subspace& U, double tol) {
  require(U.d() == cloud.d && U.m() == cloud.m, "transversality_rate: U must lie in G(d, m)");
  if (cloud.points.empty()) return 0.0;
  const Matrix U_perp = U.complement();
  std::size_t failures = 0;
  for (const auto& W : cloud.points)
    if (!(transversality_margin(U_perp, W) > tol)) ++failures;
  return static_cast<double>(failures) / static_cast<double>(cloud.size());
}

// ---------------------------------------------------------------------------
// CSV

void write_cloud_csv(std::ostream& out, const GrassmannCloud& cloud) {
  out << "# d=" << cloud.d << " m=" << cloud.m << " seed=" << cloud.provenance.seed
      << " burnin=" << cloud.provenance.burn_in << " stride=" << cloud.provenance.stride << '\n';
  for (const auto& W : cloud.points) write_frame_csv(out, W);
}

GrassmannCloud read_cloud_csv(std::istream& in) {
  std::string header;
  require(static_cast<bool>(std::getline(in, header)) && header.rfind("#", 0) == 0,
          "cloud csv: missing '# d=.. m=..' header");
  GrassmannCloud cloud;
  std::stringstream ss(header.substr(1));
  std::string token;
  while (ss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string val = token.substr(eq + 1);
    if (key == "d") cloud.d = std::stoi(val);
    else if (key == "m") cloud.m = std::stoi(val);
    else if (key == "seed") cloud.provenance.seed = std::stoull(val);
    else if (key == "burnin") cloud.provenance.burn_in = std::stoll(val);
    else if (key == "stride") cloud.provenance.stride = std::stoll(val);
  }
  require(cloud.d >= 2 && cloud.m >= 1 && cloud.m < cloud.d, "cloud csv: invalid d/m in header");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    cloud.points.push_back(parse_frame_csv(line, cloud.d, cloud.m));
  }
  return cloud;
}

}  // namespace affinedim
