#pragma once

#include <optional>
#include <cstdint>
#include <span>
#include <vector>

#include "affinedim/common.hpp"
#include "affinedim/ifs_spec.hpp"

namespace affinedim {

/// α_1 ≥ ... ≥ α_d > 0. Throws for singular input.
Vector singular_values(const Matrix& M);

struct LyapunovOptions {
  std::int64_t n_steps = 100000;
  std::uint64_t seed = 0;
  /// Independent chains averaged together; each runs on its own substream.
  int n_substreams = 1;
  /// Batch-means batches (spread over the substreams).
  int n_batches = 20;
  /// Worker threads; never changes the result.
  int threads = 1;
};

/// Growth rates of the random product A_{ω_{n−1}}···A_{ω_0}.
struct LyapunovEstimate {
  /// Sorted non-increasing, nats per step.
  Vector gammas;
  Vector stderr_;
  /// Per-batch rates (rows: batches, columns aligned with `gammas`).
  Matrix batch_rates;
};

/// Running product kept as Q·R with a QR step per factor; the log of
/// |diag R| accumulates the rates. Works for any family of square
/// invertible matrices of a common size.
LyapunovEstimate estimate_lyapunov(std::span<const Matrix> matrices,
                                   std::span<const double> p,
                                   const LyapunovOptions& options);

/// Σ −p log p.
double entropy(std::span<const double> p);

struct Multiplicity {
  int m = 1;
  /// γ_{d−m} − γ_d, or 0 when m = d.
  double gap = 0.0;
  double tol_cluster = 0.0;
  /// Set when the gap lies in (tol_cluster, 2·tol_cluster).
  bool ambiguous = false;
};

/// Size of the bottom cluster of exponents within tol_cluster of γ_d.
Multiplicity multiplicity_m(const Vector& gammas, double tol_cluster);

/// max{0 ≤ i ≤ d : h + γ_1 + ... + γ_i > 0}.
int k_index(double h, const Vector& gammas);

/// Lyapunov dimension; throws in the undefined regime (γ_{k+1} ≥ 0, or a
/// non-negative exponent sum when k = d).
double lyapunov_dimension(double h, const Vector& gammas);

struct LyapunovReport {
  Vector gammas;
  Vector stderr_;
  double h = 0.0;
  Multiplicity multiplicity;
  int k = 0;
  /// Empty in the undefined regime.
  std::optional<double> D;
  /// First-order propagation of the exponent standard errors into D.
  double D_stderr = 0.0;
  std::int64_t n_steps = 0;
  std::uint64_t seed = 0;
};

/// tol_cluster <= 0 selects the default max(5·max stderr, 1e−3).
LyapunovReport lyapunov_report(const IFSSpec& spec, const LyapunovOptions& options,
                               double tol_cluster = 0.0);

}  // namespace affinedim
