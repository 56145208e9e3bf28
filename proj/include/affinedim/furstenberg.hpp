#pragma once

// The stationary measure of the random walk W ↦ A_λ^{-1}·W on G(d, m):
// chain sampling, stationarity diagnostics, dimension proxy, and numerical
// certificates for irreducibility and contraction of the induced action.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "affinedim/grassmann.hpp"
#include "affinedim/ifs_spec.hpp"
#include "affinedim/lyapunov.hpp"
#include "affinedim/stats.hpp"

namespace affinedim {

struct CloudProvenance {
  std::uint64_t seed = 0;
  std::int64_t burn_in = 0;
  std::int64_t stride = 1;
  int n_chains = 1;
};

struct GrassmannCloud {
  int d = 0;
  int m = 0;
  std::vector<Subspace> points;
  CloudProvenance provenance;

  std::size_t size() const { return points.size(); }
};

struct ChainOptions {
  std::int64_t burn_in = 1000;
  std::int64_t n = 10000;
  std::int64_t stride = 8;
  std::uint64_t seed = 0;
  /// Defaults to span{e_1, ..., e_m}.
  std::optional<Subspace> start;
  /// Independent chains on disjoint substreams, concatenated in order.
  int n_chains = 1;
  int threads = 1;
};

/// Runs W_{k+1} = A_{λ_k}^{-1}·W_k with λ_k ~ p, discards burn_in states and
/// keeps every stride-th state afterwards.
GrassmannCloud sample_chain(const IFSSpec& spec, int m, const ChainOptions& options);
/// Same chain driven directly by the maps `step` (already inverted).
GrassmannCloud sample_chain(std::span<const Matrix> step, std::span<const double> p, int m,
                            const ChainOptions& options);

struct StationarityOptions {
  /// Points drawn from the cloud for each side of the comparison
  /// (0 = half the cloud).
  std::size_t n_probe = 1000;
  int resamples = 200;
  std::uint64_t seed = 0;
};

struct StationarityResult {
  /// MMD between cloud points and the one-step pushforward of other
  /// cloud points.
  double gap = 0.0;
  /// Kernel bandwidth: median pairwise distance of the pooled sample.
  double sigma = 0.0;
  MmdTest test;
};

/// Gaussian-kernel MMD between the cloud and its pushforward under the
/// mixture Σ p_λ A_λ^{-1}.
double stationarity_gap(const GrassmannCloud& cloud, const IFSSpec& spec,
                        const StationarityOptions& options);
/// The gap together with its resampling null.
StationarityResult stationarity_test(const GrassmannCloud& cloud, const IFSSpec& spec,
                                     const StationarityOptions& options);
/// The same diagnostic after mapping the cloud through psi and pushing
/// forward with compound(A_λ^{-1}, m) on the projective space.
StationarityResult projective_stationarity_test(const GrassmannCloud& cloud, const IFSSpec& spec,
                                                const StationarityOptions& options);

/// MMD test between two clouds (n_probe points from each).
MmdTest cloud_mmd_test(const GrassmannCloud& a, const GrassmannCloud& b,
                       const StationarityOptions& options);

struct CorrelationOptions {
  /// Values <= 0 select the defaults 2·median nearest-neighbour distance
  /// and diameter/4.
  double r_lo = 0.0;
  double r_hi = 0.0;
  int n_r = 24;
  int threads = 1;
};

struct CorrelationDimension {
  double estimate = 0.0;
  LinearFit fit;
  std::vector<double> radii;
  std::vector<std::int64_t> counts;
  std::vector<double> fractions;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double median_nn = 0.0;
  double diameter = 0.0;
  std::int64_t n_pairs = 0;
  /// All points coincide; estimate forced to 0.
  bool degenerate = false;
};

/// Slope of log C(r) against log r, C(r) the fraction of pairs within
/// distance r, over n_r log-spaced radii. Needs at least 10^3 points.
CorrelationDimension correlation_dimension(const GrassmannCloud& cloud,
                                           const CorrelationOptions& options = {});

struct IrreducibilityCertificate {
  enum class Verdict { IrreducibleCertified, ReducibleCertified, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  /// Orthonormal basis (q×k) of an invariant subspace of Λ^m R^d.
  std::optional<Matrix> witness;
  int algebra_rank = 0;
  int q = 0;
  int words_used = 0;
};

std::string to_string(IrreducibilityCertificate::Verdict v);

/// Burnside test on the algebra spanned by compound(A_w, m), |w| <= L,
/// followed by a witness search when the algebra is not full.
/// L_max <= 0 lets the span grow until it stabilizes.
IrreducibilityCertificate irreducibility_check(std::span<const Matrix> matrices, int m,
                                               int L_max = 0, std::uint64_t seed = 0);

/// True when `basis` (q×k, orthonormal) is mapped into itself by every
/// compound(A_λ, m) within 1e-8 relative error.
bool is_invariant(std::span<const Matrix> matrices, int m, const Matrix& basis);

struct ContractionResult {
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta_gap = 0.0;
  double gap_stderr = 0.0;
  /// eta_gap > max(3·gap_stderr, kContractionFloor).
  bool contracting = false;
};

inline constexpr double kContractionFloor = 1e-3;

/// Top two exponents of the induced chain compound(A_λ^{-1}, m).
ContractionResult contraction_check(const IFSSpec& spec, int m, const LyapunovOptions& options);

struct BottomSubspaceTrack {
  /// W_n for n = 1..n_steps: bottom-m left singular subspace of A_{ω|n}.
  std::vector<Subspace> subspaces;
  /// dist(W_n, W_{n+1}).
  std::vector<double> step_dists;
  /// dist(W_n, W_{2n}) for n = 1..n_steps/2.
  std::vector<double> doubling_dists;
  /// −slope of log step_dists over the steps above the rounding floor.
  double decay_rate = 0.0;
  /// log(α_{d−m}/α_{d−m+1}) of the product, per step.
  double singular_gap_rate = 0.0;
  /// Raised when the product shows no singular gap or W_n does not settle.
  bool no_convergence = false;
};

BottomSubspaceTrack bottom_subspace_track(const IFSSpec& spec, int m, std::int64_t n_steps,
                                          std::uint64_t seed);

/// Fraction of cloud points W with U^⊥ + W ≠ R^d at tolerance tol.
double transversality_rate(const GrassmannCloud& cloud, const Subspace& U,
                           double tol = kTransversalityTolerance);

/// CSV with header "# d=<d> m=<m> seed=<s> burnin=<b> stride=<k>", one
/// column-major frame per row.
void write_cloud_csv(std::ostream& out, const GrassmannCloud& cloud);
GrassmannCloud read_cloud_csv(std::istream& in);

}  // namespace affinedim
