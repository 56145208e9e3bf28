#pragma once

// The spatial side of an affine IFS: coding map, samples of the
// self-affine measure, separation certificates, dimension estimators and
// the binned conditional entropies behind the slice functional F(v).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "affinedim/furstenberg.hpp"
#include "affinedim/grassmann.hpp"
#include "affinedim/ifs_spec.hpp"
#include "affinedim/stats.hpp"

namespace affinedim {

/// R = max|v_λ| / (1 − max‖A_λ‖); every φ_λ maps B(0, R) into itself.
double bounding_radius(const IFSSpec& spec);

struct AttractorPoint {
  Vector x;
  double error_bound = 0.0;
};

/// x = φ_{ω_0}∘…∘φ_{ω_{depth−1}}(0) and the tail bound (max‖A_λ‖)^depth·R.
AttractorPoint attractor_point(const IFSSpec& spec, std::span<const int> word, int depth);

/// Smallest n with (max‖A_λ‖)^n·R < 1e−9.
int default_depth(const IFSSpec& spec);

struct PointCloudProvenance {
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  int depth = 0;
};

struct PointCloud {
  int d = 0;
  /// d×N, one point per column.
  Matrix points;
  /// First symbol of the word behind each point.
  std::vector<int> prefix;
  PointCloudProvenance provenance;

  std::size_t size() const { return prefix.size(); }
};

struct SampleOptions {
  std::int64_t n = 100000;
  /// <= 0 selects default_depth(spec).
  int depth = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  /// First substream used; disjoint offsets give independent clouds.
  std::uint64_t stream_offset = 0;
};

inline constexpr std::int64_t kSampleChunk = 4096;

/// N i.i.d. words of length depth drawn from p^depth, mapped by
/// attractor_point. Chunk c of kSampleChunk points uses substream
/// stream_offset + c, so the cloud does not depend on the thread count.
PointCloud sample_measure(const IFSSpec& spec, const SampleOptions& options);

struct SSCCertificate {
  enum class Verdict { Certified, ViolatedAtDepth, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  int depth = 0;
  /// Smallest hull gap between pieces with different first symbols at the
  /// final refinement (≤ 0 unless certified), capped at twice the median
  /// hull radius.
  double min_gap = 0.0;
  double radius = 0.0;
  std::int64_t hulls = 0;
};

std::string to_string(SSCCertificate::Verdict v);

/// Adaptive refinement of the hulls φ_w(B(0, R)) (centre φ_w(0), radius
/// ‖A_w‖·R) until all pieces with different first symbols are separated.
/// Reports inconclusive once max_depth, max_hulls or an internal budget of
/// pair checks is exhausted.
/// Throws ConsistencyAlarm if it certifies a spec with det_sum ≥ 1.
SSCCertificate ssc_certify(const IFSSpec& spec, int max_depth = 12,
                           std::int64_t max_hulls = 2000000);

/// Σ_λ |det A_λ|.
double det_sum(const IFSSpec& spec);

struct MeasureDimensionOptions {
  /// Reference points, evenly strided through the cloud.
  std::size_t n_ref = 2000;
  /// Values <= 0 select the defaults: r_lo the smallest grid radius whose
  /// median neighbour count reaches min_count, r_hi = extent/10.
  double r_lo = 0.0;
  double r_hi = 0.0;
  double min_count = 10.0;
  /// Radius grid: grid_points log-spaced radii over [1e−5, 1]·extent.
  int grid_points = 81;
  int threads = 1;
};

struct MeasureDimension {
  /// Slope of the averaged log-mass mean_x log θ̂(B(x, r)) against log r.
  double estimate = 0.0;
  LinearFit fit;
  /// Slope of log mean_x θ̂(B(x, r)) (correlation integral).
  double correlation_estimate = 0.0;
  LinearFit correlation_fit;
  double r_lo = 0.0;
  double r_hi = 0.0;
  /// Largest coordinate range of the cloud.
  double extent = 0.0;
  std::vector<double> radii;
  std::vector<double> log_mass;
  std::vector<double> log_correlation;
  std::size_t n_ref = 0;
  bool degenerate = false;
};

MeasureDimension measure_dimension_estimate(const PointCloud& cloud,
                                            const MeasureDimensionOptions& options = {});

struct CylinderRecord {
  /// Representative symbols; maps with identical (A, p) share a class.
  std::vector<int> word;
  /// Number of words of the original alphabet in the class.
  double multiplicity = 1.0;
  Vector alphas;
  std::vector<std::int64_t> counts;
  double d_w = 1.0;
  double mu = 0.0;
  double local_exponent = 0.0;
};

struct RectangleCoverStats {
  int depth = 0;
  int k = 0;
  std::vector<CylinderRecord> records;
  double max_local_exponent = 0.0;
};

/// Words of length depth over the classes of maps with equal (A, p) (the
/// records depend on A_w and p_w only); requires classes^depth <= 10^6.
RectangleCoverStats rectangle_cover_stats(const IFSSpec& spec, int depth, int k);

struct ConditionalEntropy {
  double H = 0.0;
  /// Plug-in entropy of the first symbol over the whole cloud.
  double H_prior = 0.0;
  double singleton_mass = 0.0;
  bool undersampled = false;
  std::int64_t cells = 0;
};

/// Plug-in entropy of the first symbol given the cell of the W^⊥
/// projection, cells of side 2^{−n_scale} with a seeded origin jitter.
ConditionalEntropy conditional_entropy(const PointCloud& cloud, const Subspace& W, int n_scale,
                                       std::uint64_t seed);

struct SliceDimensionOptions {
  std::vector<int> scales{6, 8, 10};
  /// Subspaces used from the Furstenberg cloud (evenly strided).
  std::size_t max_subspaces = 200;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SliceDimension {
  std::vector<int> scales;
  std::vector<double> mean_H;
  std::vector<double> F;
  /// Linear fit of F against the cell side 2^{−n}; intercept reported as a
  /// trend diagnostic only.
  double extrapolated = 0.0;
  bool undersampled = false;
  double gamma_d = 0.0;
};

/// F = −(1/γ_d)·mean_W H(first symbol | W^⊥ cell) at each scale.
SliceDimension slice_dimension_F(const GrassmannCloud& fcloud, const PointCloud& mcloud,
                                 double gamma_d, const SliceDimensionOptions& options = {});

/// CSV with header "# d=<d> n=<N> depth=<k> seed=<s>", rows x_1,…,x_d,prefix.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud);
PointCloud read_point_cloud_csv(std::istream& in);

}  // namespace affinedim
