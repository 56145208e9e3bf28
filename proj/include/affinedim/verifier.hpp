#pragma once

// End-to-end analysis of one IFS spec and its report.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "affinedim/furstenberg.hpp"
#include "affinedim/ifs_spec.hpp"
#include "affinedim/lyapunov.hpp"
#include "affinedim/selfaffine.hpp"

namespace affinedim {

struct VerifyOptions {
  std::uint64_t seed = 0;
  std::int64_t lyapunov_steps = 100000;
  std::int64_t chain_samples = 20000;
  std::int64_t burn_in = 1000;
  std::int64_t stride = 8;
  std::int64_t measure_samples = 100000;
  /// <= 0 selects default_depth(spec).
  int depth = 0;
  int ssc_max_depth = 12;
  /// Bottom-cluster tolerance for m; <= 0 selects max(5·stderr, 1e−3).
  double tol_cluster = 0.0;
  std::size_t stationarity_probe = 1000;
  int stationarity_resamples = 200;
  std::size_t slice_subspaces = 100;
  int threads = 1;
  /// Wall-clock timings in the report (breaks byte-identical output).
  bool timings = false;
  /// When set, clouds are written here as CSV and referenced by path.
  std::string out_dir;
};

/// Stage seeds derived from the master seed.
struct StageSeeds {
  std::uint64_t lyapunov = 0;
  std::uint64_t chain = 0;
  std::uint64_t stationarity = 0;
  std::uint64_t irreducibility = 0;
  std::uint64_t contraction = 0;
  std::uint64_t measure = 0;
  std::uint64_t slice = 0;
};

StageSeeds stage_seeds(std::uint64_t master);

struct VerificationReport {
  std::string spec_name;
  int d = 0;
  std::size_t maps = 0;
  bool contractive = false;
  double max_norm = 0.0;
  LyapunovReport lyapunov;
  int m = 0;
  /// Set when m = d; the Grassmannian stages are then skipped.
  std::string note;

  std::optional<CorrelationDimension> furstenberg_dim;
  std::optional<StationarityResult> stationarity;
  std::optional<IrreducibilityCertificate> irreducibility;
  std::optional<ContractionResult> contraction;

  std::optional<SSCCertificate> ssc;
  double det_sum = 0.0;
  std::optional<MeasureDimension> measure_dim;
  std::optional<SliceDimension> slice;

  std::optional<double> condition_lhs;
  int condition_rhs = 0;
  bool hypothesis_pass = false;
  std::optional<double> conclusion_gap;

  StageSeeds seeds;
  std::uint64_t master_seed = 0;
  std::string furstenberg_cloud_path;
  std::string measure_cloud_path;
  /// Stage name → seconds; filled only when timings were requested.
  nlohmann::ordered_json timings = nlohmann::ordered_json::object();
};

/// lyapunov → m → Furstenberg chain → correlation dimension →
/// irreducibility and contraction → separation → measure sample →
/// measure dimension → F.
VerificationReport verify(const IFSSpec& spec, const VerifyOptions& options);

/// Stable key order; every key is present on every path (null when a stage
/// does not apply).
nlohmann::ordered_json to_json(const VerificationReport& report);
std::string text_summary(const VerificationReport& report);

nlohmann::ordered_json to_json(const LyapunovReport& r);
nlohmann::ordered_json to_json(const SSCCertificate& c);
nlohmann::ordered_json to_json(const IrreducibilityCertificate& c);
nlohmann::ordered_json to_json(const CorrelationDimension& c);
nlohmann::ordered_json to_json(const MeasureDimension& m);

}  // namespace affinedim
