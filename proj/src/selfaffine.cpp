#include "affinedim/selfaffine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "affinedim/lyapunov.hpp"
#include "affinedim/rng.hpp"
#include "affinedim/stats.hpp"

namespace affinedim {

namespace {

void require_contractive(const IFSSpec& spec, const char* where) {
  require(spec.size() > 0, std::string(where) + ": empty spec");
  require(spec.contractive(), std::string(where) + ": spec is not contractive (max ‖A_λ‖ >= 1)");
}

double spectral_norm(const Matrix& A) { return Eigen::JacobiSVD<Matrix>(A).singularValues()(0); }

}  // namespace

double bounding_radius(const IFSSpec& spec) {
  require_contractive(spec, "bounding_radius");
  double vmax = 0.0;
  for (const auto& f : spec.maps()) vmax = std::max(vmax, f.v.norm());
  return vmax / (1.0 - spec.max_norm());
}

AttractorPoint attractor_point(const IFSSpec& spec, std::span<const int> word, int depth) {
  require_contractive(spec, "attractor_point");
  require(depth >= 1, "attractor_point: depth must be >= 1");
  require(word.size() >= static_cast<std::size_t>(depth), "attractor_point: word shorter than depth");
  AttractorPoint out;
  out.x = Vector::Zero(spec.d());
  for (int i = depth - 1; i >= 0; --i) {
    const int s = word[i];
    require(s >= 0 && static_cast<std::size_t>(s) < spec.size(), "attractor_point: symbol out of range");
    out.x = spec.apply(s, out.x);
  }
  out.error_bound = std::pow(spec.max_norm(), depth) * bounding_radius(spec);
  return out;
}

int default_depth(const IFSSpec& spec) {
  const double R = bounding_radius(spec);
  const double a = spec.max_norm();
  if (R < 1e-9 || a == 0.0) return 1;
  return std::max(1, static_cast<int>(std::ceil(std::log(1e-9 / R) / std::log(a) + 1e-12)));
}

PointCloud sample_measure(const IFSSpec& spec, const SampleOptions& options) {
  require_contractive(spec, "sample_measure");
  require(options.n >= 1, "sample_measure: N must be >= 1");
  const int depth = options.depth > 0 ? options.depth : default_depth(spec);
  const int d = spec.d();
  PointCloud cloud;
  cloud.d = d;
  cloud.points.resize(d, options.n);
  cloud.prefix.resize(options.n);
  cloud.provenance = {options.seed, options.n, depth};

  const auto mats = spec.matrices();
  std::vector<Vector> shifts;
  for (const auto& f : spec.maps()) shifts.push_back(f.v);
  const Categorical pick(spec.probabilities());
  const std::int64_t chunks = (options.n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    Rng rng(options.seed, options.stream_offset + c);
    std::vector<int> word(depth);
    Vector x(d);
    const std::int64_t begin = static_cast<std::int64_t>(c) * kSampleChunk;
    const std::int64_t end = std::min(options.n, begin + kSampleChunk);
    for (std::int64_t i = begin; i < end; ++i) {
      for (auto& s : word) s = static_cast<int>(pick(rng));
      x.setZero();
      for (int k = depth - 1; k >= 0; --k) x = mats[word[k]] * x + shifts[word[k]];
      cloud.points.col(i) = x;
      cloud.prefix[i] = word[0];
    }
  });
  return cloud;
}

// ---------------------------------------------------------------------------
// Separation

std::string to_string(SSCCertificate::Verdict v) {
  switch (v) {
    case SSCCertificate::Verdict::Certified: return "certified";
    case SSCCertificate::Verdict::ViolatedAtDepth: return "violated-at-depth";
    case SSCCertificate::Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double det_sum(const IFSSpec& spec) {
  double s = 0.0;
  for (const auto& f : spec.maps()) s += std::abs(f.A.determinant());
  return s;
}

namespace {

struct Hull {
  Matrix A;
  Vector centre;
  double radius = 0.0;
  int first = 0;
  int depth = 0;
};

// Total pair evaluations allowed over all refinement rounds.
constexpr std::int64_t kPairBudget = 50'000'000;

struct PairScan {
  double min_gap = std::numeric_limits<double>::infinity();
  bool conflict = false;
  bool coincident = false;
  int coincident_depth = 0;
  bool over_budget = false;
};

using CellKey = std::array<std::int64_t, 3>;

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return static_cast<std::size_t>(k[0] * 73856093) ^ static_cast<std::size_t>(k[1] * 19349663) ^
           static_cast<std::size_t>(k[2] * 83492791);
  }
};

// Pairs of hulls with different first symbols whose bounding boxes, grown by
// margin/2, meet. Bucketed on a grid over the first three coordinates; each
// pair is examined in the cell holding the low corner of the box overlap.
// Pairs never examined are more than `margin` apart, so min_gap is capped
// there. Overlapping hulls get their refine flag set; a pair whose sample
// points coincide ends the scan.
PairScan scan_pairs(const std::vector<Hull>& hulls, const Vector& k0, double tol, std::vector<char>& refine,
                    std::int64_t& budget) {
  const std::size_t n = hulls.size();
  const int dims = std::min<int>(3, static_cast<int>(k0.size()));
  std::vector<double> radii(n);
  for (std::size_t i = 0; i < n; ++i) radii[i] = hulls[i].radius;
  const double med = std::max(median(radii), 1e-300);
  const double margin = 2.0 * med;
  const double cell = 4.0 * med;

  std::vector<CellKey> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = hi[i] = CellKey{0, 0, 0};
    const double r = hulls[i].radius + 0.5 * margin;
    for (int c = 0; c < dims; ++c) {
      lo[i][c] = static_cast<std::int64_t>(std::floor((hulls[i].centre(c) - r) / cell));
      hi[i][c] = static_cast<std::int64_t>(std::floor((hulls[i].centre(c) + r) / cell));
    }
  }
  constexpr std::int64_t kMaxCells = 64;
  std::unordered_map<CellKey, std::vector<std::uint32_t>, CellHash> grid;
  std::vector<std::uint32_t> big;
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t cells = 1;
    for (int c = 0; c < dims; ++c) cells *= hi[i][c] - lo[i][c] + 1;
    if (cells > kMaxCells) {
      big.push_back(static_cast<std::uint32_t>(i));
      continue;
    }
    CellKey k = lo[i];
    for (;;) {
      grid[k].push_back(static_cast<std::uint32_t>(i));
      int c = 0;
      while (c < dims && ++k[c] > hi[i][c]) k[c] = lo[i][c], ++c;
      if (c == dims) break;
    }
  }

  Matrix sample(k0.size(), n);
  for (std::size_t i = 0; i < n; ++i) sample.col(i) = hulls[i].A * k0 + hulls[i].centre;

  PairScan out;
  out.min_gap = margin;
  // Returns false when the scan must stop.
  auto examine = [&](std::size_t i, std::size_t j) {
    if (hulls[i].first == hulls[j].first) return true;
    if (--budget < 0) {
      out.over_budget = true;
      return false;
    }
    const double gap = (hulls[i].centre - hulls[j].centre).norm() - hulls[i].radius - hulls[j].radius;
    out.min_gap = std::min(out.min_gap, gap);
    if (gap > 0.0) return true;
    out.conflict = true;
    refine[i] = refine[j] = 1;
    if ((sample.col(i) - sample.col(j)).norm() <= tol) {
      out.coincident = true;
      out.coincident_depth = std::max(hulls[i].depth, hulls[j].depth);
      return false;
    }
    return true;
  };

  for (std::size_t a = 0; a < big.size(); ++a)
    for (std::size_t j = 0; j < n; ++j) {
      const bool j_big = std::binary_search(big.begin(), big.end(), static_cast<std::uint32_t>(j));
      if (j == big[a] || (j_big && j < big[a])) continue;
      if (!examine(big[a], j)) return out;
    }
  for (const auto& [key, members] : grid)
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto i = members[a], j = members[b];
        bool home = true;
        for (int c = 0; c < dims && home; ++c) home = std::max(lo[i][c], lo[j][c]) == key[c];
        if (home && !examine(i, j)) return out;
      }
  return out;
}

}  // namespace

SSCCertificate ssc_certify(const IFSSpec& spec, int max_depth, std::int64_t max_hulls) {
  require_contractive(spec, "ssc_certify");
  require(max_depth >= 1, "ssc_certify: max_depth must be >= 1");
  SSCCertificate cert;
  cert.radius = bounding_radius(spec);
  const double R = cert.radius;
  const int d = spec.d();
  const auto& maps = spec.maps();
  const double tol = 1e-12 * std::max(R, 1.0);

  // A point of the attractor, used to test whether two pieces share a point.
  const Vector k0 = (Matrix::Identity(d, d) - maps[0].A).partialPivLu().solve(maps[0].v);

  std::vector<Hull> hulls;
  for (std::size_t l = 0; l < maps.size(); ++l)
    hulls.push_back({maps[l].A, maps[l].v, spectral_norm(maps[l].A) * R, static_cast<int>(l), 1});

  std::int64_t budget = kPairBudget;
  for (;;) {
    cert.hulls = static_cast<std::int64_t>(hulls.size());
    cert.depth = 0;
    for (const auto& h : hulls) cert.depth = std::max(cert.depth, h.depth);
    std::vector<char> refine(hulls.size(), 0);
    const PairScan scan = scan_pairs(hulls, k0, tol, refine, budget);
    cert.min_gap = std::isfinite(scan.min_gap) ? scan.min_gap : 0.0;
    if (scan.over_budget) break;
    if (scan.coincident) {
      cert.verdict = SSCCertificate::Verdict::ViolatedAtDepth;
      cert.depth = scan.coincident_depth;
      return cert;
    }
    if (!scan.conflict) {
      cert.verdict = cert.min_gap > 0.0 ? SSCCertificate::Verdict::Certified : SSCCertificate::Verdict::Inconclusive;
      break;
    }
    std::int64_t flagged = 0;
    bool at_limit = false;
    for (std::size_t i = 0; i < hulls.size(); ++i)
      if (refine[i]) {
        ++flagged;
        at_limit = at_limit || hulls[i].depth >= max_depth;
      }
    const auto grown = static_cast<std::int64_t>(hulls.size()) + flagged * (static_cast<std::int64_t>(maps.size()) - 1);
    if (at_limit || grown > max_hulls) break;
    std::vector<Hull> next;
    next.reserve(static_cast<std::size_t>(grown));
    for (std::size_t i = 0; i < hulls.size(); ++i) {
      if (!refine[i]) {
        next.push_back(std::move(hulls[i]));
        continue;
      }
      for (const auto& f : maps) {
        Hull child;
        child.A = hulls[i].A * f.A;
        child.centre = hulls[i].A * f.v + hulls[i].centre;
        child.radius = spectral_norm(child.A) * R;
        child.first = hulls[i].first;
        child.depth = hulls[i].depth + 1;
        next.push_back(std::move(child));
      }
    }
    hulls = std::move(next);
  }
  if (cert.verdict == SSCCertificate::Verdict::Certified && det_sum(spec) >= 1.0)
    throw ConsistencyAlarm("ssc_certify: certified separation with det_sum >= 1");
  return cert;
}

// ---------------------------------------------------------------------------
// Measure dimension

MeasureDimension measure_dimension_estimate(const PointCloud& cloud,
                                            const MeasureDimensionOptions& options) {
  const std::size_t n = cloud.size();
  require(n >= 2, "measure_dimension_estimate: need at least two points");
  require(options.grid_points >= 3, "measure_dimension_estimate: grid too coarse");
  MeasureDimension out;
  out.extent = (cloud.points.rowwise().maxCoeff() - cloud.points.rowwise().minCoeff()).maxCoeff();
  if (!(out.extent > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const int G = options.grid_points;
  out.radii.resize(G);
  std::vector<double> r2(G);
  for (int k = 0; k < G; ++k) {
    out.radii[k] = out.extent * std::pow(10.0, -5.0 + 5.0 * k / (G - 1));
    r2[k] = out.radii[k] * out.radii[k];
  }
  const std::size_t n_ref = std::min(options.n_ref, n);
  out.n_ref = n_ref;
  const int d = cloud.d;
  const double* pts = cloud.points.data();

  // counts[j·G + k] = neighbours of reference j within radii[k].
  std::vector<std::int64_t> counts(n_ref * G, 0);
  parallel_for(n_ref, options.threads, [&](std::size_t j) {
    const std::size_t ref = j * n / n_ref;
    const double* x = pts + ref * d;
    std::int64_t* h = counts.data() + j * G;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == ref) continue;
      const double* y = pts + i * d;
      double s = 0.0;
      for (int c = 0; c < d; ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
      if (s > r2[G - 1]) continue;
      ++h[std::lower_bound(r2.begin(), r2.end(), s) - r2.begin()];
    }
    for (int k = 1; k < G; ++k) h[k] += h[k - 1];
  });

  const double others = static_cast<double>(n - 1);
  out.log_mass.assign(G, 0.0);
  out.log_correlation.assign(G, -std::numeric_limits<double>::infinity());
  std::vector<double> medians(G);
  std::vector<double> column(n_ref);
  for (int k = 0; k < G; ++k) {
    double total = 0.0;
    for (std::size_t j = 0; j < n_ref; ++j) {
      const auto c = static_cast<double>(counts[j * G + k]);
      column[j] = c;
      total += c;
      out.log_mass[k] += std::log(std::max(c, 0.5) / others);
    }
    out.log_mass[k] /= static_cast<double>(n_ref);
    if (total > 0.0) out.log_correlation[k] = std::log(total / (static_cast<double>(n_ref) * others));
    medians[k] = median(column);
  }

  out.r_hi = options.r_hi > 0.0 ? options.r_hi : 0.1 * out.extent;
  if (options.r_lo > 0.0) {
    out.r_lo = options.r_lo;
  } else {
    out.r_lo = out.r_hi;
    for (int k = 0; k < G; ++k)
      if (medians[k] >= options.min_count) {
        out.r_lo = out.radii[k];
        break;
      }
  }
  std::vector<double> lx, ly, cy;
  for (int k = 0; k < G; ++k) {
    const double r = out.radii[k];
    if (r < out.r_lo * (1 - 1e-12) || r > out.r_hi * (1 + 1e-12)) continue;
    if (!std::isfinite(out.log_correlation[k])) continue;
    lx.push_back(std::log(r));
    ly.push_back(out.log_mass[k]);
    cy.push_back(out.log_correlation[k]);
  }
  require(lx.size() >= 3, "measure_dimension_estimate: fit window holds fewer than 3 radii");
  out.fit = fit_line(lx, ly);
  out.estimate = out.fit.slope;
  out.correlation_fit = fit_line(lx, cy);
  out.correlation_estimate = out.correlation_fit.slope;
  return out;
}

// ---------------------------------------------------------------------------
// Rectangle covers

RectangleCoverStats rectangle_cover_stats(const IFSSpec& spec, int depth, int k) {
  require_contractive(spec, "rectangle_cover_stats");
  const int d = spec.d();
  require(k >= 0 && k < d, "rectangle_cover_stats: need 0 <= k < d");
  require(depth >= 1, "rectangle_cover_stats: depth must be >= 1");

  // Maps with the same matrix and weight give identical records.
  std::vector<int> reps;
  std::vector<double> class_size;
  for (std::size_t l = 0; l < spec.size(); ++l) {
    bool found = false;
    for (std::size_t c = 0; c < reps.size(); ++c) {
      const auto& r = spec[reps[c]];
      if (r.p == spec[l].p && r.A == spec[l].A) {
        class_size[c] += 1.0;
        found = true;
        break;
      }
    }
    if (!found) {
      reps.push_back(static_cast<int>(l));
      class_size.push_back(1.0);
    }
  }
  const auto C = static_cast<std::int64_t>(reps.size());
  std::int64_t total = 1;
  for (int i = 0; i < depth; ++i) {
    total *= C;
    require(total <= 1000000, "rectangle_cover_stats: more than 10^6 distinct words");
  }

  RectangleCoverStats out;
  out.depth = depth;
  out.k = k;
  out.records.reserve(total);
  out.max_local_exponent = -std::numeric_limits<double>::infinity();
  std::vector<int> digits(depth, 0);
  for (std::int64_t w = 0; w < total; ++w) {
    CylinderRecord rec;
    Matrix A = Matrix::Identity(d, d);
    rec.mu = 1.0;
    for (int i = 0; i < depth; ++i) {
      const int sym = reps[digits[i]];
      rec.word.push_back(sym);
      A = A * spec[sym].A;
      rec.mu *= spec[sym].p;
      rec.multiplicity *= class_size[digits[i]];
    }
    rec.alphas = Eigen::JacobiSVD<Matrix>(A).singularValues();
    const double base = rec.alphas(k);
    for (int i = 0; i < k; ++i) {
      const double ratio = rec.alphas(i) / base;
      const auto c = static_cast<std::int64_t>(std::ceil(ratio * (1.0 - 1e-12)));
      rec.counts.push_back(std::max<std::int64_t>(c, 1));
      rec.d_w *= static_cast<double>(rec.counts.back());
    }
    rec.local_exponent = std::log(rec.mu / rec.d_w) / std::log(base);
    out.max_local_exponent = std::max(out.max_local_exponent, rec.local_exponent);
    out.records.push_back(std::move(rec));
    for (int i = depth - 1; i >= 0; --i) {
      if (++digits[i] < C) break;
      digits[i] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Conditional entropy and F

ConditionalEntropy conditional_entropy(const PointCloud& cloud, const Subspace& W, int n_scale,
                                       std::uint64_t seed) {
  require(cloud.size() >= 1, "conditional_entropy: empty cloud");
  require(W.d() == cloud.d && W.m() < cloud.d, "conditional_entropy: W must be a proper subspace of R^d");
  require(n_scale >= 0 && n_scale <= 40, "conditional_entropy: n_scale out of range");
  const std::size_t n = cloud.size();
  const Matrix U = W.complement();
  const int q = static_cast<int>(U.cols());
  const double side = std::ldexp(1.0, -n_scale);
  Rng rng(seed, static_cast<std::uint64_t>(n_scale));
  std::vector<double> offset(q);
  for (auto& o : offset) o = rng.uniform(0.0, side);

  const Matrix Y = U.transpose() * cloud.points;
  std::vector<std::int64_t> keys(n * q);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < q; ++c)
      keys[i * q + c] = static_cast<std::int64_t>(std::floor((Y(c, i) - offset[c]) / side));

  int symbols = 0;
  for (int s : cloud.prefix) symbols = std::max(symbols, s + 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto same_cell = [&](std::size_t a, std::size_t b) {
    return std::equal(keys.begin() + a * q, keys.begin() + (a + 1) * q, keys.begin() + b * q);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (int c = 0; c < q; ++c)
      if (keys[a * q + c] != keys[b * q + c]) return keys[a * q + c] < keys[b * q + c];
    return cloud.prefix[a] < cloud.prefix[b];
  });

  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  ConditionalEntropy out;
  double acc = 0.0;
  std::int64_t singletons = 0;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && same_cell(order[start], order[end])) ++end;
    const auto cell = static_cast<double>(end - start);
    double inner = 0.0;
    std::size_t run = start;
    while (run < end) {
      std::size_t stop = run + 1;
      while (stop < end && cloud.prefix[order[stop]] == cloud.prefix[order[run]]) ++stop;
      inner += xlogx(static_cast<double>(stop - run));
      run = stop;
    }
    acc += xlogx(cell) - inner;
    if (end - start == 1) ++singletons;
    ++out.cells;
    start = end;
  }
  const auto N = static_cast<double>(n);
  out.H = std::max(acc / N, 0.0);
  std::vector<double> freq(symbols, 0.0);
  for (int s : cloud.prefix) freq[s] += 1.0;
  for (double f : freq) out.H_prior -= f > 0.0 ? (f / N) * std::log(f / N) : 0.0;
  out.singleton_mass = static_cast<double>(singletons) / N;
  out.undersampled = out.singleton_mass > 0.2;
  return out;
}

SliceDimension slice_dimension_F(const GrassmannCloud& fcloud, const PointCloud& mcloud,
                                 double gamma_d, const SliceDimensionOptions& options) {
  require(gamma_d < 0.0, "slice_dimension_F: gamma_d must be negative");
  require(!fcloud.points.empty(), "slice_dimension_F: empty Furstenberg cloud");
  require(fcloud.d == mcloud.d, "slice_dimension_F: clouds live in different dimensions");
  require(!options.scales.empty(), "slice_dimension_F: no scales");
  const std::size_t nw = std::min(std::max<std::size_t>(options.max_subspaces, 1), fcloud.size());
  SliceDimension out;
  out.scales = options.scales;
  out.gamma_d = gamma_d;
  for (int scale : options.scales) {
    std::vector<double> H(nw);
    std::vector<char> under(nw, 0);
    parallel_for(nw, options.threads, [&](std::size_t j) {
      const auto& W = fcloud.points[j * fcloud.size() / nw];
      const auto ce = conditional_entropy(mcloud, W, scale, substream_seed(options.seed, j));
      H[j] = ce.H;
      under[j] = ce.undersampled;
    });
    const double mean = std::accumulate(H.begin(), H.end(), 0.0) / static_cast<double>(nw);
    out.mean_H.push_back(mean);
    out.F.push_back(-mean / gamma_d);
    out.undersampled = out.undersampled || std::any_of(under.begin(), under.end(), [](char c) { return c; });
  }
  if (out.scales.size() >= 2) {
    std::vector<double> side;
    for (int s : out.scales) side.push_back(std::ldexp(1.0, -s));
    out.extrapolated = fit_line(side, out.F).intercept;
  } else {
    out.extrapolated = out.F.front();
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  out << "# d=" << cloud.d << " n=" << cloud.size() << " depth=" << cloud.provenance.depth
      << " seed=" << cloud.provenance.seed << '\n';
  char buf[32];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int c = 0; c < cloud.d; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.points(c, static_cast<Eigen::Index>(i)));
      out << buf << ',';
    }
    out << cloud.prefix[i] << '\n';
  }
}

PointCloud read_point_cloud_csv(std::istream& in) {
  PointCloud cloud;
  std::vector<double> coords;
  std::string line;
  int width = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::stringstream ss(line.substr(1));
      std::string token;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq), val = token.substr(eq + 1);
        if (key == "seed") cloud.provenance.seed = std::stoull(val);
        else if (key == "depth") cloud.provenance.depth = std::stoi(val);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    require(fields.size() >= 2, "point cloud csv: need x_1..x_d,prefix per row");
    if (width < 0) width = static_cast<int>(fields.size()) - 1;
    require(static_cast<int>(fields.size()) - 1 == width, "point cloud csv: ragged rows");
    try {
      for (int c = 0; c < width; ++c) coords.push_back(std::stod(fields[c]));
      cloud.prefix.push_back(std::stoi(fields.back()));
    } catch (const std::exception&) {
      throw Error("point cloud csv: malformed number in '" + line + "'");
    }
    require(cloud.prefix.back() >= 0, "point cloud csv: negative prefix symbol");
  }
  require(width > 0, "point cloud csv: no points");
  cloud.d = width;
  cloud.points = Eigen::Map<const Matrix>(coords.data(), width, static_cast<Eigen::Index>(cloud.prefix.size()));
  cloud.provenance.n = static_cast<std::int64_t>(cloud.prefix.size());
  return cloud;
}

}  // namespace affinedim
