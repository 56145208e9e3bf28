#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "affinedim/builtin.hpp"
#include "affinedim/rng.hpp"
#include "affinedim/selfaffine.hpp"

using namespace affinedim;

namespace {

Vector vec2(double x, double y) { return (Vector(2) << x, y).finished(); }

// Middle-thirds Cantor maps acting on the first axis of the plane.
IFSSpec cantor_on_axis() {
  const Matrix A = Matrix::Identity(2, 2) / 3.0;
  return IFSSpec(2, {{A, vec2(0, 0), 0.5}, {A, vec2(2.0 / 3, 0), 0.5}}, "cantor");
}

double mmd_between(const Matrix& X, const Matrix& Y, std::uint64_t seed, bool* pass) {
  const auto n = X.cols() + Y.cols();
  Matrix P(X.rows(), n);
  P << X, Y;
  std::vector<double> d;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((P.col(i) - P.col(j)).norm());
  const double sigma = median(d);
  const Matrix K = gaussian_gram(n, [&](std::size_t i, std::size_t j) { return (P.col(i) - P.col(j)).norm(); }, sigma);
  Rng rng(seed);
  const auto t = mmd_resampling_test(K, X.cols(), 200, rng);
  *pass = t.pass;
  return t.statistic;
}

}  // namespace

TEST(AttractorPoint, SingleMapFixedPoint) {
  const IFSSpec spec(1, {{Matrix::Constant(1, 1, 0.5), Vector::Constant(1, 1.0), 1.0}});
  const std::vector<int> word(50, 0);
  const auto pt = attractor_point(spec, word, 50);
  EXPECT_LT(std::abs(pt.x(0) - 2.0), 1e-14);
  EXPECT_LT(pt.error_bound, 1e-14);
}

TEST(AttractorPoint, ConstantWordConvergesToFixedPoint) {
  const auto spec = flagship_spec();
  for (int l = 0; l < 10; ++l) {
    const Vector fixed = (Matrix::Identity(2, 2) - spec[l].A).partialPivLu().solve(spec[l].v);
    const std::vector<int> word(80, l);
    EXPECT_LT((attractor_point(spec, word, 80).x - fixed).norm(), 1e-12);
  }
}

TEST(AttractorPoint, TailBoundHoldsForRandomWords) {
  for (const auto& spec : {flagship_spec(), builtin("corners")}) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<int> word(60);
      for (auto& s : word) s = static_cast<int>(rng.below(spec.size()));
      const int depth = 5 + trial % 20;
      const auto a = attractor_point(spec, word, depth);
      const auto b = attractor_point(spec, word, depth + 10);
      EXPECT_LE((a.x - b.x).norm(), a.error_bound * (1 + 1e-12));
      EXPECT_LT(b.error_bound, a.error_bound);
    }
  }
}

TEST(AttractorPoint, Validation) {
  const IFSSpec expanding(1, {{Matrix::Constant(1, 1, 2.0), Vector::Zero(1), 1.0}});
  const std::vector<int> word(5, 0);
  EXPECT_THROW(attractor_point(expanding, word, 5), Error);
  EXPECT_THROW(attractor_point(flagship_spec(), word, 6), Error);
  EXPECT_THROW(attractor_point(flagship_spec(), word, 0), Error);
}

TEST(SampleMeasure, SingleMapCloudSitsAtFixedPoint) {
  const IFSSpec spec(1, {{Matrix::Constant(1, 1, 0.5), Vector::Constant(1, 1.0), 1.0}});
  SampleOptions o;
  o.n = 1000;
  const auto cloud = sample_measure(spec, o);
  const double bound = std::pow(0.5, cloud.provenance.depth) * bounding_radius(spec);
  for (Eigen::Index i = 0; i < cloud.points.cols(); ++i) EXPECT_LE(std::abs(cloud.points(0, i) - 2.0), bound);
}

TEST(SampleMeasure, FirstSymbolFrequencies) {
  std::vector<AffineMap> maps;
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  for (int i = 0; i < 4; ++i) maps.push_back({Matrix::Identity(2, 2) * 0.3, vec2(i, i % 2), p[i]});
  const IFSSpec spec(2, maps);
  SampleOptions o;
  o.n = 20000;
  o.seed = 4;
  const auto cloud = sample_measure(spec, o);
  std::vector<double> freq(4, 0.0);
  for (int s : cloud.prefix) freq[s] += 1.0 / o.n;
  for (int i = 0; i < 4; ++i) EXPECT_LT(std::abs(freq[i] - p[i]), 4 * std::sqrt(p[i] * (1 - p[i]) / o.n));
}

TEST(SampleMeasure, ThreadCountDoesNotChangeCloud) {
  SampleOptions o;
  o.n = 10000;
  o.seed = 5;
  o.threads = 1;
  const auto a = sample_measure(flagship_spec(), o);
  o.threads = 4;
  const auto b = sample_measure(flagship_spec(), o);
  EXPECT_EQ(a.points, b.points);
  EXPECT_EQ(a.prefix, b.prefix);
}

TEST(SampleMeasure, DefaultDepthReachesTolerance) {
  const auto spec = flagship_spec();
  const int n = default_depth(spec);
  EXPECT_LT(std::pow(spec.max_norm(), n) * bounding_radius(spec), 1e-9);
  EXPECT_GE(std::pow(spec.max_norm(), n - 1) * bounding_radius(spec), 1e-9);
}

TEST(SampleMeasure, CloudIsSelfSimilarInLaw) {
  const auto spec = flagship_spec();
  SampleOptions o;
  o.n = 800;
  o.seed = 6;
  const auto cloud = sample_measure(spec, o);
  o.stream_offset = 100;
  const auto other = sample_measure(spec, o);
  const Categorical pick(spec.probabilities());
  Rng rng(7);
  Matrix pushed(2, other.points.cols());
  for (Eigen::Index i = 0; i < pushed.cols(); ++i) pushed.col(i) = spec.apply(pick(rng), other.points.col(i));
  bool pass = false;
  mmd_between(cloud.points, pushed, 8, &pass);
  EXPECT_TRUE(pass);
}

TEST(SampleMeasure, MergedHalvesMatchFullCloud) {
  const auto spec = flagship_spec();
  SampleOptions o;
  o.n = 400;
  o.seed = 9;
  const auto h1 = sample_measure(spec, o);
  o.stream_offset = 50;
  const auto h2 = sample_measure(spec, o);
  o.n = 800;
  o.seed = 10;
  o.stream_offset = 0;
  const auto full = sample_measure(spec, o);
  Matrix merged(2, 800);
  merged << h1.points, h2.points;
  bool pass = false;
  mmd_between(merged, full.points, 11, &pass);
  EXPECT_TRUE(pass);
}

TEST(Ssc, CornersCertifiedWithKnownGap) {
  const auto cert = ssc_certify(builtin("corners"));
  ASSERT_EQ(cert.verdict, SSCCertificate::Verdict::Certified);
  EXPECT_EQ(cert.depth, 2);
  EXPECT_NEAR(cert.radius, std::sqrt(2.0), 1e-15);
  // Closest subpieces of neighbouring corners: centres 4/9 apart, radii √2/9.
  EXPECT_NEAR(cert.min_gap, (4.0 - 2.0 * std::sqrt(2.0)) / 9.0, 1e-12);
}

TEST(Ssc, IdenticalMapsViolate) {
  const Matrix A = Matrix::Identity(2, 2) * 0.4;
  const IFSSpec spec(2, {{A, vec2(1, 0), 0.5}, {A, vec2(1, 0), 0.5}});
  const auto cert = ssc_certify(spec);
  EXPECT_EQ(cert.verdict, SSCCertificate::Verdict::ViolatedAtDepth);
  EXPECT_EQ(cert.depth, 1);
}

TEST(Ssc, TouchingPiecesAreNeverCertified) {
  const Matrix half = Matrix::Constant(1, 1, 0.5);
  const IFSSpec spec(1, {{half, Vector::Zero(1), 0.5}, {half, Vector::Constant(1, 0.5), 0.5}});
  const auto cert = ssc_certify(spec, 14);
  EXPECT_EQ(cert.verdict, SSCCertificate::Verdict::Inconclusive);
  EXPECT_LE(cert.min_gap, 0.0);
}

TEST(Ssc, HeavyOverlapStaysBounded) {
  std::vector<AffineMap> maps;
  for (int i = 0; i < 6; ++i)
    maps.push_back({Matrix::Identity(2, 2) * 0.8, vec2(0.05 * std::cos(i), 0.05 * std::sin(i)), 1.0 / 6});
  const IFSSpec spec(2, maps);
  const auto cert = ssc_certify(spec, 12, 2'000'000);
  EXPECT_NE(cert.verdict, SSCCertificate::Verdict::Certified);
  EXPECT_LE(cert.hulls, 2'000'000);
}

TEST(Ssc, FlagshipCertified) {
  const auto cert = ssc_certify(flagship_spec());
  EXPECT_EQ(cert.verdict, SSCCertificate::Verdict::Certified);
  EXPECT_GT(cert.min_gap, 0.0);
  EXPECT_LT(det_sum(flagship_spec()), 1.0);
}

TEST(Ssc, CertifiedRandomSpecsHaveSmallDeterminantSum) {
  Rng rng(12);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 4;
    std::vector<AffineMap> maps;
    for (int i = 0; i < n; ++i) {
      Matrix A(2, 2);
      A << rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5);
      if (std::abs(A.determinant()) < 1e-3) A += Matrix::Identity(2, 2) * 0.1;
      const double norm = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
      if (norm >= 0.9) A *= 0.9 / norm;
      maps.push_back({A, vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)), 1.0 / n});
    }
    const IFSSpec spec(2, maps);
    const auto cert = ssc_certify(spec, 6, 20000);
    if (cert.verdict == SSCCertificate::Verdict::Certified) {
      ++certified;
      EXPECT_LT(det_sum(spec), 1.0);
    }
  }
  EXPECT_GT(certified, 0);
}

TEST(DetSum, KnownValues) {
  EXPECT_NEAR(det_sum(builtin("corners")), 4.0 / 9.0, 1e-15);
  const IFSSpec one(2, {{Matrix::Identity(2, 2) * 0.9, Vector::Zero(2), 1.0}});
  EXPECT_NEAR(det_sum(one), 0.81, 1e-15);
}

TEST(MeasureDimension, UniformSegment) {
  PointCloud c;
  c.d = 2;
  const int n = 20000;
  c.points.resize(2, n);
  Rng rng(13);
  for (int i = 0; i < n; ++i) c.points.col(i) = vec2(rng.uniform(), 0.5);
  c.prefix.assign(n, 0);
  EXPECT_NEAR(measure_dimension_estimate(c).estimate, 1.0, 0.05);
}

TEST(MeasureDimension, CornersCarpet) {
  SampleOptions o;
  o.n = 50000;
  o.seed = 14;
  const auto est = measure_dimension_estimate(sample_measure(builtin("corners"), o));
  EXPECT_NEAR(est.estimate, std::log(4.0) / std::log(3.0), 0.05);
  EXPECT_GT(est.fit.r2, 0.99);
}

TEST(MeasureDimension, PointMassIsZero) {
  PointCloud c;
  c.d = 2;
  c.points = Matrix::Ones(2, 500);
  c.prefix.assign(500, 0);
  const auto est = measure_dimension_estimate(c);
  EXPECT_TRUE(est.degenerate);
  EXPECT_EQ(est.estimate, 0.0);
}

TEST(RectangleCover, ConformalMapsUseSquares) {
  const auto stats = rectangle_cover_stats(builtin("corners"), 4, 1);
  ASSERT_EQ(stats.records.size(), 1u);
  const auto& r = stats.records[0];
  EXPECT_EQ(r.multiplicity, 256.0);
  EXPECT_EQ(r.counts[0], 1);
  EXPECT_NEAR(r.local_exponent, std::log(r.mu) / std::log(r.alphas(0)), 1e-12);
  EXPECT_NEAR(r.local_exponent, std::log(4.0) / std::log(3.0), 1e-12);
}

TEST(RectangleCover, DiagonalCounts) {
  const Matrix A = Eigen::Vector2d(0.5, 0.25).asDiagonal();
  const IFSSpec spec(2, {{A, vec2(0, 0), 0.5}, {A, vec2(0.5, 0), 0.5}});
  const auto stats = rectangle_cover_stats(spec, 8, 1);
  ASSERT_EQ(stats.records.size(), 1u);
  EXPECT_EQ(stats.records[0].counts[0], 256);
  EXPECT_EQ(stats.records[0].d_w, 256.0);
  // log(2^-8 / 2^8) / log(4^-8) = 1.
  EXPECT_NEAR(stats.records[0].local_exponent, 1.0, 1e-12);
}

TEST(RectangleCover, KZeroAndLimits) {
  const auto stats = rectangle_cover_stats(flagship_spec(), 3, 0);
  EXPECT_EQ(stats.records.size(), 8u);
  for (const auto& r : stats.records) {
    EXPECT_TRUE(r.counts.empty());
    EXPECT_EQ(r.d_w, 1.0);
    EXPECT_EQ(r.multiplicity, 125.0);
  }
  std::vector<AffineMap> maps;
  for (int i = 0; i < 11; ++i) maps.push_back({Matrix::Identity(1, 1) * (0.01 + 0.005 * i), Vector::Zero(1), 1.0 / 11});
  EXPECT_THROW(rectangle_cover_stats(IFSSpec(1, maps), 6, 0), Error);
  EXPECT_THROW(rectangle_cover_stats(flagship_spec(), 3, 2), Error);
}

TEST(RectangleCover, FlagshipLocalExponentsBelowLyapunovDimension) {
  const auto stats = rectangle_cover_stats(flagship_spec(), 10, 1);
  EXPECT_EQ(stats.records.size(), 1024u);
  // D of the flagship from its exponents (about 1.595).
  EXPECT_LT(stats.max_local_exponent, 1.595 + 0.1);
}

TEST(ConditionalEntropy, ConstantProjectionKeepsPriorEntropy) {
  const auto spec = cantor_on_axis();
  SampleOptions o;
  o.n = 5000;
  const auto cloud = sample_measure(spec, o);
  const auto ce = conditional_entropy(cloud, Subspace::coordinate(2, {0}), 8, 1);
  EXPECT_NEAR(ce.H, ce.H_prior, 1e-12);
  EXPECT_NEAR(ce.H_prior, std::log(2.0), 1e-3);
  EXPECT_EQ(ce.cells, 1);
}

TEST(ConditionalEntropy, SeparatedProjectionDeterminesSymbol) {
  SampleOptions o;
  o.n = 5000;
  const auto cloud = sample_measure(cantor_on_axis(), o);
  for (int n : {2, 6, 10}) EXPECT_EQ(conditional_entropy(cloud, Subspace::coordinate(2, {1}), n, 2).H, 0.0);
}

TEST(ConditionalEntropy, WeaklyDecreasingUnderRefinement) {
  const auto spec = flagship_spec();
  Rng rng(15);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SampleOptions o;
    o.n = 20000;
    o.seed = seed;
    const auto cloud = sample_measure(spec, o);
    const auto W = Subspace::random(2, 1, rng);
    double last = 1e9;
    for (int n = 2; n <= 10; ++n) {
      const double H = conditional_entropy(cloud, W, n, seed).H;
      EXPECT_GE(H, 0.0);
      EXPECT_LE(H, last + 0.02);
      last = H;
    }
  }
}

TEST(ConditionalEntropy, UndersampledFlag) {
  SampleOptions o;
  o.n = 200;
  const auto cloud = sample_measure(flagship_spec(), o);
  const auto ce = conditional_entropy(cloud, Subspace::coordinate(2, {0}), 20, 3);
  EXPECT_TRUE(ce.undersampled);
  EXPECT_GT(ce.singleton_mass, 0.2);
}

TEST(SliceDimension, TrivialRatios) {
  SampleOptions o;
  o.n = 4000;
  const auto cloud = sample_measure(cantor_on_axis(), o);
  GrassmannCloud vertical{2, 1, {Subspace::coordinate(2, {1})}, {}};
  const auto zero = slice_dimension_F(vertical, cloud, -1.0);
  for (double F : zero.F) EXPECT_EQ(F, 0.0);
  GrassmannCloud horizontal{2, 1, {Subspace::coordinate(2, {0})}, {}};
  const double h = conditional_entropy(cloud, Subspace::coordinate(2, {0}), 6, 0).H_prior;
  const auto one = slice_dimension_F(horizontal, cloud, -h);
  for (double F : one.F) EXPECT_NEAR(F, 1.0, 1e-12);
  EXPECT_NEAR(one.extrapolated, 1.0, 1e-9);
  EXPECT_THROW(slice_dimension_F(horizontal, cloud, 0.5), Error);
}

TEST(PointCloudCsv, RoundTrip) {
  SampleOptions o;
  o.n = 100;
  o.seed = 77;
  const auto cloud = sample_measure(flagship_spec(), o);
  std::stringstream ss;
  write_point_cloud_csv(ss, cloud);
  const auto back = read_point_cloud_csv(ss);
  EXPECT_EQ(back.d, 2);
  EXPECT_EQ(back.points, cloud.points);
  EXPECT_EQ(back.prefix, cloud.prefix);
  EXPECT_EQ(back.provenance.seed, 77u);
  std::stringstream bad("1,2,x\n");
  EXPECT_THROW(read_point_cloud_csv(bad), Error);
  std::stringstream ragged("1,2,0\n1,0\n");
  EXPECT_THROW(read_point_cloud_csv(ragged), Error);
}
