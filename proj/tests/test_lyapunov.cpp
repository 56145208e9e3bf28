#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "affinedim/lyapunov.hpp"

using namespace affinedim;

namespace {

// Expected exponents of a diagonal family: sorted p-averages of log|a_i|.
Vector diagonal_oracle(const std::vector<Vector>& diags, const std::vector<double>& p) {
  Vector g = Vector::Zero(diags.front().size());
  for (std::size_t l = 0; l < diags.size(); ++l) g += p[l] * diags[l].array().abs().log().matrix();
  std::sort(g.data(), g.data() + g.size(), std::greater<>());
  return g;
}

Matrix rotation(double a) { return Eigen::Rotation2Dd(a).toRotationMatrix(); }

}  // namespace

TEST(Lyapunov, DiagonalFamilyMatchesOracle) {
  const std::vector<Vector> diags{(Vector(3) << 0.5, 0.9, 0.2).finished(),
                                  (Vector(3) << 0.3, 0.4, 0.7).finished()};
  const std::vector<double> p{0.35, 0.65};
  std::vector<Matrix> mats;
  for (const auto& v : diags) mats.push_back(v.asDiagonal());
  LyapunovOptions o;
  o.seed = 17;
  const auto est = estimate_lyapunov(mats, p, o);
  const Vector want = diagonal_oracle(diags, p);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(est.gammas(i) - want(i)), 5e-3);
    EXPECT_LT(std::abs(est.gammas(i) - want(i)), 3 * est.stderr_(i) + 1e-12);
  }
}

TEST(Lyapunov, ConformalFamilyHasEqualExponents) {
  const std::vector<Matrix> mats{0.5 * rotation(0.3), 0.25 * rotation(2.0)};
  const std::vector<double> p{0.5, 0.5};
  LyapunovOptions o;
  const auto est = estimate_lyapunov(mats, p, o);
  const double want = 0.5 * std::log(0.5) + 0.5 * std::log(0.25);
  EXPECT_NEAR(est.gammas(0), est.gammas(1), 1e-10);
  EXPECT_NEAR(est.gammas(0), want, 5e-3);
}

TEST(Lyapunov, SumOfExponentsIsMeanLogDeterminant) {
  Matrix A(2, 2), B(2, 2);
  A << 1, 2, 0, 1;
  B << 1, 0, 2, 1;
  const std::vector<Matrix> mats{0.3 * A, 0.6 * B};
  const std::vector<double> p{0.4, 0.6};
  LyapunovOptions o;
  const auto est = estimate_lyapunov(mats, p, o);
  EXPECT_NEAR(est.gammas.sum(), 0.4 * std::log(0.09) + 0.6 * std::log(0.36), 5e-3);
  EXPECT_GT(est.gammas(0) - est.gammas(1), 0.5);
}

TEST(Lyapunov, ThreadCountDoesNotChangeResult) {
  Matrix A(2, 2), B(2, 2);
  A << 1, 2, 0, 1;
  B << 1, 0, 2, 1;
  const std::vector<Matrix> mats{A, B};
  const std::vector<double> p{0.5, 0.5};
  LyapunovOptions o;
  o.n_substreams = 4;
  o.threads = 1;
  const auto a = estimate_lyapunov(mats, p, o);
  o.threads = 3;
  const auto b = estimate_lyapunov(mats, p, o);
  EXPECT_EQ(a.gammas, b.gammas);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(Lyapunov, InputValidation) {
  const std::vector<Matrix> mats{Matrix::Identity(2, 2)};
  const std::vector<double> p{1.0};
  LyapunovOptions o;
  o.n_steps = 999;
  EXPECT_THROW(estimate_lyapunov(mats, p, o), Error);
  o.n_steps = 1000;
  EXPECT_NO_THROW(estimate_lyapunov(mats, p, o));
  const std::vector<Matrix> singular{Matrix::Zero(2, 2)};
  EXPECT_THROW(estimate_lyapunov(singular, p, o), Error);
  const std::vector<double> bad{0.5};
  EXPECT_THROW(estimate_lyapunov(mats, bad, o), Error);
}

TEST(Lyapunov, HugeEntriesStayFinite) {
  const std::vector<Matrix> mats{Matrix::Identity(2, 2) * 1e300};
  const std::vector<double> p{1.0};
  LyapunovOptions o;
  o.n_steps = 1000;
  EXPECT_NO_THROW(estimate_lyapunov(mats, p, o));
}

TEST(Entropy, KnownValues) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_NEAR(entropy(half), std::log(2.0), 1e-15);
  const std::vector<double> one{1.0};
  EXPECT_EQ(entropy(one), 0.0);
}

TEST(Multiplicity, BottomCluster) {
  const Vector g = (Vector(4) << -0.5, -1.0, -2.0, -2.0005).finished();
  const auto m = multiplicity_m(g, 1e-3);
  EXPECT_EQ(m.m, 2);
  EXPECT_NEAR(m.gap, 1.0005, 1e-12);
  EXPECT_FALSE(m.ambiguous);
  EXPECT_EQ(multiplicity_m((Vector(2) << -1.0, -1.0).finished(), 1e-3).m, 2);
  EXPECT_EQ(multiplicity_m((Vector(2) << -1.0, -2.0).finished(), 1e-3).m, 1);
  EXPECT_TRUE(multiplicity_m((Vector(2) << -1.0, -1.0015).finished(), 1e-3).ambiguous);
}

TEST(LyapunovDimension, Branches) {
  // k = d - 1 = 1, D = 1 - (h + γ1)/γ2.
  const Vector g = (Vector(2) << -1.0, -3.0).finished();
  EXPECT_EQ(k_index(2.0, g), 1);
  EXPECT_NEAR(lyapunov_dimension(2.0, g), 1.0 + 1.0 / 3.0, 1e-15);
  // k = 0.
  const Vector tenth = Vector::Constant(2, -std::log(10.0));
  EXPECT_EQ(k_index(std::log(2.0), tenth), 0);
  EXPECT_NEAR(lyapunov_dimension(std::log(2.0), tenth), std::log(2.0) / std::log(10.0), 1e-15);
  // k = d.
  const Vector weak = Vector::Constant(2, std::log(0.9));
  EXPECT_EQ(k_index(std::log(10.0), weak), 2);
  EXPECT_NEAR(lyapunov_dimension(std::log(10.0), weak), -2 * std::log(10.0) / (2 * std::log(0.9)), 1e-12);
  // Corners: four maps x/3.
  const Vector third = Vector::Constant(2, std::log(1.0 / 3.0));
  EXPECT_NEAR(lyapunov_dimension(std::log(4.0), third), std::log(4.0) / std::log(3.0), 1e-15);
  EXPECT_THROW(lyapunov_dimension(1.0, (Vector(2) << 0.5, 0.1).finished()), Error);
}

TEST(LyapunovDimension, IsMonotoneInEntropy) {
  const Vector g = (Vector(3) << -0.4, -1.1, -2.5).finished();
  double last = -1.0;
  for (double h = 0.05; h < 4.0; h += 0.05) {
    const double D = lyapunov_dimension(h, g);
    EXPECT_GE(D, last);
    last = D;
  }
}

TEST(LyapunovReport, CornersAreExact) {
  std::vector<AffineMap> maps;
  for (double x : {0.0, 2.0 / 3})
    for (double y : {0.0, 2.0 / 3}) maps.push_back({Matrix::Identity(2, 2) / 3.0, (Vector(2) << x, y).finished(), 0.25});
  const IFSSpec spec(2, maps);
  LyapunovOptions o;
  const auto r = lyapunov_report(spec, o);
  EXPECT_NEAR(*r.D, std::log(4.0) / std::log(3.0), 1e-12);
  EXPECT_EQ(r.multiplicity.m, 2);
  EXPECT_EQ(r.k, 1);
}

TEST(LyapunovReport, UndefinedRegimeLeavesDEmpty) {
  const Matrix A = (Matrix(2, 2) << 1, 2, 0, 1).finished(), B = (Matrix(2, 2) << 1, 0, 2, 1).finished();
  const IFSSpec spec(2, {{A, Vector::Zero(2), 0.5}, {B, Vector::Zero(2), 0.5}});
  LyapunovOptions o;
  o.n_steps = 20000;
  const auto r = lyapunov_report(spec, o);
  EXPECT_FALSE(r.D);
  EXPECT_EQ(r.D_stderr, 0.0);
  EXPECT_NEAR(r.gammas.sum(), 0.0, 1e-9);
}
