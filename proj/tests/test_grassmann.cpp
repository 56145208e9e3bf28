#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "affinedim/grassmann.hpp"
#include "affinedim/rng.hpp"

using namespace affinedim;

namespace {

Matrix gaussian(int rows, int cols, Rng& rng) {
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.normal();
  return M;
}

// ‖P_W − P_U‖ straight from the projectors.
double projector_oracle(const Subspace& W, const Subspace& U) {
  const Matrix D = W.frame() * W.frame().transpose() - U.frame() * U.frame().transpose();
  return Eigen::JacobiSVD<Matrix>(D).singularValues()(0);
}

Subspace line(double angle) {
  Matrix b(2, 1);
  b << std::cos(angle), std::sin(angle);
  return Subspace(b);
}

}  // namespace

TEST(Grassmann, FrameIsOrthonormal) {
  Rng rng(1);
  const Subspace W(gaussian(5, 3, rng));
  EXPECT_LT((W.frame().transpose() * W.frame() - Matrix::Identity(3, 3)).norm(), 1e-13);
  const Matrix C = W.complement();
  EXPECT_EQ(C.cols(), 2);
  EXPECT_LT((W.frame().transpose() * C).norm(), 1e-13);
}

TEST(Grassmann, DependentBasisRejected) {
  Matrix b(3, 2);
  b << 1, 2, 1, 2, 1, 2;
  EXPECT_THROW(Subspace{b}, Error);
}

TEST(Grassmann, DistanceMatchesProjectorNorm) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 5;
    const int m = 1 + trial % (d - 1);
    const auto W = Subspace::random(d, m, rng);
    const auto U = Subspace::random(d, m, rng);
    EXPECT_NEAR(dist(W, U), projector_oracle(W, U), 1e-12);
    EXPECT_NEAR(dist(W, U), dist(U, W), 1e-14);
    EXPECT_LE(dist(W, U), 1.0);
  }
}

TEST(Grassmann, DistanceIsSineOfAngleBetweenLines) {
  for (double a : {0.0, 0.1, 0.7, 1.2, M_PI / 2})
    EXPECT_NEAR(dist(line(0.0), line(a)), std::abs(std::sin(a)), 1e-15);
}

TEST(Grassmann, TinyAnglesResolved) {
  for (double a : {1e-6, 1e-9, 1e-12}) EXPECT_NEAR(dist(line(0.3), line(0.3 + a)) / a, 1.0, 1e-4);
  Rng rng(3);
  const auto W = Subspace::random(4, 2, rng);
  EXPECT_LT(dist(W, Subspace(W.frame() * Eigen::Rotation2Dd(0.4).toRotationMatrix())), 1e-15);
}

TEST(Grassmann, TriangleInequality) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto A = Subspace::random(4, 2, rng), B = Subspace::random(4, 2, rng),
               C = Subspace::random(4, 2, rng);
    EXPECT_LE(dist(A, C), dist(A, B) + dist(B, C) + 1e-14);
  }
}

TEST(Grassmann, ActionComposes) {
  Rng rng(5);
  const Matrix A = gaussian(4, 4, rng), B = gaussian(4, 4, rng);
  const auto W = Subspace::random(4, 2, rng);
  EXPECT_LT(dist(act(A * B, W), act(A, act(B, W))), 1e-12);
  EXPECT_LT(dist(act(Matrix::Identity(4, 4), W), W), 1e-15);
  EXPECT_LT(dist(act(3.0 * A, W), act(A, W)), 1e-14);
}

TEST(Grassmann, ActionRejectsCollapse) {
  Matrix M = Matrix::Zero(3, 3);
  M(0, 0) = 1.0;
  EXPECT_THROW(act(M, Subspace::coordinate(3, {0, 1})), Error);
}

TEST(Grassmann, PluckerRecoversLines) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto W = Subspace::random(3, 1, rng), U = Subspace::random(3, 1, rng);
    EXPECT_NEAR(proj_dist(psi(W), psi(U)), dist(W, U), 1e-12);
  }
}

TEST(Grassmann, PluckerIsFrameIndependent) {
  Rng rng(7);
  const auto W = Subspace::random(5, 2, rng);
  const Matrix mixed = W.frame() * (Matrix(2, 2) << 2, 1, -1, 3).finished();
  const auto a = psi(W), b = psi(Subspace(mixed));
  EXPECT_LT((a.direction.coeffs - b.direction.coeffs).norm(), 1e-12);
  EXPECT_NEAR(a.direction.norm(), 1.0, 1e-14);
  EXPECT_LT(proj_dist(a, b), 1e-7);
}

TEST(Grassmann, PluckerDistanceDominatesProjectionDistance) {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto W = Subspace::random(4, 2, rng), U = Subspace::random(4, 2, rng);
    const double pd = proj_dist(psi(W), psi(U));
    EXPECT_GE(pd, 0.0);
    EXPECT_LE(pd, 1.0 + 1e-15);
    // 1 − ∏cos²θ_i dominates sin²θ_max.
    EXPECT_GE(pd + 1e-12, dist(W, U));
  }
}

TEST(Grassmann, Transversality) {
  const auto U = Subspace::coordinate(3, {0});
  EXPECT_TRUE(transversal(U, Subspace::coordinate(3, {0})));
  EXPECT_FALSE(transversal(U, Subspace::coordinate(3, {1})));
  const auto P = Subspace::coordinate(4, {0, 1});
  EXPECT_TRUE(transversal(P, Subspace::coordinate(4, {0, 1})));
  EXPECT_FALSE(transversal(P, Subspace::coordinate(4, {1, 2})));
  Rng rng(9);
  int fails = 0;
  for (int i = 0; i < 1000; ++i) fails += !transversal(Subspace::random(4, 2, rng), Subspace::random(4, 2, rng));
  EXPECT_EQ(fails, 0);
}

TEST(Grassmann, TransversalityMarginIsSmallestSingularValue) {
  Rng rng(10);
  const auto U = Subspace::random(3, 1, rng), W = Subspace::random(3, 1, rng);
  Matrix stacked(3, 3);
  stacked << U.complement(), W.frame();
  EXPECT_NEAR(transversality_margin(U.complement(), W), Eigen::JacobiSVD<Matrix>(stacked).singularValues()(2),
              1e-14);
}

TEST(Grassmann, CsvRoundTrip) {
  Rng rng(11);
  const auto W = Subspace::random(4, 2, rng);
  std::ostringstream out;
  write_frame_csv(out, W);
  std::string row = out.str();
  if (!row.empty() && row.back() == '\n') row.pop_back();
  const auto back = parse_frame_csv(row, 4, 2);
  EXPECT_LT(dist(back, W), 1e-14);
  EXPECT_THROW(parse_frame_csv("1,2,3", 4, 2), Error);
}

TEST(Grassmann, PluckerMetricComparableToProjectionMetric) {
  Rng rng(12);
  for (int d = 2; d <= 5; ++d)
    for (int m = 1; m < d; ++m) {
      double lo = 1e300, hi = 0.0;
      for (int trial = 0; trial < 10000; ++trial) {
        const auto W = Subspace::random(d, m, rng), U = Subspace::random(d, m, rng);
        const double g = dist(W, U);
        if (g < 1e-6) continue;
        const double ratio = std::pow(proj_dist(psi(W), psi(U)) / g, 2);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      // 1 − ∏cos²θ_i lies between sin²θ_max and m·sin²θ_max.
      EXPECT_GE(lo, 1.0 - 1e-9) << "d=" << d << " m=" << m;
      EXPECT_LE(hi, m + 1e-9) << "d=" << d << " m=" << m;
    }
}

TEST(Grassmann, InverseActionAndOrthogonalInvariance) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4;
    const int m = 1 + trial % (d - 1);
    const Matrix M = gaussian(d, d, rng);
    const Matrix O = Eigen::HouseholderQR<Matrix>(gaussian(d, d, rng)).householderQ();
    const auto W = Subspace::random(d, m, rng), U = Subspace::random(d, m, rng);
    EXPECT_LT(dist(act(Matrix(M.inverse()), act(M, W)), W), 1e-8);
    EXPECT_NEAR(dist(act(O, W), act(O, U)), dist(W, U), 1e-9);
  }
}
