#include "affinedim/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "affinedim/rng.hpp"

namespace affinedim {
namespace {

Matrix thin_q(const Eigen::HouseholderQR<Matrix>& qr, Eigen::Index rows, Eigen::Index cols) {
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

// Smallest |R_ii| relative to the largest column norm of the input.
double relative_pivot(const Eigen::HouseholderQR<Matrix>& qr, const Matrix& input) {
  const auto& R = qr.matrixQR();
  double smallest = std::abs(R(0, 0));
  for (Eigen::Index i = 1; i < input.cols(); ++i) smallest = std::min(smallest, std::abs(R(i, i)));
  const double scale = input.colwise().norm().maxCoeff();
  return scale > 0.0 ? smallest / scale : 0.0;
}

#ifndef NDEBUG
void check_frame_drift(const Matrix& frame) {
  thread_local std::uint64_t counter = 0;
  if ((++counter & ((1u << 20) - 1)) != 0) return;
  const Matrix gram = frame.transpose() * frame;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw ConsistencyAlarm("grassmann: frame drifted from orthonormality");
}
#endif

}  // namespace

Subspace::Subspace(const Matrix& basis) {
  require(basis.cols() >= 1 && basis.cols() <= basis.rows(),
          "subspace: need 1 <= m <= d basis vectors");
  Eigen::HouseholderQR<Matrix> qr(basis);
  require(relative_pivot(qr, basis) > kRankCollapseTolerance,
          "subspace: basis vectors are linearly dependent");
  frame_ = thin_q(qr, basis.rows(), basis.cols());
}

Subspace Subspace::coordinate(int d, std::initializer_list<int> axes) {
  Matrix basis = Matrix::Zero(d, static_cast<Eigen::Index>(axes.size()));
  Eigen::Index j = 0;
  for (int a : axes) {
    require(a >= 0 && a < d, "subspace: coordinate axis out of range");
    basis(a, j++) = 1.0;
  }
  return Subspace(basis);
}

Subspace Subspace::random(int d, int m, Rng& rng) {
  Matrix g(d, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.normal();
  return Subspace(g);
}

Subspace Subspace::from_orthonormal(Matrix frame) {
  Subspace s;
  s.frame_ = std::move(frame);
#ifndef NDEBUG
  const Matrix gram = s.frame_.transpose() * s.frame_;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw Error("subspace: frame is not orthonormal");
#endif
  return s;
}

Matrix Subspace::complement() const {
  const auto d = frame_.rows();
  const auto m = frame_.cols();
  Eigen::HouseholderQR<Matrix> qr(frame_);
  const Matrix Q = qr.householderQ();
  return Q.rightCols(d - m);
}

Matrix projector(const Subspace& W) { return W.frame() * W.frame().transpose(); }

double frame_dist(const double* w, const double* u, int d, int m) {
  if (m == 1) {
    double c = 0.0;
    for (int i = 0; i < d; ++i) c += u[i] * w[i];
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double r = w[i] - c * u[i];
      s += r * r;
    }
    return std::min(1.0, std::sqrt(s));
  }
  Eigen::Map<const Matrix> W(w, d, m);
  Eigen::Map<const Matrix> U(u, d, m);
  const Matrix B = W - U * (U.transpose() * W);
  const Matrix G = B.transpose() * B;
  double top;
  if (m == 2) {
    const double a = G(0, 0), b = G(0, 1), c = G(1, 1);
    const double mean = 0.5 * (a + c);
    const double half = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
    top = mean + half;
  } else {
    top = Eigen::SelfAdjointEigenSolver<Matrix>(G, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  }
  return std::min(1.0, std::sqrt(std::max(0.0, top)));
}

double dist(const Subspace& W, const Subspace& U) {
  require(W.d() == U.d() && W.m() == U.m(), "dist: subspaces have different shapes");
  return frame_dist(W.frame().data(), U.frame().data(), W.d(), W.m());
}

Subspace act(const Matrix& M, const Subspace& W) {
  require(M.rows() == W.d() && M.cols() == W.d(), "act: matrix shape does not match subspace");
  const Matrix image = M * W.frame();
  Eigen::HouseholderQR<Matrix> qr(image);
  if (!(relative_pivot(qr, image) > kRankCollapseTolerance))
    throw Error("act: rank collapse (matrix singular or ill-conditioned on W)");
  Subspace out = Subspace::from_orthonormal(thin_q(qr, image.rows(), image.cols()));
#ifndef NDEBUG
  check_frame_drift(out.frame());
#endif
  return out;
}

ProjectivePoint psi(const Subspace& W) {
  MultiVector xi = wedge(W.frame());
  xi.coeffs /= xi.coeffs.norm();
  Eigen::Index pivot = 0;
  xi.coeffs.cwiseAbs().maxCoeff(&pivot);
  if (xi.coeffs(pivot) < 0.0) xi.coeffs = -xi.coeffs;
  return ProjectivePoint{std::move(xi)};
}

double proj_dist(const ProjectivePoint& a, const ProjectivePoint& b) {
  const double c = inner(a.direction, b.direction);
  const Vector diff = c >= 0.0 ? Vector(a.direction.coeffs - b.direction.coeffs)
                               : Vector(a.direction.coeffs + b.direction.coeffs);
  const double t = 0.5 * diff.squaredNorm();  // 1 − |c| for unit vectors
  return std::clamp(std::sqrt(std::max(0.0, t * (2.0 - t))), 0.0, 1.0);
}

double transversality_margin(const Matrix& U_perp, const Subspace& W) {
  require(U_perp.rows() == W.d(), "transversal: dimension mismatch");
  require(U_perp.cols() + W.m() >= W.d(), "transversal: need dim(U^⊥) + m >= d");
  Matrix joined(W.d(), U_perp.cols() + W.m());
  joined << U_perp, W.frame();
  return Eigen::JacobiSVD<Matrix>(joined).singularValues().minCoeff();
}

bool transversal(const Subspace& U, const Subspace& W, double tol) {
  require(U.d() == W.d(), "transversal: subspaces live in different spaces");
  return transversality_margin(U.complement(), W) > tol;
}

void write_frame_csv(std::ostream& out, const Subspace& W) {
  const Matrix& f = W.frame();
  char buf[32];
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", f.data()[k]);
    if (k) out << ',';
    out << buf;
  }
  out << '\n';
}

Subspace parse_frame_csv(const std::string& line, int d, int m) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
  require(static_cast<int>(values.size()) == d * m, "frame csv: expected d*m entries per row");
  Matrix frame = Eigen::Map<Matrix>(values.data(), d, m);
  return Subspace(frame);
}

}  // namespace affinedim
