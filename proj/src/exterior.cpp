#include "affinedim/exterior.hpp"

#include <string>

namespace affinedim {

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int wedge_dimension(int d, int m) {
  require(d >= 1 && d <= kMaxDim, "exterior: d must lie in 1.." + std::to_string(kMaxDim));
  require(m >= 1 && m <= d, "exterior: degree m must lie in 1..d");
  return static_cast<int>(binomial(d, m));
}

BasisIndex basis_index(int d, int m, int rank) {
  const int q = wedge_dimension(d, m);
  require(rank >= 0 && rank < q, "exterior: basis rank out of range");
  BasisIndex out;
  out.rank = rank;
  int remaining = rank;
  int next = 0;
  for (int slot = 0; slot < m; ++slot) {
    // Skip whole blocks of tuples whose current slot is smaller than wanted.
    for (int c = next;; ++c) {
      const auto block = binomial(d - c - 1, m - slot - 1);
      if (remaining < block) {
        out.indices.push_back(c);
        next = c + 1;
        break;
      }
      remaining -= static_cast<int>(block);
    }
  }
  return out;
}

int basis_rank(int d, std::span<const int> indices) {
  const int m = static_cast<int>(indices.size());
  wedge_dimension(d, m);
  int rank = 0;
  int prev = -1;
  for (int slot = 0; slot < m; ++slot) {
    const int c = indices[slot];
    require(c > prev && c < d, "exterior: indices must be strictly increasing in [0, d)");
    for (int skipped = prev + 1; skipped < c; ++skipped)
      rank += static_cast<int>(binomial(d - skipped - 1, m - slot - 1));
    prev = c;
  }
  return rank;
}

std::vector<std::vector<int>> basis_tuples(int d, int m) {
  const int q = wedge_dimension(d, m);
  std::vector<std::vector<int>> out;
  out.reserve(q);
  std::vector<int> t(m);
  for (int i = 0; i < m; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    int i = m - 1;
    while (i >= 0 && t[i] == d - m + i) --i;
    if (i < 0) break;
    ++t[i];
    for (int j = i + 1; j < m; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

MultiVector::MultiVector(int d_, int m_, Vector c) : d(d_), m(m_), coeffs(std::move(c)) {
  require(coeffs.size() == wedge_dimension(d, m),
          "exterior: coefficient vector length must equal C(d, m)");
}

double minor(const Matrix& M, std::span<const int> rows, std::span<const int> cols) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  require(k == static_cast<Eigen::Index>(cols.size()), "exterior: minor must be square");
  Matrix sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = M(rows[i], cols[j]);
  if (k <= 4) return sub.determinant();  // cofactor expansion in Eigen
  return sub.partialPivLu().determinant();
}

MultiVector wedge(const Matrix& vectors) {
  const int d = static_cast<int>(vectors.rows());
  const int m = static_cast<int>(vectors.cols());
  require(m >= 1 && m <= d, "wedge: need 1 <= m <= d vectors");
  const auto tuples = basis_tuples(d, m);
  std::vector<int> all_cols(m);
  for (int j = 0; j < m; ++j) all_cols[j] = j;
  Vector c(static_cast<Eigen::Index>(tuples.size()));
  for (std::size_t r = 0; r < tuples.size(); ++r) c(r) = minor(vectors, tuples[r], all_cols);
  return MultiVector(d, m, std::move(c));
}

MultiVector wedge(std::span<const Vector> vectors) {
  require(!vectors.empty(), "wedge: no vectors");
  const auto d = vectors.front().size();
  Matrix frame(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require(vectors[j].size() == d, "wedge: vectors have different dimensions");
    frame.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return wedge(frame);
}

CompoundMatrix compound_unchecked(const Matrix& M, int m) {
  require(M.rows() == M.cols(), "compound: matrix must be square");
  const int d = static_cast<int>(M.rows());
  const auto tuples = basis_tuples(d, m);
  const auto q = static_cast<Eigen::Index>(tuples.size());
  CompoundMatrix out{d, m, Matrix(q, q)};
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < q; ++j) out.entries(i, j) = minor(M, tuples[i], tuples[j]);
  return out;
}

CompoundMatrix compound(const Matrix& M, int m) {
  require(M.rows() == M.cols(), "compound: matrix must be square");
  const Vector sv = Eigen::JacobiSVD<Matrix>(M).singularValues();
  require(sv(0) > 0.0 && sv(sv.size() - 1) / sv(0) >= kInvertibilityTolerance,
          "compound: matrix is singular within tolerance");
  return compound_unchecked(M, m);
}

double inner(const MultiVector& u, const MultiVector& v) {
  require(u.d == v.d && u.m == v.m, "inner: multivectors have different shapes");
  return u.coeffs.dot(v.coeffs);
}

}  // namespace affinedim
