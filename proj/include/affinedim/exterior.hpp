#pragma once

// Exterior powers of R^d: wedge products, compound matrices and the
// induced inner product on alternating m-forms.
//
// Basis of Λ^m(R^d): e_{i_1}∧...∧e_{i_m} with i_1 < ... < i_m, ordered
// lexicographically. Indices are 0-based in code ({0,1} is e_1∧e_2).

#include <cstdint>
#include <span>
#include <vector>

#include "affinedim/common.hpp"

namespace affinedim {

std::int64_t binomial(int n, int k);

/// q = C(d, m), the dimension of Λ^m(R^d).
int wedge_dimension(int d, int m);

/// A strictly increasing m-tuple of coordinates together with its
/// lexicographic rank.
struct BasisIndex {
  std::vector<int> indices;
  int rank = 0;
};

/// Tuple at lexicographic position `rank`.
BasisIndex basis_index(int d, int m, int rank);
/// Lexicographic rank of a strictly increasing tuple.
int basis_rank(int d, std::span<const int> indices);
/// All q tuples in rank order.
std::vector<std::vector<int>> basis_tuples(int d, int m);

struct MultiVector {
  int d = 0;
  int m = 0;
  Vector coeffs;

  MultiVector() = default;
  MultiVector(int d, int m, Vector coeffs);

  double norm() const { return coeffs.norm(); }
};

/// Matrix of Λ^m M in the lexicographic wedge basis.
struct CompoundMatrix {
  int d = 0;
  int m = 0;
  Matrix entries;
};

/// x_1∧...∧x_m for the columns of `vectors` (d×m).
MultiVector wedge(const Matrix& vectors);
MultiVector wedge(std::span<const Vector> vectors);

/// Determinant of the submatrix of M at the given rows and columns.
double minor(const Matrix& M, std::span<const int> rows,
             std::span<const int> cols);

/// Rejects M when alpha_d(M)/alpha_1(M) < this.
inline constexpr double kInvertibilityTolerance = 1e-12;

/// Λ^m M; throws Error when M is singular within kInvertibilityTolerance.
CompoundMatrix compound(const Matrix& M, int m);
/// Λ^m M without the invertibility guard (used for algebra spans).
CompoundMatrix compound_unchecked(const Matrix& M, int m);

/// Induced inner product; the wedge basis is orthonormal for it, so this is
/// the Euclidean product of coefficient vectors.
double inner(const MultiVector& u, const MultiVector& v);

}  // namespace affinedim
