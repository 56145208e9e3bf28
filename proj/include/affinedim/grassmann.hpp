#pragma once

// Points of the Grassmannian G(d, m) as orthonormal frames, the projection
// metric ||P_W - P_U||, the Plücker embedding into P(Λ^m R^d) and its
// projective metric, and the linear action M·W.

#include <iosfwd>
#include <vector>

#include "affinedim/common.hpp"
#include "affinedim/exterior.hpp"

namespace affinedim {

/// An m-dimensional subspace of R^d stored as a d×m orthonormal frame.
/// Frames are not unique; compare subspaces with dist(), never frame().
class Subspace {
 public:
  Subspace() = default;
  /// Orthonormalizes the columns of `basis`; throws if they are dependent.
  explicit Subspace(const Matrix& basis);

  /// Span of the given standard basis vectors (0-based coordinates).
  static Subspace coordinate(int d, std::initializer_list<int> axes);
  /// Haar-distributed random subspace.
  static Subspace random(int d, int m, class Rng& rng);
  /// Wraps a frame already known to be orthonormal (checked in debug builds).
  static Subspace from_orthonormal(Matrix frame);

  int d() const { return static_cast<int>(frame_.rows()); }
  int m() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }

  /// Frame of the orthogonal complement, d×(d−m).
  Matrix complement() const;

 private:
  Matrix frame_;
};

/// Unit decomposable m-vector up to sign. The stored representative has its
/// largest-magnitude coefficient positive.
struct ProjectivePoint {
  MultiVector direction;
};

Matrix projector(const Subspace& W);

/// ||P_W − P_U|| in operator norm (sine of the largest principal angle).
double dist(const Subspace& W, const Subspace& U);

/// Raw-frame variant of dist for hot loops; frames must be orthonormal,
/// d×m, and column-major contiguous.
double frame_dist(const double* w, const double* u, int d, int m);

/// Below this relative pivot the image frame M·W is treated as collapsed.
inline constexpr double kRankCollapseTolerance = 1e-13;

/// M·W, re-orthonormalized.
Subspace act(const Matrix& M, const Subspace& W);

ProjectivePoint psi(const Subspace& W);

/// (1 − <a,b>²)^{1/2}, evaluated without cancellation near 0.
double proj_dist(const ProjectivePoint& a, const ProjectivePoint& b);

inline constexpr double kTransversalityTolerance = 1e-9;

/// True iff U^⊥ + W = R^d, judged by the smallest singular value of
/// [frame(U^⊥) | frame(W)] exceeding tol.
bool transversal(const Subspace& U, const Subspace& W,
                 double tol = kTransversalityTolerance);
/// Same test with U^⊥ precomputed (d×(d−m)).
double transversality_margin(const Matrix& U_perp, const Subspace& W);

/// Frame entries written column-major as one CSV row.
void write_frame_csv(std::ostream& out, const Subspace& W);
/// Parses one CSV row of d*m column-major entries.
Subspace parse_frame_csv(const std::string& line, int d, int m);

}  // namespace affinedim
