#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace affinedim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest ambient dimension supported by the exterior-power code.
inline constexpr int kMaxDim = 8;

/// Raised when an input violates an operation's preconditions
/// (shape mismatch, singular matrix, malformed spec file, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by soundness checks that can only fail through a bug.
class ConsistencyAlarm : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

}  // namespace affinedim
