#pragma once

// Built-in example families.
//
//   e23       A = {[[1,2],[0,1]], [[1,0],[2,1]]}
//   e24       A^{-1} = {[[E−L,−1],[1,0]], [[E+L,−1],[1,0]]}, |E|+|L| < 2
//   cf        A^{-1} = {[[0,1],[1,n]] : n in ns}
//   corners   x/3 + {0, 2/3}^2, uniform weights
//   flagship  ten maps alternating s·e23 matrices, s = 0.2, separated pieces
//
// The scalar s multiplies every matrix; it leaves the Furstenberg measure
// unchanged and makes the maps contractions for spatial use.

#include <optional>
#include <string>
#include <vector>

#include "affinedim/ifs_spec.hpp"

namespace affinedim {

struct BuiltinParams {
  /// Defaults: 1 for e23/e24/cf, 1/3 for corners, 0.2 for flagship.
  std::optional<double> s;
  /// One per map; empty means all zero.
  std::vector<Vector> translations;
  /// Empty means uniform.
  std::vector<double> p;
  double E = 1.0;
  double L = 0.5;
  std::vector<int> ns{1, 2};
};

std::vector<std::string> builtin_names();

/// Throws Error for unknown names or invalid parameters.
IFSSpec builtin(const std::string& name, const BuiltinParams& params = {});

/// The ten-map spec used for the spatial checks: ‖A_λ‖ < 1/2 and
/// certified separation.
IFSSpec flagship_spec();

}  // namespace affinedim
