#pragma once

#include <optional>

namespace latscat {

struct SolverConfig {
  double tol = 1e-10;           // solver residual tolerance
  double identity_tol = 1e-9;   // algebraic identities composed from several solves
  double rank_tol = 1e-8;       // relative rank threshold for kernels at z = 1
  std::optional<int> pad;       // window padding; default max(20, support width)
  // When false, non-constant Wronskians are reported through constancy_residual instead of
  // throwing, so that downstream certificates can still be evaluated.
  bool strict_constancy = true;
};

}  // namespace latscat
