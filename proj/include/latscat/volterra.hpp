#pragma once

// Neumann-series solver for matrix Volterra summation equations
//
//   f(n) = g(n) + sum_m K(n, m) f(m),     K(n, m) = w(n, m) F(m),
//
// where the sum runs over m > n (strictly_after) or over every m in the range
// (whole_range), and F is nonzero on finitely many sites.

#include <functional>
#include <map>

#include "latscat/lattice_function.hpp"

namespace latscat {

enum class Coupling { strictly_after, whole_range };

struct VolterraProblem {
  Eigen::Index dim = 1;
  std::function<CMatrix(int n)> inhomogeneity;
  std::function<Complex(int n, int m)> weight;
  std::map<int, CMatrix> factors;
  // Bound on sup_{n >= k} ||K(n, m)||. Drives the choice of split.
  std::function<double(int k, int m)> dominating;
  Coupling coupling = Coupling::strictly_after;
};

struct VolterraOptions {
  double tol = 1e-10;
  int max_iterations = 200;
  // strictly_after only: fill sites left of the split by exact back-substitution.
  // When false the returned window starts at the split.
  bool extend_below_split = true;
  Role role = Role::free;
  Complex z = 0.0;
  Complex energy = 0.0;
};

// Picks the smallest split k in the range whose dominating tail sum_{m > k} M_k(m) is
// below 1/2 (for whole_range the split is the left end and the tail must qualify
// there), iterates the Neumann series on [k, hi] until successive iterates differ by at
// most tol/2, and reports the fixed-point residual in the diagnostics.
//
// Throws TruncationError when factors lie right of the range, when no admissible split
// exists, or when the iteration cap is hit.
LatticeMatrixFunction solve_volterra(const VolterraProblem& p, Window range,
                                     const VolterraOptions& opts = {});

}  // namespace latscat
