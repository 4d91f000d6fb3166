#pragma once

// Independent reference for compactly supported potentials: exact plane-wave data
// outside the support, propagated with 2L x 2L transfer matrices, and scattering data
// from linear matching against plane waves. Shares nothing with the Volterra path
// beyond the dense linear algebra.

#include "latscat/lattice_function.hpp"
#include "latscat/potential.hpp"

namespace latscat::oracle {

// Maps (u(n), u(n-1)) to (u(n+1), u(n)): [[E - V(n), -1], [1, 0]].
CMatrix transfer_matrix(const Potential& p, int n, Complex E);

// u_+^z on w: z^n for n >= max(support) + 1 (and on the right part of w), then
// transfer-matrix propagation to the left.
LatticeMatrixFunction jost_plus(Complex z, const Potential& p, Window w);
// u_-^{1/z} on w: z^{-n} left of the support, propagated to the right.
LatticeMatrixFunction jost_minus(Complex z, const Potential& p, Window w);

struct OracleScattering {
  Complex z;
  CMatrix M_plus, N_plus, M_minus, N_minus;
  CMatrix T_plus, T_minus, R_plus, R_minus;
  CMatrix S;
};

// Requires |z| = 1, z != +-1. Matching happens at the two sites just left of the support
// (for u_+) and just right of it (for u_-^{1/z}).
OracleScattering smatrix(Complex z, const Potential& p);

// Max of the worst S-block deviation and the worst relative Jost-value deviation over
// the common window.
struct Comparison {
  double s_deviation = 0.0;
  double jost_deviation = 0.0;
  double max() const { return s_deviation > jost_deviation ? s_deviation : jost_deviation; }
};

// Wraps the main-path results the oracle is compared with, so this header does not
// depend on the solver modules.
struct MainPathResult {
  CMatrix T_plus, T_minus, R_plus, R_minus;
  const LatticeMatrixFunction* jost_plus = nullptr;
  const LatticeMatrixFunction* jost_minus = nullptr;
};

Comparison compare(Complex z, const Potential& p, const MainPathResult& main);

// Max over n of ||W(n) - W(n0)||, W the Wronskian of the oracle's u_+^z with itself at
// sites of the whole window; a rounding-level quantity for |z| = 1.
double wronskian_drift(Complex z, const Potential& p, Window w);

}  // namespace latscat::oracle
