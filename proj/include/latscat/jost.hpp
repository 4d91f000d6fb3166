#pragma once

// Jost solutions u_+^z, u_-^{1/z}, the threshold solutions v_+-^1 and solutions with
// prescribed data at sites 0 and 1, all as L x L matrix functions on a finite window.

#include <optional>

#include "latscat/freesol.hpp"
#include "latscat/lattice_function.hpp"
#include "latscat/potential.hpp"

namespace latscat {

inline constexpr int kMinPad = 20;

// Support (together with sites 0 and 1) padded by `pad`, default max(20, support width).
Window default_window(const Potential& p, std::optional<int> pad = std::nullopt);

// u_+^z: u(n) = z^n for n right of the support. Solved as a rescaled Volterra equation on
// a contractive right part of the window, then continued leftward by the recurrence.
LatticeMatrixFunction jost_plus(const SpectralParameter& z, const Potential& p, Window w,
                                double tol = 1e-10);
// u_-^{1/z}: u(n) = z^{-n} left of the support.
LatticeMatrixFunction jost_minus(const SpectralParameter& z, const Potential& p, Window w,
                                 double tol = 1e-10);

// v_+^1(n) = n(1 + o(1)) as n -> +inf, at E = 2.
LatticeMatrixFunction jost_v_plus(const Potential& p, Window w, double tol = 1e-10);
// v_-^1(n) = n(1 + o(1)) as n -> -inf, at E = 2.
LatticeMatrixFunction jost_v_minus(const Potential& p, Window w, double tol = 1e-10);

// Psi^z with Psi(0) = a, Psi(1) = b, by variation of parameters against s^z and tau^z.
// diagnostics.path_deviation compares with prescribed_by_recursion.
LatticeMatrixFunction prescribed_solution(const SpectralParameter& z, const CMatrix& a,
                                          const CMatrix& b, const Potential& p, Window w,
                                          double tol = 1e-10);
// The same solution by the raw three-term recurrence from (a, b).
LatticeMatrixFunction prescribed_by_recursion(const SpectralParameter& z, const CMatrix& a,
                                              const CMatrix& b, const Potential& p, Window w);
// Phi^z: prescribed data a = u_+^1(0), b = u_+^1(1).
LatticeMatrixFunction phi_solution(const SpectralParameter& z, const Potential& p, Window w,
                                   double tol = 1e-10);

// Relative max-site distance max_n ||u(n) - v(n)|| / max(1, ||v(n)||) over the overlap.
double relative_distance(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v);

}  // namespace latscat
