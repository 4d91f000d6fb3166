#pragma once

// Wronskians W(u, v)(n) = i (u(n+1)^* v(n) - u(n)^* v(n+1)), the connection
// coefficients M_+-, N_+- built from them, and the algebraic identities they satisfy.

#include <optional>
#include <string>
#include <vector>

#include "latscat/freesol.hpp"
#include "latscat/lattice_function.hpp"
#include "latscat/potential.hpp"
#include "latscat/solver_config.hpp"

namespace latscat {

CMatrix wronskian_at(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v, int n);

struct WronskianValue {
  CMatrix value;
  // max_n ||W(n) - value|| / max(1, scale_n), scale_n = ||u(n+1)|| ||v(n)|| + ||u(n)|| ||v(n+1)||
  double constancy_residual = 0.0;
  double min_scale = 0.0;  // min_n max(1, scale_n): the error level of `value`
};

// Weighted mean of W(n) over the common window (weights 1 / max(1, scale_n)^2, so that
// growing solutions are not dominated by their largest sites). Requires conj(E_u) = E_v.
// With `strict`, throws InconsistentSolutionsError when the constancy residual exceeds
// 100 * identity_tol.
WronskianValue wronskian(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v,
                         double identity_tol = 1e-9, bool strict = true);

// The four Jost solutions needed for the connection coefficients at z:
// u_+^z, u_+^{conj z}, u_-^{1/z}, u_-^{1/conj z}.
struct JostQuartet {
  SpectralParameter z;
  LatticeMatrixFunction plus_z;
  LatticeMatrixFunction plus_zbar;
  LatticeMatrixFunction minus_z;
  LatticeMatrixFunction minus_zbar;
};

// Solves each distinct function once; for real z the conjugate pair is shared.
JostQuartet solve_jost_quartet(const SpectralParameter& z, const Potential& p, Window w,
                               double tol = 1e-10);
// The quartet at conj z, obtained by relabelling.
JostQuartet conjugated(const JostQuartet& q);

struct ConnectionCoefficients {
  Complex z;
  Complex nu;
  CMatrix M_plus;
  CMatrix M_minus;
  // Only defined on the unit circle.
  std::optional<CMatrix> N_plus;
  std::optional<CMatrix> N_minus;
  double constancy_residual = 0.0;
  // Max relative residual of both Jost decompositions (unit circle only).
  double decomposition_residual = 0.0;
};

// Throws BandEdgeError at z = +-1.
ConnectionCoefficients coefficients_from_quartet(const JostQuartet& q, const Potential& p,
                                                 const SolverConfig& cfg = {});
ConnectionCoefficients connection_coefficients(const SpectralParameter& z, const Potential& p,
                                               Window w, const SolverConfig& cfg = {});

struct Residual {
  std::string name;
  double value = 0.0;     // absolute / max(1, scale)
  double absolute = 0.0;  // spectral norm of lhs - rhs
  double scale = 0.0;     // sum of the norms of the terms that enter the identity
};

// Unit-circle identities; `at_conj` are the coefficients at conj z = 1/z. Residuals are
// relative to the size of the terms, since strongly reflecting potentials have
// ||M|| >> 1 and the products lose digits in proportion.
std::vector<Residual> check_identities(const ConnectionCoefficients& c,
                                       const ConnectionCoefficients& at_conj);

// Jost-solution Wronskians with known values: W(u_+^{zbar}, u_+^z) = 0,
// W(u_-^{1/zbar}, u_-^{1/z}) = 0, and on the unit circle W(u_+^z, u_+^z) = W(u_-^z, u_-^z) = 1/nu.
std::vector<Residual> wronskian_identity_residuals(const JostQuartet& q, double identity_tol = 1e-9);

// Spectral-norm residual of the factorisation of W(u_-^{1/zbar}, u_+^z) through Phi^z and
// Phi^{zbar}, relative to max(1, sum of the norms of the three terms). Throws
// AssumptionViolation when u_+^1(1) is numerically singular.
double factorization_residual(const SpectralParameter& z, const Potential& p, Window w,
                              const SolverConfig& cfg = {});

// Relative decomposition residual max_n ||lhs(n) - a(n) A - b(n) B|| / max(1, ||lhs(n)||).
double decomposition_residual(const LatticeMatrixFunction& lhs, const LatticeMatrixFunction& a,
                              const CMatrix& A, const LatticeMatrixFunction& b, const CMatrix& B);

}  // namespace latscat
