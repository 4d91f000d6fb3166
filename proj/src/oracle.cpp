#include "latscat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "latscat/errors.hpp"

namespace latscat::oracle {

namespace {

Complex energy_of(Complex z) { return z + 1.0 / z; }

// Support bounds, with an empty support treated as the single site 0.
Window support_or_origin(const Potential& p) {
  return p.is_zero() ? Window{0, 0} : p.support();
}

void check_z(Complex z) {
  if (z == Complex(0.0)) throw DomainError("oracle: z must be nonzero");
}

}  // namespace

CMatrix transfer_matrix(const Potential& p, int n, Complex E) {
  const Eigen::Index L = p.dim();
  CMatrix T = CMatrix::Zero(2 * L, 2 * L);
  T.topLeftCorner(L, L) = E * CMatrix::Identity(L, L) - p.at(n);
  T.topRightCorner(L, L) = -CMatrix::Identity(L, L);
  T.bottomLeftCorner(L, L) = CMatrix::Identity(L, L);
  return T;
}

LatticeMatrixFunction jost_plus(Complex z, const Potential& p, Window w) {
  check_z(z);
  const Eigen::Index L = p.dim();
  const Window s = support_or_origin(p);
  if (w.hi < s.hi + 1) throw WindowError("oracle: window must extend right of the support");
  const Complex E = energy_of(z);
  LatticeMatrixFunction u(L, w, Role::jost_plus, z, E);
  const CMatrix one = CMatrix::Identity(L, L);
  const int start = std::max(w.lo, s.hi);
  for (int n = start; n <= w.hi; ++n) u.at(n) = std::pow(z, n) * one;
  // X_n = (u(n+1); u(n)), X_{n-1} = T(n)^{-1} X_n with T(n)^{-1} = [[0, 1], [-1, E - V(n)]].
  CMatrix X(2 * L, L);
  X << u(start + 1), u(start);
  for (int n = start; n > w.lo; --n) {
    CMatrix Tinv = CMatrix::Zero(2 * L, 2 * L);
    Tinv.topRightCorner(L, L) = one;
    Tinv.bottomLeftCorner(L, L) = -one;
    Tinv.bottomRightCorner(L, L) = E * one - p.at(n);
    X = (Tinv * X).eval();
    u.at(n - 1) = X.bottomRows(L);
  }
  return u;
}

LatticeMatrixFunction jost_minus(Complex z, const Potential& p, Window w) {
  check_z(z);
  const Eigen::Index L = p.dim();
  const Window s = support_or_origin(p);
  if (w.lo > s.lo - 1) throw WindowError("oracle: window must extend left of the support");
  const Complex E = energy_of(z);
  LatticeMatrixFunction u(L, w, Role::jost_minus, z, E);
  const CMatrix one = CMatrix::Identity(L, L);
  const int stop = std::min(w.hi, s.lo);
  for (int n = w.lo; n <= stop; ++n) u.at(n) = std::pow(z, -n) * one;
  // Y_n = (u(n); u(n-1)), Y_{n+1} = T(n) Y_n.
  CMatrix Y(2 * L, L);
  Y << u(stop), u(stop - 1);
  for (int n = stop; n < w.hi; ++n) {
    Y = (transfer_matrix(p, n, E) * Y).eval();
    u.at(n + 1) = Y.topRows(L);
  }
  return u;
}

namespace {

// Solves u(a) = z^a A + z^{-a} B, u(b) = z^b A + z^{-b} B for (A, B).
std::pair<CMatrix, CMatrix> match(Complex z, const LatticeMatrixFunction& u, int a, int b) {
  const Eigen::Index L = u.dim();
  const CMatrix one = CMatrix::Identity(L, L);
  CMatrix K(2 * L, 2 * L);
  K << std::pow(z, a) * one, std::pow(z, -a) * one, std::pow(z, b) * one, std::pow(z, -b) * one;
  CMatrix rhs(2 * L, L);
  rhs << u(a), u(b);
  const double c = numerics::condition_number(K);
  if (!(c < 1e12)) throw SingularMatrixError("oracle: degenerate matching system", 1.0 / c);
  const CMatrix sol = K.fullPivLu().solve(rhs);
  return {sol.topRows(L), sol.bottomRows(L)};
}

}  // namespace

OracleScattering smatrix(Complex z, const Potential& p) {
  check_z(z);
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw DomainError("oracle: needs |z| = 1");
  if (z == Complex(1.0) || z == Complex(-1.0)) throw BandEdgeError("oracle: z must not be +-1");
  const Window s = support_or_origin(p);
  const Window w{s.lo - 2, s.hi + 2};
  const LatticeMatrixFunction up = jost_plus(z, p, w);
  const LatticeMatrixFunction um = jost_minus(z, p, w);

  OracleScattering o;
  o.z = z;
  // Left of the support u_-^z = z^n and u_-^{1/z} = z^{-n}.
  std::tie(o.M_plus, o.N_plus) = match(z, up, s.lo - 2, s.lo - 1);
  // Right of the support u_+^z = z^n and u_+^{1/z} = z^{-n}.
  std::tie(o.N_minus, o.M_minus) = match(z, um, s.hi + 1, s.hi + 2);
  o.T_plus = numerics::inverse(o.M_plus);
  o.T_minus = numerics::inverse(o.M_minus);
  o.R_plus = -o.N_plus * o.T_plus;
  o.R_minus = -o.N_minus * o.T_minus;
  const Eigen::Index L = p.dim();
  o.S.resize(2 * L, 2 * L);
  o.S << o.T_plus, o.R_minus, o.R_plus, o.T_minus;
  return o;
}

namespace {

double relative_gap(const LatticeMatrixFunction& a, const LatticeMatrixFunction& b) {
  const Window w{std::max(a.window().lo, b.window().lo), std::min(a.window().hi, b.window().hi)};
  double worst = 0.0;
  for (int n = w.lo; n <= w.hi; ++n) {
    worst = std::max(worst, (a.at(n) - b.at(n)).norm() / std::max(1.0, b.at(n).norm()));
  }
  return worst;
}

}  // namespace

Comparison compare(Complex z, const Potential& p, const MainPathResult& main) {
  const OracleScattering o = smatrix(z, p);
  Comparison c;
  c.s_deviation = std::max({numerics::spectral_norm(main.T_plus - o.T_plus),
                            numerics::spectral_norm(main.T_minus - o.T_minus),
                            numerics::spectral_norm(main.R_plus - o.R_plus),
                            numerics::spectral_norm(main.R_minus - o.R_minus)});
  if (main.jost_plus != nullptr) {
    c.jost_deviation = std::max(
        c.jost_deviation, relative_gap(*main.jost_plus, jost_plus(z, p, main.jost_plus->window())));
  }
  if (main.jost_minus != nullptr) {
    c.jost_deviation =
        std::max(c.jost_deviation,
                 relative_gap(*main.jost_minus, jost_minus(z, p, main.jost_minus->window())));
  }
  return c;
}

double wronskian_drift(Complex z, const Potential& p, Window w) {
  const LatticeMatrixFunction u = jost_plus(z, p, w);
  const Complex i(0.0, 1.0);
  auto W = [&](int n) -> CMatrix {
    return i * (u.at(n + 1).adjoint() * u.at(n) - u.at(n).adjoint() * u.at(n + 1));
  };
  const CMatrix w0 = W(w.lo);
  double worst = 0.0;
  for (int n = w.lo + 1; n < w.hi; ++n) worst = std::max(worst, (W(n) - w0).norm());
  return worst;
}

}  // namespace latscat::oracle
