#include "latscat/wronskian.hpp"

#include <algorithm>
#include <cmath>

#include "latscat/errors.hpp"
#include "latscat/jost.hpp"

namespace latscat {

namespace {

constexpr Complex kI(0.0, 1.0);

double spec(const CMatrix& m) { return numerics::spectral_norm(m); }

}  // namespace

CMatrix wronskian_at(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v, int n) {
  if (u.dim() != v.dim()) throw DimensionError("Wronskian of functions with different L");
  return kI * (u.at(n + 1).adjoint() * v.at(n) - u.at(n).adjoint() * v.at(n + 1));
}

WronskianValue wronskian(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v,
                         double identity_tol, bool strict) {
  if (u.dim() != v.dim()) throw DimensionError("Wronskian of functions with different L");
  const Complex eu = std::conj(u.energy()), ev = v.energy();
  if (std::abs(eu - ev) > 1e-10 * std::max(1.0, std::abs(ev))) {
    throw DomainError("Wronskian needs solutions at conjugate energies");
  }
  const Window w = overlap(u, v, 2);
  const int count = w.size() - 1;
  std::vector<CMatrix> values;
  std::vector<double> scales;
  values.reserve(count);
  scales.reserve(count);
  CMatrix mean = CMatrix::Zero(u.dim(), u.dim());
  double total = 0.0;
  for (int n = w.lo; n < w.hi; ++n) {
    values.push_back(wronskian_at(u, v, n));
    const double s = std::max(1.0, u.at(n + 1).norm() * v.at(n).norm() +
                                       u.at(n).norm() * v.at(n + 1).norm());
    scales.push_back(s);
    const double weight = 1.0 / (s * s);
    mean += weight * values.back();
    total += weight;
  }
  mean /= total;
  double residual = 0.0;
  const double min_scale = *std::min_element(scales.begin(), scales.end());
  for (int k = 0; k < count; ++k) {
    residual = std::max(residual, (values[k] - mean).norm() / scales[k]);
  }
  if (strict && residual > 100.0 * identity_tol) {
    throw InconsistentSolutionsError(
        "Wronskian of " + role_name(u.role()) + " and " + role_name(v.role()) + " is not constant",
        residual);
  }
  return WronskianValue{std::move(mean), residual, min_scale};
}

JostQuartet solve_jost_quartet(const SpectralParameter& z, const Potential& p, Window w,
                               double tol) {
  const SpectralParameter zb = z.conj();
  const bool real = z.z().imag() == 0.0;
  LatticeMatrixFunction plus_z = jost_plus(z, p, w, tol);
  LatticeMatrixFunction minus_z = jost_minus(z, p, w, tol);
  LatticeMatrixFunction plus_zbar = real ? plus_z : jost_plus(zb, p, w, tol);
  LatticeMatrixFunction minus_zbar = real ? minus_z : jost_minus(zb, p, w, tol);
  return JostQuartet{z, std::move(plus_z), std::move(plus_zbar), std::move(minus_z),
                     std::move(minus_zbar)};
}

JostQuartet conjugated(const JostQuartet& q) {
  return JostQuartet{q.z.conj(), q.plus_zbar, q.plus_z, q.minus_zbar, q.minus_z};
}

double decomposition_residual(const LatticeMatrixFunction& lhs, const LatticeMatrixFunction& a,
                              const CMatrix& A, const LatticeMatrixFunction& b, const CMatrix& B) {
  const Window wa = overlap(lhs, a, 1);
  const Window wb = overlap(lhs, b, 1);
  const Window common{std::max(wa.lo, wb.lo), std::min(wa.hi, wb.hi)};
  double worst = 0.0;
  for (int n = common.lo; n <= common.hi; ++n) {
    const CMatrix r = lhs.at(n) - a.at(n) * A - b.at(n) * B;
    worst = std::max(worst, r.norm() / std::max(1.0, lhs.at(n).norm()));
  }
  return worst;
}

ConnectionCoefficients coefficients_from_quartet(const JostQuartet& q, const Potential& /*p*/,
                                                 const SolverConfig& cfg) {
  if (q.z.is_band_edge()) {
    throw BandEdgeError("connection coefficients are undefined at z = +-1; use the band-edge "
                        "routines");
  }
  ConnectionCoefficients c;
  c.z = q.z.z();
  c.nu = q.z.nu();
  const double tol = cfg.identity_tol;
  const bool strict = cfg.strict_constancy;
  const WronskianValue wm = wronskian(q.minus_zbar, q.plus_z, tol, strict);
  const WronskianValue wp = wronskian(q.plus_zbar, q.minus_z, tol, strict);
  c.M_plus = c.nu * wm.value;
  c.M_minus = -c.nu * wp.value;
  c.constancy_residual = std::max(wm.constancy_residual, wp.constancy_residual);
  if (q.z.on_unit_circle()) {
    const WronskianValue wn = wronskian(q.minus_z, q.plus_z, tol, strict);
    const WronskianValue wq = wronskian(q.plus_z, q.minus_z, tol, strict);
    c.N_plus = (-c.nu * wn.value).eval();
    c.N_minus = (c.nu * wq.value).eval();
    c.constancy_residual =
        std::max({c.constancy_residual, wn.constancy_residual, wq.constancy_residual});
    // On the circle u_-^z = u_-^{1/conj z} and u_+^{1/z} = u_+^{conj z}.
    const double r1 = decomposition_residual(q.plus_z, q.minus_zbar, c.M_plus, q.minus_z, *c.N_plus);
    const double r2 =
        decomposition_residual(q.minus_z, q.plus_z, *c.N_minus, q.plus_zbar, c.M_minus);
    c.decomposition_residual = std::max(r1, r2);
  }
  return c;
}

ConnectionCoefficients connection_coefficients(const SpectralParameter& z, const Potential& p,
                                               Window w, const SolverConfig& cfg) {
  if (z.is_band_edge()) {
    throw BandEdgeError("connection coefficients are undefined at z = +-1; use the band-edge "
                        "routines");
  }
  return coefficients_from_quartet(solve_jost_quartet(z, p, w, cfg.tol), p, cfg);
}

namespace {

Residual make_residual(std::string name, const CMatrix& diff, double scale) {
  const double a = spec(diff);
  return Residual{std::move(name), a / std::max(1.0, scale), a, scale};
}

}  // namespace

std::vector<Residual> check_identities(const ConnectionCoefficients& c,
                                       const ConnectionCoefficients& at_conj) {
  if (!c.N_plus || !c.N_minus || !at_conj.N_plus || !at_conj.N_minus) {
    throw DomainError("coefficient identities are stated on the unit circle only");
  }
  const Eigen::Index L = c.M_plus.rows();
  const CMatrix one = CMatrix::Identity(L, L);
  const CMatrix& Mp = c.M_plus;
  const CMatrix& Mm = c.M_minus;
  const CMatrix& Np = *c.N_plus;
  const CMatrix& Nm = *c.N_minus;
  const CMatrix& Np_c = *at_conj.N_plus;
  const CMatrix& Nm_c = *at_conj.N_minus;
  const double mp = spec(Mp), mm = spec(Mm), np = spec(Np), nm = spec(Nm);
  return {
      make_residual("M-*M- - 1 - N-*N-", Mm.adjoint() * Mm - one - Nm.adjoint() * Nm,
                    mm * mm + 1.0 + nm * nm),
      make_residual("M+ N- + N+(1/z) M-", Mp * Nm + Np_c * Mm, mp * nm + spec(Np_c) * mm),
      make_residual("M+*M+ - 1 - N+*N+", Mp.adjoint() * Mp - one - Np.adjoint() * Np,
                    mp * mp + 1.0 + np * np),
      make_residual("M- N+ + N-(1/z) M+", Mm * Np + Nm_c * Mp, mm * np + spec(Nm_c) * mp),
      make_residual("N+* + N-", Np.adjoint() + Nm, np + nm),
      make_residual("M+* - M-(conj z)", Mp.adjoint() - at_conj.M_minus,
                    mp + spec(at_conj.M_minus)),
  };
}

namespace {

Residual wronskian_target(std::string name, const WronskianValue& w, const CMatrix& target) {
  return make_residual(std::move(name), w.value - target, w.min_scale);
}

}  // namespace

std::vector<Residual> wronskian_identity_residuals(const JostQuartet& q, double identity_tol) {
  const Eigen::Index L = q.plus_z.dim();
  const CMatrix zero = CMatrix::Zero(L, L);
  std::vector<Residual> out;
  out.push_back(wronskian_target("W(u+^zbar, u+^z) = 0",
                                 wronskian(q.plus_zbar, q.plus_z, identity_tol), zero));
  out.push_back(wronskian_target("W(u-^(1/zbar), u-^(1/z)) = 0",
                                 wronskian(q.minus_zbar, q.minus_z, identity_tol), zero));
  if (q.z.on_unit_circle() && !q.z.is_band_edge()) {
    const CMatrix target = (1.0 / q.z.nu()) * CMatrix::Identity(L, L);
    out.push_back(wronskian_target("W(u+^z, u+^z) = 1/nu",
                                   wronskian(q.plus_z, q.plus_z, identity_tol), target));
    out.push_back(wronskian_target("W(u-^z, u-^z) = 1/nu",
                                   wronskian(q.minus_zbar, q.minus_zbar, identity_tol), target));
  }
  return out;
}

double factorization_residual(const SpectralParameter& z, const Potential& p, Window w,
                              const SolverConfig& cfg) {
  const LatticeMatrixFunction u1 = jost_plus(SpectralParameter(1.0), p, w, cfg.tol);
  CMatrix u1_inv;
  try {
    u1_inv = numerics::inverse(u1(1));
  } catch (const SingularMatrixError& e) {
    throw AssumptionViolation(
        std::string("u_+^1(1) is numerically singular; translate the origin first: ") + e.what());
  }
  const SpectralParameter zb = z.conj();
  const LatticeMatrixFunction plus_z = jost_plus(z, p, w, cfg.tol);
  const LatticeMatrixFunction minus_zbar = jost_minus(zb, p, w, cfg.tol);
  const LatticeMatrixFunction phi_z = prescribed_solution(z, u1(0), u1(1), p, w, cfg.tol);
  const LatticeMatrixFunction phi_zbar = prescribed_solution(zb, u1(0), u1(1), p, w, cfg.tol);

  const CMatrix lhs = wronskian(minus_zbar, plus_z, cfg.identity_tol).value;
  const CMatrix t1 = minus_zbar(1).adjoint() * u1_inv.adjoint() *
                     wronskian(phi_zbar, plus_z, cfg.identity_tol).value;
  const CMatrix t2 = wronskian(minus_zbar, phi_z, cfg.identity_tol).value * u1_inv * plus_z(1);
  return spec(lhs - t1 - t2) / std::max(1.0, spec(lhs) + spec(t1) + spec(t2));
}

}  // namespace latscat
