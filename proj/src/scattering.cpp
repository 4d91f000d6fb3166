#include "latscat/scattering.hpp"

#include "latscat/errors.hpp"
#include "latscat/jost.hpp"

namespace latscat {

ScatteringMatrix assemble_scattering(const ConnectionCoefficients& c) {
  if (!c.N_plus || !c.N_minus) {
    throw DomainError("the scattering matrix is defined on the unit circle only");
  }
  const Eigen::Index L = c.M_plus.rows();
  ScatteringMatrix s;
  s.z = c.z;
  s.T_plus = numerics::inverse(c.M_plus);
  s.T_minus = numerics::inverse(c.M_minus);
  s.R_plus = -(*c.N_plus) * s.T_plus;
  s.R_minus = -(*c.N_minus) * s.T_minus;
  s.S.resize(2 * L, 2 * L);
  s.S << s.T_plus, s.R_minus, s.R_plus, s.T_minus;
  s.unitarity_defect = unitarity_defect(s.S);
  s.constancy_residual = c.constancy_residual;
  return s;
}

double unitarity_defect(const CMatrix& S) {
  return numerics::spectral_norm(S.adjoint() * S - CMatrix::Identity(S.cols(), S.cols()));
}

double unitarity_defect(const ScatteringMatrix& s) { return unitarity_defect(s.S); }

ScatteringMatrix scattering_matrix(const SpectralParameter& z, const Potential& p,
                                   const SolverConfig& cfg) {
  return scattering_matrix(z, p, default_window(p, cfg.pad), cfg);
}

ScatteringMatrix scattering_matrix(const SpectralParameter& z, const Potential& p, Window w,
                                   const SolverConfig& cfg) {
  if (z.is_band_edge()) {
    throw BandEdgeError("the scattering matrix at z = +-1 is a band-edge limit; use band-edge");
  }
  if (!z.on_unit_circle()) throw DomainError("the scattering matrix needs |z| = 1");
  const JostQuartet q = solve_jost_quartet(z, p, w, cfg.tol);
  ScatteringMatrix s = assemble_scattering(coefficients_from_quartet(q, p, cfg));
  // u_-^z = u_-^{1/conj z} and u_+^{1/z} = u_+^{conj z} on the circle.
  const double r1 = decomposition_residual(q.minus_zbar, q.plus_z, s.T_plus, q.minus_z, s.R_plus);
  const double r2 = decomposition_residual(q.plus_zbar, q.plus_z, s.R_minus, q.minus_z, s.T_minus);
  s.decomposition_residual = std::max(r1, r2);
  return s;
}

std::vector<GridEntry> smatrix_grid(const Potential& p, const std::vector<Complex>& z_list,
                                    const SolverConfig& cfg, unsigned workers) {
  std::vector<GridEntry> out(z_list.size());
  const Window w = default_window(p, cfg.pad);
  parallel_for(z_list.size(), workers, [&](std::size_t i) {
    GridEntry& e = out[i];
    e.z = z_list[i];
    try {
      e.result = scattering_matrix(SpectralParameter(z_list[i]), p, w, cfg);
    } catch (const InputError& err) {
      e.failure = FailureKind::input;
      e.error = err.what();
    } catch (const Error& err) {
      e.failure = FailureKind::numerical;
      e.error = err.what();
    }
  });
  return out;
}

}  // namespace latscat
