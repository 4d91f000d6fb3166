#pragma once

// Scattering matrix S = [[T+, R-], [R+, T-]] on the unit circle.

#include <optional>
#include <string>
#include <vector>

#include "latscat/detail/parallel_for.hpp"
#include "latscat/wronskian.hpp"

namespace latscat {

inline constexpr double kUnitarityTol = 1e-9;

struct ScatteringMatrix {
  Complex z;
  CMatrix T_plus, T_minus, R_plus, R_minus;
  CMatrix S;  // 2L x 2L
  double unitarity_defect = 0.0;
  // Relative residual of (u_-^z, u_+^{1/z}) = (u_+^z, u_-^{1/z}) S over the window.
  double decomposition_residual = 0.0;
  double constancy_residual = 0.0;
};

// T = M^{-1}, R = -N M^{-1}. Needs N_+- (unit circle). Throws SingularMatrixError if
// M_+ or M_- cannot be inverted.
ScatteringMatrix assemble_scattering(const ConnectionCoefficients& c);

// ||S^* S - 1|| (spectral norm).
double unitarity_defect(const CMatrix& S);
double unitarity_defect(const ScatteringMatrix& s);

// Requires |z| = 1 and z != +-1. The window defaults to default_window(p, cfg.pad).
ScatteringMatrix scattering_matrix(const SpectralParameter& z, const Potential& p,
                                   const SolverConfig& cfg = {});
ScatteringMatrix scattering_matrix(const SpectralParameter& z, const Potential& p, Window w,
                                   const SolverConfig& cfg = {});

enum class FailureKind { none, input, numerical };

struct GridEntry {
  Complex z;
  std::optional<ScatteringMatrix> result;
  FailureKind failure = FailureKind::none;
  std::string error;
};

// One independent solve per z, spread over `workers` threads (0 = hardware concurrency).
// Order matches z_list; failures are recorded per entry.
std::vector<GridEntry> smatrix_grid(const Potential& p, const std::vector<Complex>& z_list,
                                    const SolverConfig& cfg = {}, unsigned workers = 0);

}  // namespace latscat
