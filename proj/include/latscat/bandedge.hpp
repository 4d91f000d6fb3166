#pragma once

// Scattering at the band edge z = 1 (E = 2): the threshold Wronskian, half-bound states,
// the maps Gamma and Omega, and the limits T^1_+-, R^1_+- of the scattering matrix.

#include <optional>
#include <string>
#include <vector>

#include "latscat/jost.hpp"
#include "latscat/scattering.hpp"
#include "latscat/solver_config.hpp"

namespace latscat {

struct ThresholdWronskian {
  CMatrix direct;  // W(u_-^1, u_+^1) from the solutions
  CMatrix summed;  // -i sum_j V(j) u_+^1(j); the stored value
  double discrepancy = 0.0;  // ||direct - summed|| / max(1, reference)
  // sum_j ||V(j)|| ||u_+^1(j)||: magnitude of the terms `summed` is built from.
  double reference = 0.0;
  double constancy_residual = 0.0;
};

// Solutions at z = 1 shared by every band-edge computation.
struct ThresholdSolutions {
  Window window;
  LatticeMatrixFunction u_plus;   // u_+^1
  LatticeMatrixFunction u_minus;  // u_-^1
};

ThresholdSolutions solve_threshold(const Potential& p, Window w, double tol = 1e-10);

// Throws InconsistentSolutionsError when the two evaluations differ by more than 100 * tol.
ThresholdWronskian threshold_wronskian(const ThresholdSolutions& s, const Potential& p,
                                       double tol = 1e-10);
ThresholdWronskian threshold_wronskian(const Potential& p, Window w, double tol = 1e-10);

struct HalfBoundStates {
  numerics::SubspaceBasis N;  // Ker W(u_-^1, u_+^1)
  numerics::SubspaceBasis L;  // Ker W(u_+^1, u_-^1)
  numerics::RankReport rank;
  // max over basis vectors xi of N of sup_n ||u_+^1(n) xi|| / ||u_+^1(hi) xi||
  double bounded_ratio = 0.0;
  // max over unit xi in N of sup_n ||u_+^1(n) xi||
  double bounded_sup = 0.0;
  // smallest ||u_+^1(lo) xi|| / |lo| over unit xi orthogonal to N (infinity if N = C^L)
  double growth_slope = 0.0;
  // smallest nonzero singular value of W(u_-^1, u_+^1) (0 if none)
  double sigma_min_nonzero = 0.0;
};

HalfBoundStates half_bound_states(const ThresholdSolutions& s, const ThresholdWronskian& w,
                                  double rank_tol = 1e-8);

struct GammaPaths {
  CMatrix gamma;          // (1 - sum_j j V(j) u_+^1(j)) P_N, the stored map
  CMatrix by_sum;         // columns Gamma xi for the basis of N, path (i)
  CMatrix by_limit;       // u_+^1(lo) xi, path (ii)
  std::optional<CMatrix> by_quotient;  // u_-^1(n)^{-1} u_+^1(n) xi, path (iii)
  int quotient_site = 1;
  double agreement = 0.0;  // max pairwise column distance between the paths
};

// Throws TruncationError when the paths disagree by more than `path_tol`.
GammaPaths gamma_map(const ThresholdSolutions& s, const Potential& p,
                     const numerics::SubspaceBasis& N, double path_tol = 1e-8);

struct OmegaMap {
  CMatrix omega;   // u_+^1(1 + shift)^{-1} u_-^1(1 + shift)
  int shift = 0;   // nonzero when u_+^1(1) was singular and the origin was moved
};

// Throws AssumptionViolation if no shift within the support width makes u_+^1 invertible.
OmegaMap omega_map(const ThresholdSolutions& s, const Potential& p);

struct BandEdgeCertificates {
  double lemma_sum_discrepancy = 0.0;     // threshold Wronskian, two routes
  double L_vs_range_complement = 0.0;     // ||P_L - (1 - P_range W_-+)||
  double N_vs_range_complement = 0.0;     // ||P_N - (1 - P_range W_+-)||
  double omega_gamma_on_N = 0.0;          // ||Omega Gamma xi - xi|| over the basis of N
  double gamma_into_L = 0.0;              // ||P_{L-perp} Gamma xi||
  double positivity_defect = 0.0;         // |<Gamma xi, (Omega* + Gamma) xi> - ||xi||^2 - ||Gamma xi||^2|
  double positivity_min = 0.0;            // min Re <Gamma xi, (Omega* + Gamma) xi> / ||xi||^2
  double range_T_plus = 0.0;              // range T1+ = N
  double ker_T_plus = 0.0;                // Ker T1+ = W_-+ C^L
  double range_T_minus = 0.0;             // range T1- = L
  double ker_T_minus = 0.0;               // Ker T1- = W_+- C^L
  double range_one_minus_R_plus = 0.0;    // range(1 - R1+) = L
  double ker_one_minus_R_plus = 0.0;      // Ker(1 - R1+) = Ker T1+
  double range_one_minus_R_minus = 0.0;   // range(1 - R1-) = N
  double ker_one_minus_R_minus = 0.0;     // Ker(1 - R1-) = Ker T1-
  double gamma_paths = 0.0;
  double boundedness_ratio = 0.0;
  bool growth_ok = true;
  bool rank_ambiguous = false;
  double max_subspace_residual() const;
};

struct BandEdgeReport {
  Window window;
  CMatrix W_minus_plus;  // summed form
  int dim_N = 0;
  numerics::SubspaceBasis N_basis, L_basis;
  numerics::SubspaceBasis N_perp, L_perp;
  CMatrix Gamma;  // Gamma P_N
  CMatrix Omega;
  int omega_shift = 0;
  int gamma_quotient_site = 1;
  CMatrix P, Q;
  CMatrix A_block, D_block;
  CMatrix T1_plus, T1_minus, R1_plus, R1_minus;
  Eigen::VectorXd singular_values;  // of W_minus_plus
  double rank_threshold = 0.0;
  BandEdgeCertificates certificates;
};

// Basis-dependent assembly once N, L and their complements are fixed. Exposed so that
// basis independence of T^1 and R^1 can be checked.
struct BandEdgeLimits {
  CMatrix P, Q, A_block, D_block;
  CMatrix T1_plus, T1_minus, R1_plus, R1_minus;
};
BandEdgeLimits assemble_limits(const CMatrix& W_minus_plus, const CMatrix& gamma,
                               const CMatrix& omega, const numerics::SubspaceBasis& N,
                               const numerics::SubspaceBasis& L);

// Throws TheoryViolation if the A block is numerically singular.
BandEdgeReport band_edge_limits(const Potential& p, Window w, const SolverConfig& cfg = {});
BandEdgeReport band_edge_limits(const Potential& p, const SolverConfig& cfg = {});

// ||P_range(T) - P_S|| (range test) and ||P_ker(T) - P_S|| (kernel test).
double range_residual(const CMatrix& T, const numerics::SubspaceBasis& S, double rank_tol = 1e-8);
double kernel_residual(const CMatrix& T, const numerics::SubspaceBasis& S, double rank_tol = 1e-8);

enum class ApproachPath { radial, circular };

struct ConvergenceRow {
  double eps = 0.0;
  Complex z;
  bool ok = false;
  std::string error;
  CMatrix T_plus, T_minus;
  std::optional<CMatrix> R_plus, R_minus;  // circular path only
  double dev_T_plus = 0.0, dev_T_minus = 0.0;
  std::optional<double> dev_R_plus, dev_R_minus;
};

struct ConvergenceStudy {
  ApproachPath path = ApproachPath::circular;
  std::vector<ConvergenceRow> rows;
  bool monotone_T_plus = true, monotone_T_minus = true;
  std::optional<bool> monotone_R_plus, monotone_R_minus;
  // Least-squares slope of log(deviation) against log(eps); nullopt if < 2 usable rows.
  std::optional<double> order_T_plus, order_R_plus;
};

// z = 1 - eps (radial) or z = exp(i eps) (circular). eps must be positive and strictly
// decreasing. Per-point failures are recorded in the row.
ConvergenceStudy convergence_study(const Potential& p, const BandEdgeReport& edge,
                                   ApproachPath path, const std::vector<double>& eps,
                                   const SolverConfig& cfg = {}, unsigned workers = 0);

}  // namespace latscat
