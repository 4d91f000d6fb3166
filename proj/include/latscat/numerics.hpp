#pragma once

// Dense complex L x L linear algebra used throughout the library.
// Matrices are plain Eigen values; every function here is pure.

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace latscat {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace numerics {

inline constexpr double kDefaultRankTol = 1e-8;
// inverse() refuses matrices with sigma_min <= kSingularRatio * sigma_max.
inline constexpr double kSingularRatio = 1e-12;

CMatrix identity(Eigen::Index n);
CMatrix adjoint(const CMatrix& m);

// Largest singular value. Zero for empty matrices.
double spectral_norm(const CMatrix& m);

bool all_finite(const CMatrix& m);
// Throws NumericalError naming `what` if any entry is NaN or Inf.
void require_finite(const CMatrix& m, std::string_view what);

/// Orthonormal family of vectors in C^ambient, stored as the columns of `vectors`.
struct SubspaceBasis {
  Eigen::Index ambient = 0;
  CMatrix vectors;  // ambient x count

  Eigen::Index count() const { return vectors.cols(); }

  static SubspaceBasis empty(Eigen::Index ambient);
  static SubspaceBasis standard(Eigen::Index ambient);
  // Throws DimensionError unless the columns are orthonormal within 1e-12.
  static SubspaceBasis from_columns(CMatrix columns);
};

double orthonormality_defect(const SubspaceBasis& b);

struct RankReport {
  Eigen::VectorXd singular_values;  // descending
  double threshold = 0.0;
  Eigen::Index rank = 0;
  // Some singular value lies within a factor 10 of the threshold.
  bool ambiguous = false;
};

// Singular values <= rank_tol * max(sigma_max, reference) count as zero. When both
// sigma_max and reference vanish the scale is 1. `reference` lets callers supply the
// magnitude of the terms a matrix was summed from, so cancellation down to rounding
// noise is still recognised as zero.
RankReport rank_report(const CMatrix& m, double rank_tol = kDefaultRankTol, double reference = 0.0);

SubspaceBasis kernel_basis(const CMatrix& m, double rank_tol = kDefaultRankTol,
                           double reference = 0.0);
SubspaceBasis range_basis(const CMatrix& m, double rank_tol = kDefaultRankTol,
                          double reference = 0.0);
SubspaceBasis orthogonal_complement(const SubspaceBasis& b);

CMatrix orthogonal_projector(const SubspaceBasis& b);

// Throws SingularMatrixError when sigma_min <= kSingularRatio * sigma_max.
CMatrix inverse(const CMatrix& m);

// sigma_max / sigma_min; +inf for singular input.
double condition_number(const CMatrix& m);

}  // namespace numerics
}  // namespace latscat
