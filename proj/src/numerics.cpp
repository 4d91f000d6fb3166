#include "latscat/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "latscat/errors.hpp"

namespace latscat::numerics {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

void require_finite(const CMatrix& m, std::string_view what) {
  if (!all_finite(m)) throw NumericalError(std::string(what) + ": non-finite entries");
}

SubspaceBasis SubspaceBasis::empty(Eigen::Index ambient) {
  return SubspaceBasis{ambient, CMatrix(ambient, 0)};
}

SubspaceBasis SubspaceBasis::standard(Eigen::Index ambient) {
  return SubspaceBasis{ambient, identity(ambient)};
}

SubspaceBasis SubspaceBasis::from_columns(CMatrix columns) {
  SubspaceBasis b{columns.rows(), std::move(columns)};
  const double defect = orthonormality_defect(b);
  if (defect > 1e-12) {
    throw DimensionError("basis vectors are not orthonormal (defect " + std::to_string(defect) +
                         ")");
  }
  return b;
}

double orthonormality_defect(const SubspaceBasis& b) {
  if (b.count() == 0) return 0.0;
  const CMatrix gram = b.vectors.adjoint() * b.vectors;
  return (gram - identity(b.count())).cwiseAbs().maxCoeff();
}

RankReport rank_report(const CMatrix& m, double rank_tol, double reference) {
  require_square(m, "rank_report");
  RankReport r;
  if (m.size() == 0) return r;
  Eigen::JacobiSVD<CMatrix> svd(m);
  r.singular_values = svd.singularValues();
  double scale = std::max(r.singular_values(0), reference);
  if (scale == 0.0) scale = 1.0;
  r.threshold = rank_tol * scale;
  for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) {
    const double s = r.singular_values(i);
    if (s > r.threshold) ++r.rank;
    if (s > r.threshold / 10.0 && s < r.threshold * 10.0) r.ambiguous = true;
  }
  return r;
}

SubspaceBasis kernel_basis(const CMatrix& m, double rank_tol, double reference) {
  require_square(m, "kernel_basis");
  const Eigen::Index n = m.rows();
  if (n == 0) return SubspaceBasis::empty(0);
  const RankReport r = rank_report(m, rank_tol, reference);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  // Singular values are sorted descending, so the null space is the trailing block of V.
  return SubspaceBasis{n, svd.matrixV().rightCols(n - r.rank)};
}

SubspaceBasis range_basis(const CMatrix& m, double rank_tol, double reference) {
  require_square(m, "range_basis");
  const Eigen::Index n = m.rows();
  if (n == 0) return SubspaceBasis::empty(0);
  const RankReport r = rank_report(m, rank_tol, reference);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
  return SubspaceBasis{n, svd.matrixU().leftCols(r.rank)};
}

SubspaceBasis orthogonal_complement(const SubspaceBasis& b) {
  const Eigen::Index n = b.ambient;
  if (b.count() == 0) return SubspaceBasis::standard(n);
  if (b.count() == n) return SubspaceBasis::empty(n);
  const CMatrix q = identity(n) - orthogonal_projector(b);
  Eigen::JacobiSVD<CMatrix> svd(q, Eigen::ComputeFullU);
  return SubspaceBasis{n, svd.matrixU().leftCols(n - b.count())};
}

CMatrix orthogonal_projector(const SubspaceBasis& b) {
  if (b.count() == 0) return CMatrix::Zero(b.ambient, b.ambient);
  return b.vectors * b.vectors.adjoint();
}

CMatrix inverse(const CMatrix& m) {
  require_square(m, "inverse");
  if (m.size() == 0) return m;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double ratio = s(0) == 0.0 ? 0.0 : s(s.size() - 1) / s(0);
  if (ratio <= kSingularRatio) throw SingularMatrixError("matrix is numerically singular", ratio);
  return m.partialPivLu().inverse();
}

double condition_number(const CMatrix& m) {
  require_square(m, "condition_number");
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace latscat::numerics
