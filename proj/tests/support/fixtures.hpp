#pragma once

// Shared test potentials, random ensembles and closed-form scalar scattering data.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <string>

#include "latscat/potential.hpp"

namespace latscat::testing {

inline std::string data_path(const std::string& name) {
  return std::string(LATSCAT_SOURCE_DIR) + "/" + name;
}

// Hermitian L x L matrix with spectral norm at most `bound`.
inline CMatrix random_hermitian(Eigen::Index L, std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(L, L);
  for (Eigen::Index i = 0; i < L; ++i) {
    for (Eigen::Index j = 0; j < L; ++j) m(i, j) = Complex(u(rng), u(rng));
  }
  m = (0.5 * (m + m.adjoint())).eval();
  const double n = numerics::spectral_norm(m);
  std::uniform_real_distribution<double> scale(0.0, bound);
  if (n > 0.0) m *= scale(rng) / n;
  return m;
}

// Random Hermitian potential on sites [lo, hi] with ||V(n)|| <= bound.
inline Potential random_potential(Eigen::Index L, int lo, int hi, double bound,
                                  std::mt19937_64& rng) {
  std::map<int, CMatrix> sites;
  for (int n = lo; n <= hi; ++n) sites[n] = random_hermitian(L, rng, bound);
  return Potential(L, sites);
}

// Scalar V(0) = v: T_+ = (z - 1/z) / (z - 1/z + v), R_+ = v z / (z^2 - 1 + v z).
inline Complex closed_T(Complex z, double v) { return (z - 1.0 / z) / (z - 1.0 / z + v); }
inline Complex closed_R(Complex z, double v) { return v * z / (z * z - 1.0 + v * z); }
// M_+ = 1 + v / (z - 1/z), N_+ = -v z / (z^2 - 1).
inline Complex closed_M(Complex z, double v) { return 1.0 + v / (z - 1.0 / z); }
inline Complex closed_N(Complex z, double v) { return -v * z / (z * z - 1.0); }

inline Potential exceptional_pair() { return Potential::scalar({{0, 2.0}, {1, 2.0}}); }

// diag(generic, exceptional): site 0 diag(1, 2), site 1 diag(0, 2).
inline Potential mixed_channels() {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  b(1, 1) = 2.0;
  return Potential(2, {{0, a}, {1, b}});
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace latscat::testing
