#pragma once

// Spectral parameter z and the closed-form solutions of the free equation
// u(n-1) + u(n+1) = (z + 1/z) u(n).

#include <complex>

#include "latscat/numerics.hpp"

namespace latscat {

// |z| may exceed 1 by this much (rounding on the unit circle).
inline constexpr double kDiskSlack = 1e-12;
// Below this distance to z = 1, s^z(n) is evaluated by the geometric-sum form.
inline constexpr double kNearEdge = 1e-3;

class SpectralParameter {
 public:
  // Throws DomainError for z = 0 or |z| > 1 + kDiskSlack.
  explicit SpectralParameter(Complex z);
  static SpectralParameter on_circle(double theta);

  Complex z() const { return z_; }
  Complex inv() const { return inv_; }
  Complex energy() const { return z_ + inv_; }
  // i / (z - 1/z). Throws BandEdgeError at z = +-1.
  Complex nu() const;

  bool is_band_edge() const { return z_ == Complex(1.0) || z_ == Complex(-1.0); }
  bool on_unit_circle(double tol = 1e-12) const { return std::abs(std::abs(z_) - 1.0) <= tol; }
  SpectralParameter conj() const { return SpectralParameter(std::conj(z_)); }

 private:
  Complex z_;
  Complex inv_;
};

// z^n by repeated squaring; exact for z = +-1.
Complex int_power(Complex z, int n);

// s^z(n) with s(0) = 0, s(1) = 1. Uses the geometric-sum form near z = 1 and a
// division-free sum near z = -1.
Complex s_free(const SpectralParameter& z, int n);
// s^z(n) z^n for n >= 0, evaluated without forming z^{-n}; bounded on the closed disk.
Complex s_free_damped(const SpectralParameter& z, int n);
// tau^z(n) with tau(0) = tau(1) = 1. Throws DomainError at z = -1.
Complex tau_free(const SpectralParameter& z, int n);

Complex plane_wave(const SpectralParameter& z, int n);
// (+-1)^n n.
double linear_wave(int sign, int n);

}  // namespace latscat
