#include "latscat/freesol.hpp"

#include <cmath>

#include "latscat/errors.hpp"

namespace latscat {

SpectralParameter::SpectralParameter(Complex z) : z_(z) {
  if (z == Complex(0.0)) throw DomainError("spectral parameter z must be nonzero");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("spectral parameter z must be finite");
  }
  if (std::abs(z) > 1.0 + kDiskSlack) {
    throw DomainError("spectral parameter must lie in the closed unit disk, got |z| = " +
                      std::to_string(std::abs(z)));
  }
  inv_ = 1.0 / z;
}

SpectralParameter SpectralParameter::on_circle(double theta) {
  return SpectralParameter(std::polar(1.0, theta));
}

Complex SpectralParameter::nu() const {
  if (is_band_edge()) throw BandEdgeError("nu(z) is undefined at z = +-1");
  return Complex(0.0, 1.0) / (z_ - inv_);
}

Complex int_power(Complex z, int n) {
  if (n < 0) return int_power(1.0 / z, -n);
  Complex result(1.0), base = z;
  unsigned e = static_cast<unsigned>(n);
  while (e != 0) {
    if (e & 1u) result *= base;
    base *= base;
    e >>= 1u;
  }
  return result;
}

namespace {

// z/(z+1) * sum_{j=-n}^{n-1} z^j for n >= 1.
Complex s_sum_form(Complex z, Complex zinv, int n) {
  Complex acc(0.0), p = int_power(zinv, n);
  for (int j = -n; j <= n - 1; ++j) {
    acc += p;
    p *= z;
  }
  return z / (z + 1.0) * acc;
}

// sum_{k=0}^{n-1} z^{n-1-2k} for n >= 1; needs no division by z +- 1.
Complex s_symmetric_form(Complex z, Complex zinv, int n) {
  Complex acc(0.0), p = int_power(z, n - 1);
  const Complex step = zinv * zinv;
  for (int k = 0; k < n; ++k) {
    acc += p;
    p *= step;
  }
  return acc;
}

}  // namespace

Complex s_free(const SpectralParameter& zp, int n) {
  if (n == 0) return 0.0;
  if (n < 0) return -s_free(zp, -n);
  const Complex z = zp.z(), zinv = zp.inv();
  if (z == Complex(1.0)) return static_cast<double>(n);
  if (z == Complex(-1.0)) return (n % 2 == 1 ? 1.0 : -1.0) * n;
  if (std::abs(z - 1.0) < kNearEdge) return s_sum_form(z, zinv, n);
  if (std::abs(z + 1.0) < kNearEdge) return s_symmetric_form(z, zinv, n);
  return (int_power(z, n) - int_power(zinv, n)) / (z - zinv);
}

Complex s_free_damped(const SpectralParameter& zp, int n) {
  if (n < 0) throw DomainError("s_free_damped needs n >= 0");
  if (n == 0) return 0.0;
  const Complex z = zp.z();
  if (z == Complex(1.0)) return static_cast<double>(n);
  if (z == Complex(-1.0)) return -static_cast<double>(n);  // (-1)^{n+1} n (-1)^n
  if (std::abs(z - 1.0) < kNearEdge) {
    // z/(z+1) * sum_{i=0}^{2n-1} z^i
    Complex acc(0.0), p(1.0);
    for (int i = 0; i < 2 * n; ++i) {
      acc += p;
      p *= z;
    }
    return z / (z + 1.0) * acc;
  }
  if (std::abs(z + 1.0) < kNearEdge) {
    // sum_{k=0}^{n-1} z^{2n-1-2k} = sum_{k=0}^{n-1} z^{2k+1}
    Complex acc(0.0), p = z;
    const Complex z2 = z * z;
    for (int k = 0; k < n; ++k) {
      acc += p;
      p *= z2;
    }
    return acc;
  }
  return (int_power(z, 2 * n) - 1.0) / (z - zp.inv());
}

Complex tau_free(const SpectralParameter& zp, int n) {
  const Complex z = zp.z();
  if (z == Complex(-1.0)) throw DomainError("tau^z is undefined at z = -1");
  if (n == 0 || n == 1) return 1.0;
  return (int_power(z, n) + int_power(z, 1 - n)) / (z + 1.0);
}

Complex plane_wave(const SpectralParameter& z, int n) { return int_power(z.z(), n); }

double linear_wave(int sign, int n) {
  if (sign != 1 && sign != -1) throw DomainError("linear_wave sign must be +1 or -1");
  if (sign == 1 || n % 2 == 0) return n;
  return -static_cast<double>(n);
}

}  // namespace latscat
