#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "latscat/errors.hpp"
#include "latscat/jost.hpp"
#include "latscat/wronskian.hpp"

using namespace latscat;

namespace {

LatticeMatrixFunction wave(Complex z, int sign, Window w) {
  LatticeMatrixFunction u(1, w, Role::free, z, z + 1.0 / z);
  for (int n = w.lo; n <= w.hi; ++n) u.at(n)(0, 0) = std::pow(z, sign * n);
  return u;
}

double worst(const std::vector<Residual>& rs) {
  double m = 0.0;
  for (const Residual& r : rs) m = std::max(m, r.value);
  return m;
}

}  // namespace

TEST_CASE("plane-wave Wronskian on the circle is 1 / nu") {
  const SpectralParameter z = SpectralParameter::on_circle(0.8);
  const LatticeMatrixFunction u = wave(z.z(), +1, Window{-6, 6});
  const WronskianValue w = wronskian(u, u);
  CHECK(std::abs(w.value(0, 0) - 1.0 / z.nu()) < 1e-14);
  CHECK(std::abs(w.value(0, 0) - Complex(0.0, 1.0) * (z.inv() - z.z())) < 1e-14);
  for (int n = -6; n < 6; ++n) {
    const CMatrix wn = wronskian_at(u, u, n);
    CHECK((wn - wn.adjoint()).norm() < 1e-14);
  }
}

TEST_CASE("W(z^n, z^-n) at z = 0.5 is -1.5i for every n") {
  const Window w{-5, 5};
  const LatticeMatrixFunction u = wave(0.5, +1, w), v = wave(0.5, -1, w);
  for (int n = -5; n < 5; ++n) CHECK(std::abs(wronskian_at(u, v, n)(0, 0) - Complex(0.0, -1.5)) < 1e-12);
}

TEST_CASE("energies must be conjugate") {
  const Window w{-3, 3};
  CHECK_THROWS_AS(wronskian(wave(Complex(0.5, 0.2), 1, w), wave(Complex(0.5, 0.2), 1, w)),
                  DomainError);
  CHECK_NOTHROW(wronskian(wave(Complex(0.5, -0.2), 1, w), wave(Complex(0.5, 0.2), 1, w)));
}

TEST_CASE("Jost Wronskians with known values") {
  std::mt19937_64 rng(21);
  const Potential p = testing::random_potential(2, -2, 2, 2.0, rng);
  const Window w = default_window(p);
  for (double th : {0.3, 1.7, -2.5}) {
    const JostQuartet q = solve_jost_quartet(SpectralParameter::on_circle(th), p, w);
    const auto rs = wronskian_identity_residuals(q);
    CHECK(rs.size() == 4);
    CHECK(worst(rs) <= 1e-10);
  }
  const JostQuartet qd = solve_jost_quartet(SpectralParameter(Complex(0.4, 0.3)), p, w);
  const auto rd = wronskian_identity_residuals(qd);
  CHECK(rd.size() == 2);
  CHECK(worst(rd) <= 1e-10);
}

TEST_CASE("free coefficients") {
  const Potential p = Potential::zero(3);
  const SpectralParameter z = SpectralParameter::on_circle(1.1);
  const ConnectionCoefficients c = connection_coefficients(z, p, default_window(p));
  CHECK((c.M_plus - CMatrix::Identity(3, 3)).norm() < 1e-13);
  CHECK((c.M_minus - CMatrix::Identity(3, 3)).norm() < 1e-13);
  CHECK(c.N_plus->norm() < 1e-13);
  CHECK(c.N_minus->norm() < 1e-13);
}

TEST_CASE("single-site coefficients match the closed forms") {
  for (double v : {1.0, 2.0, -0.5}) {
    const Potential p = Potential::scalar({{0, v}});
    for (double th : {0.2, 1.0, 2.9, -0.7}) {
      const SpectralParameter z = SpectralParameter::on_circle(th);
      const ConnectionCoefficients c = connection_coefficients(z, p, default_window(p));
      CHECK(std::abs(c.M_plus(0, 0) - testing::closed_M(z.z(), v)) < 1e-12);
      CHECK(std::abs((*c.N_plus)(0, 0) - testing::closed_N(z.z(), v)) < 1e-12);
    }
  }
  const SpectralParameter z = SpectralParameter::on_circle(std::numbers::pi / 4);
  const ConnectionCoefficients c =
      connection_coefficients(z, Potential::scalar({{0, 2.0}}), Window{-20, 20});
  CHECK(std::abs(std::norm(c.M_plus(0, 0)) - std::norm((*c.N_plus)(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("coefficient identities on random potentials") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 5; ++t) {
    const Potential p = testing::random_potential(2, -2, 2, 2.0, rng);
    const Window w = default_window(p);
    const SpectralParameter z = SpectralParameter::on_circle(std::numbers::pi / 3);
    const JostQuartet q = solve_jost_quartet(z, p, w);
    const ConnectionCoefficients c = coefficients_from_quartet(q, p);
    const ConnectionCoefficients cc = coefficients_from_quartet(conjugated(q), p);
    const auto rs = check_identities(c, cc);
    CHECK(rs.size() == 6);
    CHECK(worst(rs) <= 1e-10);
    CHECK(c.decomposition_residual <= 1e-10);
    // The conjugate coefficients agree with a fresh solve at conj z.
    const ConnectionCoefficients fresh = connection_coefficients(z.conj(), p, w);
    CHECK((fresh.M_plus - cc.M_plus).norm() < 1e-10);
  }
}

TEST_CASE("identities are stated on the circle only") {
  const Potential p = Potential::scalar({{0, 1.0}});
  const ConnectionCoefficients c =
      connection_coefficients(SpectralParameter(Complex(0.5, 0.1)), p, default_window(p));
  CHECK_FALSE(c.N_plus.has_value());
  CHECK_THROWS_AS(check_identities(c, c), DomainError);
  CHECK_THROWS_AS(connection_coefficients(SpectralParameter(1.0), p, default_window(p)),
                  BandEdgeError);
}

TEST_CASE("factorisation through Phi") {
  const Potential zero = Potential::zero(1);
  CHECK(factorization_residual(SpectralParameter::on_circle(0.5), zero, Window{-20, 20}) < 1e-14);
  const Potential ex = testing::exceptional_pair();
  CHECK(factorization_residual(SpectralParameter(0.9), ex, default_window(ex)) <= 1e-9);
  std::mt19937_64 rng(23);
  const Potential p = testing::random_potential(2, -2, 2, 2.0, rng);
  CHECK(factorization_residual(SpectralParameter::on_circle(0.1), p, default_window(p)) <= 1e-9);
  CHECK(factorization_residual(SpectralParameter(Complex(0.3, -0.5)), p, default_window(p)) <= 1e-9);
}

TEST_CASE("factorisation needs an invertible u+^1(1)") {
  // V(1) = 1, V(2) = 1: u+^1(2) = 1, u+^1(1) = 2 - 1 - 1 = 0.
  const Potential p = Potential::scalar({{1, 1.0}, {2, 1.0}});
  CHECK_THROWS_AS(factorization_residual(SpectralParameter(0.5), p, default_window(p)),
                  AssumptionViolation);
}

TEST_CASE("broken hermiticity breaks Wronskian constancy") {
  CMatrix v = CMatrix::Identity(2, 2);
  v(0, 1) = 0.5;
  PotentialOptions raw;
  raw.enforce_hermitian = false;
  const Potential p(2, {{0, v}}, raw);
  const Window w = default_window(p);
  const JostQuartet q = solve_jost_quartet(SpectralParameter::on_circle(0.7), p, w);
  CHECK_THROWS_AS(coefficients_from_quartet(q, p), InconsistentSolutionsError);
  SolverConfig lax;
  lax.strict_constancy = false;
  const ConnectionCoefficients c = coefficients_from_quartet(q, p, lax);
  CHECK(c.constancy_residual > 1e-3);
}
