#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "latscat/errors.hpp"
#include "latscat/jost.hpp"
#include "latscat/oracle.hpp"
#include "latscat/scattering.hpp"

using namespace latscat;
using testing::max_abs;

namespace {

Complex cis(double t) { return std::polar(1.0, t); }

}  // namespace

TEST_CASE("oracle: free potential") {
  const oracle::OracleScattering o = oracle::smatrix(cis(0.7), Potential::zero(2));
  CHECK(max_abs(o.T_plus - CMatrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(o.T_minus - CMatrix::Identity(2, 2)) < 1e-14);
  CHECK(max_abs(o.R_plus) < 1e-14);
  CHECK(max_abs(o.R_minus) < 1e-14);
}

TEST_CASE("oracle: single-site closed form") {
  for (double v : {-1.5, 0.3, 1.0, 2.0}) {
    for (double t : {0.1, 0.9, 2.0, -1.1, 3.0}) {
      const Complex z = cis(t);
      const oracle::OracleScattering o = oracle::smatrix(z, Potential::scalar({{0, v}}));
      CHECK(std::abs(o.T_plus(0, 0) - testing::closed_T(z, v)) < 1e-13);
      CHECK(std::abs(o.R_plus(0, 0) - testing::closed_R(z, v)) < 1e-13);
      CHECK(std::abs(o.M_plus(0, 0) - testing::closed_M(z, v)) < 1e-13);
      CHECK(std::abs(o.N_plus(0, 0) - testing::closed_N(z, v)) < 1e-13);
    }
  }
}

TEST_CASE("oracle: diagonal potentials decouple") {
  const double v1 = 0.8, v2 = -1.3;
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = v1;
  d(1, 1) = v2;
  const Complex z = cis(1.2);
  const oracle::OracleScattering o = oracle::smatrix(z, Potential(2, {{0, d}}));
  CHECK(std::abs(o.T_plus(0, 0) - testing::closed_T(z, v1)) < 1e-13);
  CHECK(std::abs(o.T_plus(1, 1) - testing::closed_T(z, v2)) < 1e-13);
  CHECK(std::abs(o.T_plus(0, 1)) < 1e-14);
  CHECK(std::abs(o.R_minus(1, 0)) < 1e-14);
}

TEST_CASE("oracle: threshold profile of the exceptional pair") {
  const LatticeMatrixFunction u = oracle::jost_plus(Complex(1.0), testing::exceptional_pair(),
                                                    Window{-10, 10});
  for (int n = -10; n <= 10; ++n) CHECK(std::abs(u(n)(0, 0) - (n <= 0 ? -1.0 : 1.0)) < 1e-14);
}

TEST_CASE("oracle: transfer matrices are unimodular") {
  std::mt19937_64 rng(7);
  const Potential p = testing::random_potential(3, -1, 1, 2.0, rng);
  for (int n = -1; n <= 1; ++n) {
    const CMatrix T = oracle::transfer_matrix(p, n, cis(0.4) + 1.0 / cis(0.4));
    CHECK(std::abs(T.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("oracle: Wronskian drift is rounding-level") {
  std::mt19937_64 rng(8);
  const Potential p = testing::random_potential(2, -3, 3, 2.0, rng);
  CHECK(oracle::wronskian_drift(cis(1.0), p, Window{-20, 20}) < 1e-11);
}

TEST_CASE("oracle: input errors") {
  const Potential p = Potential::scalar({{0, 1.0}});
  CHECK_THROWS_AS(oracle::smatrix(Complex(1.0), p), BandEdgeError);
  CHECK_THROWS_AS(oracle::smatrix(Complex(0.5, 0.0), p), DomainError);
  CHECK_THROWS_AS(oracle::jost_plus(Complex(0.0), p, Window{-3, 3}), DomainError);
  CHECK_THROWS_AS(oracle::jost_plus(Complex(0.5), Potential::scalar({{4, 1.0}}), Window{-3, 3}),
                  WindowError);
}

TEST_CASE("main path agrees with the oracle on a random ensemble") {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Potential p = testing::random_potential(2, -2, 2, 2.0, rng);
    std::uniform_real_distribution<double> th(0.02, std::numbers::pi - 0.02);
    const Complex z = cis(k % 2 == 0 ? th(rng) : -th(rng));
    const SpectralParameter sz(z);
    const ScatteringMatrix s = scattering_matrix(sz, p);
    const Window w = default_window(p);
    const LatticeMatrixFunction up = jost_plus(sz, p, w);
    const LatticeMatrixFunction um = jost_minus(sz, p, w);
    const oracle::Comparison c = oracle::compare(
        z, p, oracle::MainPathResult{s.T_plus, s.T_minus, s.R_plus, s.R_minus, &up, &um});
    worst = std::max(worst, c.max());
  }
  CHECK(worst <= 1e-10);
}
