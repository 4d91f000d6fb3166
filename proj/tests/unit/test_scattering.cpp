#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "latscat/errors.hpp"
#include "latscat/scattering.hpp"

using namespace latscat;

TEST_CASE("free scattering matrix is the identity") {
  const ScatteringMatrix s = scattering_matrix(SpectralParameter::on_circle(0.6), Potential::zero(2));
  CHECK((s.S - CMatrix::Identity(4, 4)).norm() < 1e-13);
  CHECK(s.unitarity_defect < 1e-13);
}

TEST_CASE("single-site closed forms") {
  for (double v : {1.0, 2.0, -0.5}) {
    const Potential p = Potential::scalar({{0, v}});
    for (double th : {0.1, 0.9, 1.6, 3.0, -1.2}) {
      const SpectralParameter z = SpectralParameter::on_circle(th);
      const ScatteringMatrix s = scattering_matrix(z, p);
      CHECK(std::abs(s.T_plus(0, 0) - testing::closed_T(z.z(), v)) < 1e-12);
      CHECK(std::abs(s.R_plus(0, 0) - testing::closed_R(z.z(), v)) < 1e-12);
    }
  }
  const ScatteringMatrix s = scattering_matrix(SpectralParameter(Complex(0.0, 1.0)),
                                               Potential::scalar({{0, 1.0}}));
  CHECK(std::abs(std::norm(s.T_plus(0, 0)) + std::norm(s.R_plus(0, 0)) - 1.0) < 1e-12);
}

TEST_CASE("unitarity defect") {
  CHECK(unitarity_defect(CMatrix::Identity(4, 4)) == 0.0);
  std::mt19937_64 rng(31);
  const Potential p = testing::random_potential(3, -2, 2, 2.0, rng);
  ScatteringMatrix s = scattering_matrix(SpectralParameter::on_circle(0.7), p);
  CHECK(s.unitarity_defect <= 1e-10);
  CHECK(unitarity_defect(s) == doctest::Approx(s.unitarity_defect));
  CHECK(s.decomposition_residual <= 1e-10);
  CMatrix broken = s.S;
  broken.topLeftCorner(3, 3).setZero();
  CHECK(unitarity_defect(broken) >= 0.5);
}

TEST_CASE("conjugate symmetry of the transmission blocks") {
  std::mt19937_64 rng(32);
  const Potential p = testing::random_potential(2, -1, 3, 2.0, rng);
  const SpectralParameter z = SpectralParameter::on_circle(1.3);
  const ScatteringMatrix a = scattering_matrix(z, p);
  const ScatteringMatrix b = scattering_matrix(z.conj(), p);
  CHECK((a.T_plus.adjoint() - b.T_minus).norm() < 1e-10);
}

TEST_CASE("domain of the scattering matrix") {
  const Potential p = Potential::scalar({{0, 1.0}});
  CHECK_THROWS_AS(scattering_matrix(SpectralParameter(1.0), p), BandEdgeError);
  CHECK_THROWS_AS(scattering_matrix(SpectralParameter(-1.0), p), BandEdgeError);
  CHECK_THROWS_AS(scattering_matrix(SpectralParameter(0.5), p), DomainError);
}

TEST_CASE("grid over the roots of unity") {
  std::vector<Complex> zs;
  for (int k = 0; k < 8; ++k) {
    if (k == 0 || k == 4) continue;
    zs.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 8));
  }
  const auto grid = smatrix_grid(Potential::zero(1), zs);
  REQUIRE(grid.size() == 6);
  for (const GridEntry& e : grid) {
    REQUIRE(e.result.has_value());
    CHECK((e.result->S - CMatrix::Identity(2, 2)).norm() < 1e-13);
  }
  CHECK(smatrix_grid(Potential::zero(1), {}).empty());
}

TEST_CASE("grid records failures per point and keeps input order") {
  const auto grid = smatrix_grid(Potential::scalar({{0, 1.0}}),
                                 {std::polar(1.0, 0.5), Complex(1.0), Complex(0.5)});
  REQUIRE(grid.size() == 3);
  CHECK(grid[0].result.has_value());
  CHECK(grid[1].failure == FailureKind::input);
  CHECK(grid[2].failure == FailureKind::input);
}

TEST_CASE("transmission vanishes approaching a generic band edge") {
  const Potential p = Potential::scalar({{0, 1.0}});
  std::vector<Complex> zs;
  for (double e : {0.3, 0.1, 0.03, 0.01, 0.003}) zs.push_back(std::polar(1.0, e));
  const auto grid = smatrix_grid(p, zs);
  double prev = 2.0;
  for (const GridEntry& e : grid) {
    const double t = std::abs(e.result->T_plus(0, 0));
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("grid results do not depend on the worker count") {
  std::mt19937_64 rng(33);
  const Potential p = testing::random_potential(2, -2, 2, 2.0, rng);
  std::vector<Complex> zs;
  for (int k = 1; k <= 12; ++k) zs.push_back(std::polar(1.0, 0.25 * k));
  const auto a = smatrix_grid(p, zs, {}, 1);
  const auto b = smatrix_grid(p, zs, {}, 4);
  for (std::size_t i = 0; i < zs.size(); ++i) CHECK((a[i].result->S - b[i].result->S).norm() == 0.0);
}
