#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "latscat/errors.hpp"
#include "latscat/potential.hpp"

using namespace latscat;

TEST_CASE("single-site document") {
  const Potential p = load_potential_string(R"({"L": 1, "sites": [{"n": 0, "re": [[2]]}]})");
  CHECK(p.dim() == 1);
  CHECK(p.at(0)(0, 0) == Complex(2.0));
  CHECK(p.at(1).norm() == 0.0);
  CHECK(p.support() == Window{0, 0});
}

TEST_CASE("non-Hermitian document is rejected") {
  const std::string doc = R"({"L": 2, "sites": [{"n": 0, "re": [[0, 1], [0, 0]]}]})";
  try {
    (void)load_potential_string(doc);
    FAIL("expected HermiticityError");
  } catch (const HermiticityError& e) {
    CHECK(e.site() == 0);
    CHECK(e.defect() == doctest::Approx(1.0));
  }
  PotentialOptions bypass;
  bypass.enforce_hermitian = false;
  const Potential raw = load_potential_string(doc, bypass);
  CHECK_FALSE(raw.hermitian());
  CHECK(raw.at(0)(0, 1) == Complex(1.0));
}

TEST_CASE("exceptional pair document") {
  const Potential p =
      load_potential_string(R"({"L": 1, "sites": [{"n": 0, "re": [[2]]}, {"n": 1, "re": [[2]]}]})");
  CHECK(p == testing::exceptional_pair());
}

TEST_CASE("imaginary parts and symmetrisation") {
  const Potential p = load_potential_string(
      R"({"L": 2, "sites": [{"n": -1, "re": [[1, 0.5], [0.5, 0]], "im": [[0, 0.25], [-0.25, 0]]}]})");
  const CMatrix v = p.at(-1);
  CHECK(v(0, 1) == Complex(0.5, 0.25));
  CHECK(v(1, 0) == Complex(0.5, -0.25));
  CHECK((v - v.adjoint()).norm() == 0.0);
}

TEST_CASE("malformed documents are parse errors") {
  CHECK_THROWS_AS(load_potential_string("{"), ParseError);
  CHECK_THROWS_AS(load_potential_string(R"({"sites": []})"), ParseError);
  CHECK_THROWS_AS(load_potential_string(R"({"L": 1, "sites": [{"re": [[1]]}]})"), ParseError);
  CHECK_THROWS_AS(
      load_potential_string(R"({"L": 1, "sites": [{"n": 0, "re": [[1]]}, {"n": 0, "re": [[2]]}]})"),
      ParseError);
  CHECK_THROWS_AS(load_potential_file(testing::data_path("tests/data/malformed.json")), ParseError);
  CHECK_THROWS_AS(load_potential_file("/nonexistent/potential.json"), ParseError);
}

TEST_CASE("shape mismatches are dimension errors") {
  CHECK_THROWS_AS(load_potential_string(R"({"L": 2, "sites": [{"n": 0, "re": [[1]]}]})"),
                  DimensionError);
  CHECK_THROWS_AS(Potential(2, {{0, CMatrix::Identity(3, 3)}}), DimensionError);
}

TEST_CASE("exact zeros are dropped") {
  const Potential p(2, {{0, CMatrix::Zero(2, 2)}, {3, CMatrix::Identity(2, 2)}});
  CHECK(p.sites().size() == 1);
  CHECK(p.support() == Window{3, 3});
  CHECK(Potential::zero(3).is_zero());
  CHECK(Potential::zero(3).support().empty());
}

TEST_CASE("first moment tail") {
  std::map<int, double> compact;
  for (int n = -3; n <= 3; ++n) compact[n] = 1.0;
  CHECK(first_moment_tail(Potential::scalar(compact), 5) == 0.0);
  CHECK(first_moment_tail(testing::exceptional_pair(), 0) == doctest::Approx(2.0));

  std::map<int, double> decay;
  double expect = 0.0;
  for (int n = -10; n <= 10; ++n) {
    decay[n] = std::pow(4.0, -std::abs(n));
    if (std::abs(n) >= 3) expect += std::abs(n) * decay[n];
  }
  CHECK(first_moment_tail(Potential::scalar(decay), 2) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(first_moment_tail(Potential::scalar(decay), -1), DomainError);
  CHECK(Potential::scalar(decay).first_moment() ==
        doctest::Approx(first_moment_tail(Potential::scalar(decay), 0)));
}

TEST_CASE("translation and reflection") {
  const Potential p = Potential::scalar({{0, 2.0}});
  CHECK(translate_origin(p, 0) == p);
  CHECK(translate_origin(p, 1).at(-1)(0, 0) == Complex(2.0));
  const Potential q = testing::mixed_channels();
  CHECK(translate_origin(translate_origin(q, 3), -3) == q);
  CHECK(reflect(reflect(q)) == q);
  CHECK(reflect(q).at(-1) == q.at(1));
}

TEST_CASE("serialisation round-trips") {
  std::mt19937_64 rng(11);
  const Potential p = testing::random_potential(3, -2, 2, 2.0, rng);
  const Potential q = load_potential_string(serialize_potential(p));
  CHECK(q == p);
}

TEST_CASE("bundled example potentials load") {
  for (const char* f : {"free_L2.json", "single_site.json", "exceptional_pair.json",
                        "mixed_channels.json", "coupled_barrier.json"}) {
    CAPTURE(f);
    CHECK_NOTHROW(load_potential_file(testing::data_path(std::string("examples_potentials/") + f)));
  }
  CHECK(load_potential_file(testing::data_path("examples_potentials/mixed_channels.json")) ==
        testing::mixed_channels());
}
