#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "latscat/errors.hpp"

using namespace latscat;
using json = nlohmann::json;
using testing::data_path;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, int expect = cli::kExitOk) {
  const Outcome o = run_cli(std::move(args));
  REQUIRE_MESSAGE(o.code == expect, o.err);
  return json::parse(o.out);
}

Complex entry(const json& block, int i, int j) {
  const double re = block["re"][i][j].get<double>();
  const double im = block.contains("im") ? block["im"][i][j].get<double>() : 0.0;
  return {re, im};
}

bool all_pass(const json& report) {
  for (const json& c : report["certificates"]) {
    if (!c["pass"].get<bool>()) return false;
  }
  return true;
}

const std::vector<std::string> kExamples = {"free_L2", "single_site", "exceptional_pair",
                                            "mixed_channels", "coupled_barrier"};

std::string example(const std::string& name) {
  return data_path("examples_potentials/" + name + ".json");
}

}  // namespace

TEST_CASE("grid and list parsers") {
  const std::vector<Complex> arc = cli::parse_z_list("arc:4:0.5:2");
  REQUIRE(arc.size() == 4);
  CHECK(std::abs(arc[0] - std::polar(1.0, 0.5)) < 1e-15);
  CHECK(std::abs(arc[3] - std::polar(1.0, 2.0)) < 1e-15);
  const std::vector<Complex> sym = cli::parse_z_list("sym:3:0.5:2");
  REQUIRE(sym.size() == 6);
  const std::vector<Complex> lst = cli::parse_z_list("0.6+0.8i,cis:1.5,-1i");
  REQUIRE(lst.size() == 3);
  CHECK(std::abs(lst[0] - Complex(0.6, 0.8)) < 1e-15);
  CHECK(std::abs(lst[1] - std::polar(1.0, 1.5)) < 1e-15);
  CHECK(std::abs(lst[2] - Complex(0.0, -1.0)) < 1e-15);
  CHECK(cli::parse_complex("0.5") == Complex(0.5, 0.0));
  CHECK(cli::parse_eps_list("eps:1e-2,1e-3") == std::vector<double>{1e-2, 1e-3});
  CHECK(cli::parse_eps_list("0.1,0.01").size() == 2);
  CHECK(cli::default_grid().size() == 64);
  CHECK_THROWS_AS(cli::parse_z_list("arc:0:0:1"), InputError);
  CHECK_THROWS_AS(cli::parse_z_list("arc:3:x:1"), InputError);
  CHECK_THROWS_AS(cli::parse_z_list("1+2k"), InputError);
  CHECK_THROWS_AS(cli::parse_eps_list("eps:-1"), InputError);
}

TEST_CASE("smatrix: free potential gives identity transmission") {
  const json r = run_json({"smatrix", "--potential", example("free_L2"), "--z", "arc:4:0.3:2.8"});
  CHECK(r["schema_version"] == cli::kSchemaVersion);
  CHECK(r["status"] == "pass");
  REQUIRE(r["points"].size() == 4);
  for (const json& pt : r["points"]) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double d = i == j ? 1.0 : 0.0;
        CHECK(std::abs(entry(pt["T_plus"], i, j) - d) < 1e-13);
        CHECK(std::abs(entry(pt["T_minus"], i, j) - d) < 1e-13);
        CHECK(std::abs(entry(pt["R_plus"], i, j)) < 1e-13);
        CHECK(std::abs(entry(pt["R_minus"], i, j)) < 1e-13);
      }
    }
    CHECK(pt["unitarity_defect"].get<double>() < 1e-13);
  }
}

TEST_CASE("smatrix: single site matches the closed form and conserves flux") {
  const json r = run_json({"smatrix", "--potential", example("single_site")});
  REQUIRE(r["points"].size() == 64);
  for (const json& pt : r["points"]) {
    const Complex z(pt["z"][0].get<double>(), pt["z"][1].get<double>());
    CHECK(std::abs(entry(pt["T_plus"], 0, 0) - testing::closed_T(z, 1.0)) < 1e-12);
    CHECK(std::abs(entry(pt["R_plus"], 0, 0) - testing::closed_R(z, 1.0)) < 1e-12);
    for (const json& f : pt["flux"]) CHECK(std::abs(f.get<double>() - 1.0) < 1e-10);
  }
}

TEST_CASE("smatrix: CSV output") {
  const Outcome o = run_cli({"smatrix", "--potential", example("free_L2"), "--z", "cis:1",
                             "--format", "csv"});
  REQUIRE(o.code == 0);
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "schema_version,z_re,z_im,block,i,j,re,im");
  int rows = 0;
  while (std::getline(in, line)) rows += line.empty() ? 0 : 1;
  // Four 2x2 blocks, four flux entries and three scalar residuals.
  CHECK(rows == 16 + 4 + 3);
}

TEST_CASE("smatrix: --out writes the report to a file") {
  const auto path = std::filesystem::temp_directory_path() / "latscat_cli_out.json";
  const Outcome o = run_cli(
      {"smatrix", "--potential", example("single_site"), "--z", "cis:1", "--out", path.string()});
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream f(path);
  const json r = json::parse(f);
  CHECK(r["points"].size() == 1);
  std::filesystem::remove(path);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args = {"verify", "--potential", example("coupled_barrier"),
                                         "--oracle", "--workers", "4"};
  const Outcome a = run_cli(args);
  const Outcome b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("band-edge reports") {
  const json f = run_json({"band-edge", "--potential", example("free_L2")});
  CHECK(f["band_edge"]["dim_N"] == 2);
  CHECK(std::abs(entry(f["band_edge"]["T1_plus"], 1, 1) - 1.0) < 1e-12);

  const json g = run_json({"band-edge", "--potential", example("single_site")});
  CHECK(g["band_edge"]["dim_N"] == 0);
  CHECK(std::abs(entry(g["band_edge"]["R1_plus"], 0, 0) - 1.0) < 1e-12);

  const json e = run_json({"band-edge", "--potential", example("exceptional_pair")});
  CHECK(e["band_edge"]["dim_N"] == 1);
  CHECK(std::abs(entry(e["band_edge"]["T1_plus"], 0, 0) + 1.0) < 1e-12);
  CHECK(std::abs(entry(e["band_edge"]["Omega"], 0, 0) + 1.0) < 1e-12);
  CHECK(all_pass(e));

  const json m = run_json({"band-edge", "--potential", example("mixed_channels"), "--z",
                           "eps:1e-2,1e-3,1e-4"});
  CHECK(m["band_edge"]["dim_N"] == 1);
  CHECK(all_pass(m));
}

TEST_CASE("converge reports rows for each eps") {
  const json r = run_json({"converge", "--potential", example("single_site"), "--path", "radial",
                           "--z", "eps:1e-2,1e-3"});
  CHECK(r["status"] == "pass");
  CHECK(r.dump().find("1e-3") == std::string::npos);  // numbers, not strings
}

TEST_CASE("verify passes on every bundled example") {
  for (const std::string& name : kExamples) {
    CAPTURE(name);
    const json r = run_json({"verify", "--potential", example(name), "--oracle"});
    CHECK(r["status"] == "pass");
    CHECK(all_pass(r));
    bool has_oracle = false;
    for (const json& c : r["certificates"]) {
      has_oracle = has_oracle || c["name"].get<std::string>().rfind("oracle", 0) == 0;
    }
    CHECK(has_oracle);
  }
}

TEST_CASE("oracle-compare passes on every bundled example") {
  for (const std::string& name : kExamples) {
    CAPTURE(name);
    const json r = run_json({"oracle-compare", "--potential", example(name)});
    CHECK(all_pass(r));
  }
}

TEST_CASE("broken hermiticity") {
  const std::string p = data_path("tests/data/broken_hermiticity.json");
  CHECK(run_cli({"verify", "--potential", p}).code == cli::kExitInput);
  const json r = run_json({"verify", "--potential", p, "--no-hermiticity-check"},
                          cli::kExitCertificate);
  CHECK(r["status"] == "fail");
  bool unitarity_failed = false;
  for (const json& c : r["certificates"]) {
    if (c["name"] == "unitarity" && !c["pass"].get<bool>()) unitarity_failed = true;
  }
  CHECK(unitarity_failed);
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run_cli({"smatrix", "--potential", data_path("tests/data/malformed.json")}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", data_path("tests/data/missing.json")}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", example("single_site"), "--z", "1"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", example("single_site"), "--z", "cis:1e-8"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", example("single_site"), "--z", "0.5"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", example("single_site"), "--tol", "-1"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix", "--potential", example("single_site"), "--bogus"}).code ==
        cli::kExitInput);
  CHECK(run_cli({"smatrix"}).code == cli::kExitInput);
  CHECK(run_cli({}).code == cli::kExitInput);
}
