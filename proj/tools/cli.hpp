#pragma once

// Command-line front end: argument parsing, grid specs and report writers. Kept in a
// library so the test suite can drive it without spawning processes.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latscat/numerics.hpp"

namespace latscat::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitCertificate = 1;
inline constexpr int kExitInput = 2;
// Grid points closer than this to z = +-1 are rejected.
inline constexpr double kEdgeExclusion = 1e-6;
// Grid points with ||z| - 1| below this are projected onto the circle.
inline constexpr double kCircleSnap = 1e-9;

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  std::string potential_path;
  std::string z_spec;            // empty: the command's default grid
  std::string path = "circular";  // converge / band-edge: radial | circular
  std::optional<int> pad;
  double tol = 1e-10;
  double identity_tol = 1e-9;
  double rank_tol = 1e-8;
  double oracle_tol = 1e-10;
  Format format = Format::json;
  std::string out_path;  // empty: standard output
  bool oracle = false;
  bool hermiticity_check = true;
  unsigned workers = 0;
};

// Grid specs:
//   arc:N:LO:HI       N points exp(i theta), theta evenly spaced on [LO, HI]
//   sym:N:LO:HI       the arc together with its mirror image theta -> -theta
//   v1,v2,...         explicit list; each item is a complex literal (0.6+0.8i, -1i, 0.5)
//                     or cis:THETA for exp(i THETA)
// Throws InputError on malformed specs.
std::vector<Complex> parse_z_list(const std::string& spec);

// eps:e1,e2,... or a bare comma-separated list of positive reals.
std::vector<double> parse_eps_list(const std::string& spec);

Complex parse_complex(const std::string& text);

// The default smatrix grid: 64 points on theta in [0.05, pi - 0.05].
std::vector<Complex> default_grid();

// Throws InputError when RunConfig fields are out of range.
void validate(const RunConfig& cfg);

// Runs one command. Reports go to cfg.out_path (or `out`), diagnostics to `err`.
int run_config(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line, argv[0] excluded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latscat::cli
