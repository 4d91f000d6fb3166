#pragma once

// Finitely supported Hermitian matrix potentials V : Z -> C^{L x L}.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "latscat/numerics.hpp"
#include "latscat/window.hpp"

namespace latscat {

inline constexpr double kHermiticityTol = 1e-10;

struct PotentialOptions {
  // When false, sites are stored verbatim: no hermiticity check, no symmetrization.
  // Only useful for exercising failure paths.
  bool enforce_hermitian = true;
};

class Potential {
 public:
  explicit Potential(Eigen::Index L);
  // Validates shapes and hermiticity (tolerance kHermiticityTol), then replaces each
  // site by (V + V*)/2. Exactly-zero matrices are dropped.
  Potential(Eigen::Index L, std::map<int, CMatrix> sites, PotentialOptions opts = {});

  static Potential zero(Eigen::Index L) { return Potential(L); }
  static Potential scalar(const std::map<int, double>& values);

  Eigen::Index dim() const { return L_; }
  const std::map<int, CMatrix>& sites() const { return sites_; }
  bool is_zero() const { return sites_.empty(); }
  bool hermitian() const { return hermitian_; }

  // V(n); the zero matrix off the support.
  CMatrix at(int n) const;
  // Spectral norm of V(n).
  double norm_at(int n) const;

  // Smallest window containing every nonzero site; empty for V = 0.
  Window support() const;

  // sum_n |n| ||V(n)||
  double first_moment() const;
  // sum_n ||V(n)||
  double mass() const;

  friend bool operator==(const Potential& a, const Potential& b);

 private:
  Eigen::Index L_;
  std::map<int, CMatrix> sites_;
  std::map<int, double> norms_;
  bool hermitian_ = true;
};

// sum_{|j| > N} |j| ||V(j)||. N must be non-negative.
double first_moment_tail(const Potential& p, int N);

// V'(n) = V(n + shift).
Potential translate_origin(const Potential& p, int shift);
// V'(n) = V(-n).
Potential reflect(const Potential& p);

// JSON document: { "L": int, "sites": [ { "n": int, "re": [[...]], "im": [[...]] } ] }
Potential load_potential(std::istream& in, PotentialOptions opts = {});
Potential load_potential_string(const std::string& text, PotentialOptions opts = {});
Potential load_potential_file(const std::string& path, PotentialOptions opts = {});
std::string serialize_potential(const Potential& p);

}  // namespace latscat
