#pragma once

// L x L matrix-valued functions on an integer window, as returned by every solver.

#include <string>
#include <vector>

#include "latscat/numerics.hpp"
#include "latscat/window.hpp"

namespace latscat {

class Potential;

enum class Role { jost_plus, jost_minus, v_plus, v_minus, prescribed, free };
std::string role_name(Role r);

struct SolveDiagnostics {
  double volterra_residual = 0.0;  // fixed-point residual on the Volterra subwindow
  int iterations = 0;              // Neumann iterations used
  int split_site = 0;              // left end of the Volterra subwindow
  double contraction_tail = 0.0;   // tail of the dominating sequence past the split
  double schrodinger_residual = 0.0;
  double asymptotic_defect = 0.0;  // normalisation error at the far window edge
  double path_deviation = 0.0;     // relative gap between two independent evaluations
};

class LatticeMatrixFunction {
 public:
  using Map = Eigen::Map<CMatrix>;
  using ConstMap = Eigen::Map<const CMatrix>;

  LatticeMatrixFunction(Eigen::Index L, Window w, Role role, Complex z, Complex energy);

  Eigen::Index dim() const { return L_; }
  const Window& window() const { return window_; }
  Role role() const { return role_; }
  Complex z() const { return z_; }
  Complex energy() const { return energy_; }

  // Copy of the value at n. Throws WindowError outside the window.
  CMatrix operator()(int n) const;
  Map at(int n);
  ConstMap at(int n) const;
  void set(int n, const CMatrix& value);

  // Pointwise u(n) * c.
  LatticeMatrixFunction times(const CMatrix& c) const;

  SolveDiagnostics diagnostics;

 private:
  std::size_t offset(int n) const;

  Eigen::Index L_;
  Window window_;
  Role role_;
  Complex z_;
  Complex energy_;
  std::vector<Complex> data_;
};

// max over interior n of
//   ||u(n-1) + V(n)u(n) + u(n+1) - E u(n)|| / max(1, ||u(n-1)|| + (|E| + ||V(n)||)||u(n)|| + ||u(n+1)||)
// with Frobenius norms, so growing solutions are measured relative to their own size.
double schrodinger_residual(const LatticeMatrixFunction& u, const Potential& p);

// The common window of two functions; throws WindowError if it has fewer than `min_size` sites.
Window overlap(const LatticeMatrixFunction& a, const LatticeMatrixFunction& b, int min_size = 2);

}  // namespace latscat
