#include "latscat/jost.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "latscat/errors.hpp"
#include "latscat/volterra.hpp"

namespace latscat {

namespace {

// |z|^{-n} must stay far from overflow on the whole window: 2^200 at most.
constexpr double kMaxLogGrowth = 200.0 * 0.69314718055994531;

void require_covers(const Potential& p, Window w, const char* what) {
  if (w.size() < 3) throw WindowError(std::string(what) + ": window " + w.str() + " is too small");
  if (p.is_zero() || w.contains(p.support())) return;
  double outside = 0.0;
  for (const auto& [n, v] : p.sites()) {
    if (!w.contains(n)) outside += p.norm_at(n);
  }
  throw TruncationError(std::string(what) + ": window " + w.str() + " does not cover the support " +
                            p.support().str(),
                        outside);
}

void require_growth_ok(const SpectralParameter& z, Window w) {
  const double growth =
      std::abs(std::log(std::abs(z.z()))) * std::max(std::abs(w.lo), std::abs(w.hi));
  if (growth > kMaxLogGrowth) {
    throw DomainError("window " + w.str() + " is too wide for |z| = " +
                      std::to_string(std::abs(z.z())) + ": solutions would leave double range");
  }
}

// u(n-1) = (E - V(n)) u(n) - u(n+1) for n = from, ..., w.lo + 1.
void recurse_left(LatticeMatrixFunction& u, const Potential& p, int from) {
  const Complex E = u.energy();
  for (int n = from; n > u.window().lo; --n) {
    const CMatrix un = u(n);
    u.at(n - 1) = E * un - p.at(n) * un - u.at(n + 1);
  }
}

// u(n+1) = (E - V(n)) u(n) - u(n-1) for n = from, ..., w.hi - 1.
void recurse_right(LatticeMatrixFunction& u, const Potential& p, int from) {
  const Complex E = u.energy();
  for (int n = from; n < u.window().hi; ++n) {
    const CMatrix un = u(n);
    u.at(n + 1) = E * un - p.at(n) * un - u.at(n - 1);
  }
}

LatticeMatrixFunction mirrored(const LatticeMatrixFunction& r, Role role, double sign) {
  const Window w{-r.window().hi, -r.window().lo};
  LatticeMatrixFunction out(r.dim(), w, role, r.z(), r.energy());
  for (int n = w.lo; n <= w.hi; ++n) out.at(n) = sign * r.at(-n);
  out.diagnostics = r.diagnostics;
  out.diagnostics.split_site = -r.diagnostics.split_site;
  return out;
}

}  // namespace

Window default_window(const Potential& p, std::optional<int> pad) {
  const Window core = p.support().hull(Window{0, 1});
  const int width = p.support().size();
  const int k = pad.value_or(std::max(kMinPad, width));
  if (k < 1) throw WindowError("window padding must be positive");
  return core.padded(k);
}

LatticeMatrixFunction jost_plus(const SpectralParameter& z, const Potential& p, Window w,
                                double tol) {
  require_covers(p, w, "jost_plus");
  require_growth_ok(z, w);
  const Eigen::Index L = p.dim();

  // Rescaled unknown f(n) = z^{-n} u(n):
  //   f(n) = 1 - sum_{m > n} s(m - n) z^{m - n} V(m) f(m).
  const int span = w.size();
  std::vector<Complex> damped(static_cast<std::size_t>(span) + 1);
  std::vector<double> running_max(damped.size(), 0.0);
  for (int j = 0; j <= span; ++j) {
    damped[j] = s_free_damped(z, j);
    running_max[j] = std::max(j > 0 ? running_max[j - 1] : 0.0, std::abs(damped[j]));
  }

  VolterraProblem prob;
  prob.dim = L;
  prob.inhomogeneity = [L](int) { return CMatrix(CMatrix::Identity(L, L)); };
  prob.weight = [&damped](int n, int m) { return -damped[static_cast<std::size_t>(m - n)]; };
  prob.factors = p.sites();
  prob.dominating = [&running_max, &p](int k, int m) {
    return m > k ? p.norm_at(m) * running_max[static_cast<std::size_t>(m - k)] : 0.0;
  };
  prob.coupling = Coupling::strictly_after;

  VolterraOptions opts;
  opts.tol = tol;
  opts.extend_below_split = false;
  const LatticeMatrixFunction f = solve_volterra(prob, w, opts);

  LatticeMatrixFunction u(L, w, Role::jost_plus, z.z(), z.energy());
  const int split = f.diagnostics.split_site;
  for (int n = split; n <= w.hi; ++n) u.at(n) = plane_wave(z, n) * f.at(n);
  recurse_left(u, p, split);

  u.diagnostics = f.diagnostics;
  u.diagnostics.schrodinger_residual = schrodinger_residual(u, p);
  u.diagnostics.asymptotic_defect = (f.at(w.hi) - CMatrix::Identity(L, L)).norm();
  return u;
}

LatticeMatrixFunction jost_minus(const SpectralParameter& z, const Potential& p, Window w,
                                 double tol) {
  // Reflection n -> -n maps u_+^z of the reflected potential onto u_-^{1/z} of p.
  const LatticeMatrixFunction r = jost_plus(z, reflect(p), Window{-w.hi, -w.lo}, tol);
  return mirrored(r, Role::jost_minus, 1.0);
}

LatticeMatrixFunction jost_v_plus(const Potential& p, Window w, double tol) {
  require_covers(p, w, "jost_v_plus");
  const Eigen::Index L = p.dim();

  // Base point: smallest N >= 1 with sum_{j >= N} j ||V(j)|| < 1/2.
  auto right_tail = [&p](int N) {
    double t = 0.0;
    for (const auto& [j, v] : p.sites()) {
      if (j >= N) t += std::abs(j) * p.norm_at(j);
    }
    return t;
  };
  int N = 1;
  if (!p.is_zero()) {
    while (N <= p.support().hi && right_tail(N) >= 0.5) ++N;
  }
  if (N + 1 > w.hi) {
    throw TruncationError("jost_v_plus: window " + w.str() + " ends before the base point " +
                              std::to_string(N),
                          right_tail(w.hi));
  }

  // f(n) = v(n)/n = 1 + (1/n) sum_{j=N}^{n} j^2 V(j) f(j) + sum_{j>n} j V(j) f(j).
  VolterraProblem prob;
  prob.dim = L;
  prob.inhomogeneity = [L](int) { return CMatrix(CMatrix::Identity(L, L)); };
  prob.weight = [](int n, int j) {
    return j <= n ? Complex(static_cast<double>(j) * j / n) : Complex(static_cast<double>(j));
  };
  for (const auto& [j, v] : p.sites()) {
    if (j >= N) prob.factors.emplace(j, v);
  }
  prob.dominating = [&p](int, int m) { return std::abs(m) * p.norm_at(m); };
  prob.coupling = Coupling::whole_range;

  VolterraOptions opts;
  opts.tol = tol;
  const LatticeMatrixFunction f = solve_volterra(prob, Window{N, w.hi}, opts);

  LatticeMatrixFunction v(L, w, Role::v_plus, Complex(1.0), Complex(2.0));
  for (int n = N; n <= w.hi; ++n) v.at(n) = static_cast<double>(n) * f.at(n);
  recurse_left(v, p, N);

  v.diagnostics = f.diagnostics;
  v.diagnostics.schrodinger_residual = schrodinger_residual(v, p);
  v.diagnostics.asymptotic_defect = (f.at(w.hi) - CMatrix::Identity(L, L)).norm();
  return v;
}

LatticeMatrixFunction jost_v_minus(const Potential& p, Window w, double tol) {
  const LatticeMatrixFunction r = jost_v_plus(reflect(p), Window{-w.hi, -w.lo}, tol);
  return mirrored(r, Role::v_minus, -1.0);
}

LatticeMatrixFunction prescribed_by_recursion(const SpectralParameter& z, const CMatrix& a,
                                              const CMatrix& b, const Potential& p, Window w) {
  if (!w.contains(0) || !w.contains(1)) {
    throw WindowError("prescribed solution needs sites 0 and 1 in the window " + w.str());
  }
  if (a.rows() != p.dim() || a.cols() != p.dim() || b.rows() != p.dim() || b.cols() != p.dim()) {
    throw DimensionError("prescribed data must be L x L");
  }
  require_growth_ok(z, w);
  LatticeMatrixFunction psi(p.dim(), w, Role::prescribed, z.z(), z.energy());
  psi.at(0) = a;
  psi.at(1) = b;
  recurse_right(psi, p, 1);
  recurse_left(psi, p, 0);
  psi.diagnostics.schrodinger_residual = schrodinger_residual(psi, p);
  return psi;
}

LatticeMatrixFunction prescribed_solution(const SpectralParameter& z, const CMatrix& a,
                                          const CMatrix& b, const Potential& p, Window w,
                                          [[maybe_unused]] double tol) {
  if (z.z() == Complex(-1.0)) throw DomainError("prescribed solutions need z != -1");
  const LatticeMatrixFunction direct = prescribed_by_recursion(z, a, b, p, w);

  LatticeMatrixFunction psi(p.dim(), w, Role::prescribed, z.z(), z.energy());
  const CMatrix ba = b - a;
  auto free_part = [&](int n) -> CMatrix { return s_free(z, n) * ba + tau_free(z, n) * a; };
  psi.at(0) = a;
  psi.at(1) = b;
  // n >= 2: Psi(n) = free(n) - sum_{j=1}^{n-1} s(n - j) V(j) Psi(j)
  for (int n = 2; n <= w.hi; ++n) {
    CMatrix acc = free_part(n);
    for (const auto& [j, v] : p.sites()) {
      if (j < 1) continue;
      if (j > n - 1) break;
      acc -= s_free(z, n - j) * (v * psi.at(j));
    }
    psi.at(n) = acc;
  }
  // n <= -1: Psi(n) = free(n) + sum_{j=n+1}^{0} s(n - j) V(j) Psi(j)
  for (int n = -1; n >= w.lo; --n) {
    CMatrix acc = free_part(n);
    for (const auto& [j, v] : p.sites()) {
      if (j <= n) continue;
      if (j > 0) break;
      acc += s_free(z, n - j) * (v * psi.at(j));
    }
    psi.at(n) = acc;
  }
  psi.diagnostics.schrodinger_residual = schrodinger_residual(psi, p);
  psi.diagnostics.path_deviation = relative_distance(psi, direct);
  return psi;
}

LatticeMatrixFunction phi_solution(const SpectralParameter& z, const Potential& p, Window w,
                                   double tol) {
  const LatticeMatrixFunction u1 = jost_plus(SpectralParameter(1.0), p, w, tol);
  return prescribed_solution(z, u1(0), u1(1), p, w, tol);
}

double relative_distance(const LatticeMatrixFunction& u, const LatticeMatrixFunction& v) {
  const Window w = overlap(u, v, 1);
  double worst = 0.0;
  for (int n = w.lo; n <= w.hi; ++n) {
    worst = std::max(worst, (u.at(n) - v.at(n)).norm() / std::max(1.0, v.at(n).norm()));
  }
  return worst;
}

}  // namespace latscat
