#include "latscat/volterra.hpp"

#include <algorithm>
#include <vector>

#include "latscat/errors.hpp"
#include "latscat/simd/kernels.hpp"

namespace latscat {

namespace {

struct FactorSite {
  int m;
  const CMatrix* F;
};

class Accumulator {
 public:
  Accumulator(const VolterraProblem& p, Window range, std::vector<FactorSite> sites)
      : p_(p), range_(range), sites_(std::move(sites)), kern_(simd::active_kernels()) {
    const auto L = static_cast<std::size_t>(p.dim);
    ll_ = L * L;
    y_.assign(sites_.size() * ll_, Complex(0.0));
    weights_.assign(static_cast<std::size_t>(range.size()) * sites_.size(), Complex(0.0));
    for (int n = range.lo; n <= range.hi; ++n) {
      for (std::size_t s = 0; s < sites_.size(); ++s) {
        if (coupled(n, sites_[s].m)) weights_[index(n, s)] = p.weight(n, sites_[s].m);
      }
    }
  }

  bool coupled(int n, int m) const {
    return p_.coupling == Coupling::whole_range || m > n;
  }

  // Y(m) = F(m) f(m) for every factor site with m >= from.
  void refresh(const LatticeMatrixFunction& f, int from) {
    const auto L = static_cast<std::size_t>(p_.dim);
    for (std::size_t s = 0; s < sites_.size(); ++s) {
      if (sites_[s].m < from || !f.window().contains(sites_[s].m)) continue;
      refresh_one(f, s, L);
    }
  }

  void refresh_site(const LatticeMatrixFunction& f, int m) {
    const auto L = static_cast<std::size_t>(p_.dim);
    for (std::size_t s = 0; s < sites_.size(); ++s) {
      if (sites_[s].m == m) refresh_one(f, s, L);
    }
  }

  // out = g(n) + sum_m w(n, m) Y(m), restricted to factor sites in [lo, hi].
  void apply(int n, int lo, CMatrix& out) const {
    out = p_.inhomogeneity(n);
    for (std::size_t s = 0; s < sites_.size(); ++s) {
      const int m = sites_[s].m;
      if (m < lo || !coupled(n, m)) continue;
      const Complex w = weights_[index(n, s)];
      if (w == Complex(0.0)) continue;
      kern_.caxpy(ll_, w, y_.data() + s * ll_, out.data());
    }
  }

 private:
  std::size_t index(int n, std::size_t s) const {
    return static_cast<std::size_t>(n - range_.lo) * sites_.size() + s;
  }

  void refresh_one(const LatticeMatrixFunction& f, std::size_t s, std::size_t L) {
    Complex* y = y_.data() + s * ll_;
    std::fill(y, y + ll_, Complex(0.0));
    const CMatrix fm = f(sites_[s].m);
    kern_.cgemm_acc(L, L, L, sites_[s].F->data(), fm.data(), y);
  }

  const VolterraProblem& p_;
  Window range_;
  std::vector<FactorSite> sites_;
  const simd::KernelTable& kern_;
  std::size_t ll_ = 1;
  std::vector<Complex> y_;
  std::vector<Complex> weights_;
};

double tail_at(const VolterraProblem& p, const std::vector<FactorSite>& sites, int k) {
  double t = 0.0;
  for (const auto& s : sites) {
    if (p.coupling == Coupling::whole_range ? s.m >= k : s.m > k) t += p.dominating(k, s.m);
  }
  return t;
}

}  // namespace

LatticeMatrixFunction solve_volterra(const VolterraProblem& p, Window range,
                                     const VolterraOptions& opts) {
  if (range.empty()) throw WindowError("Volterra range is empty");
  if (!p.inhomogeneity || !p.weight || !p.dominating) {
    throw DimensionError("Volterra problem is missing a component");
  }

  std::vector<FactorSite> sites;
  double beyond = 0.0;
  for (const auto& [m, F] : p.factors) {
    if (F.rows() != p.dim || F.cols() != p.dim) {
      throw DimensionError("Volterra factor at site " + std::to_string(m) + " has the wrong shape");
    }
    if (m > range.hi) {
      beyond += p.dominating(range.hi, m);
    } else if (m >= range.lo) {
      sites.push_back({m, &F});
    }
  }
  if (beyond > 0.0) {
    throw TruncationError("Volterra range " + range.str() + " does not cover the kernel support",
                          beyond);
  }

  int split = range.lo;
  double tail = tail_at(p, sites, split);
  if (p.coupling == Coupling::whole_range) {
    if (tail >= 0.5) {
      throw TruncationError("whole-range Volterra kernel is not contractive on " + range.str(),
                            tail);
    }
  } else {
    split = range.hi;
    tail = 0.0;
    for (int k = range.hi - 1; k >= range.lo; --k) {
      const double t = tail_at(p, sites, k);
      if (t >= 0.5) break;
      split = k;
      tail = t;
    }
    // The Neumann system needs two sites so that callers can recurse away from it.
    if (split == range.hi && range.size() >= 2) {
      split = range.hi - 1;
      tail = tail_at(p, sites, split);
      if (tail >= 0.5) {
        throw TruncationError("no contractive split in Volterra range " + range.str(), tail);
      }
    }
  }

  const Window active{split, range.hi};
  LatticeMatrixFunction f(p.dim, active, opts.role, opts.z, opts.energy);
  for (int n = active.lo; n <= active.hi; ++n) f.set(n, p.inhomogeneity(n));

  Accumulator acc(p, active, sites);
  CMatrix next(p.dim, p.dim);
  int iterations = 0;
  const bool trivial = std::none_of(sites.begin(), sites.end(),
                                    [&](const FactorSite& s) { return s.m >= active.lo; });
  while (!trivial) {
    if (iterations >= opts.max_iterations) {
      throw TruncationError("Neumann iteration did not converge within " +
                                std::to_string(opts.max_iterations) + " steps",
                            tail);
    }
    ++iterations;
    acc.refresh(f, active.lo);
    // Jacobi sweep: every site is updated from the previous iterate.
    LatticeMatrixFunction updated(p.dim, active, opts.role, opts.z, opts.energy);
    double diff = 0.0;
    for (int n = active.lo; n <= active.hi; ++n) {
      acc.apply(n, active.lo, next);
      diff = std::max(diff, (next - f.at(n)).norm());
      updated.at(n) = next;
    }
    f = std::move(updated);
    if (diff <= opts.tol / 2) break;
  }

  acc.refresh(f, active.lo);
  double residual = 0.0;
  for (int n = active.lo; n <= active.hi; ++n) {
    acc.apply(n, active.lo, next);
    residual = std::max(residual, (next - f.at(n)).norm());
  }

  if (opts.extend_below_split && p.coupling == Coupling::strictly_after && split > range.lo) {
    LatticeMatrixFunction full(p.dim, range, opts.role, opts.z, opts.energy);
    for (int n = active.lo; n <= active.hi; ++n) full.at(n) = f.at(n);
    Accumulator wide(p, range, sites);
    wide.refresh(full, active.lo);
    for (int n = split - 1; n >= range.lo; --n) {
      wide.apply(n, range.lo, next);
      full.at(n) = next;
      wide.refresh_site(full, n);
    }
    f = std::move(full);
  }

  f.diagnostics.volterra_residual = residual;
  f.diagnostics.iterations = iterations;
  f.diagnostics.split_site = split;
  f.diagnostics.contraction_tail = tail;
  return f;
}

}  // namespace latscat
