#include "latscat/bandedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latscat/errors.hpp"

namespace latscat {

namespace {

using numerics::SubspaceBasis;

constexpr Complex kI(0.0, 1.0);
// Path (iii) for Gamma only uses sites where u_-^1(n) is this well conditioned.
constexpr double kQuotientCondition = 1e4;

double spec(const CMatrix& m) { return numerics::spectral_norm(m); }

double min_singular_value(const CMatrix& m) {
  if (m.cols() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// Sites 1, 2, 0, 3, -1, ... inside the interior of the window.
std::vector<int> sites_near_one(Window w) {
  std::vector<int> out;
  for (int k = 0; k <= w.size(); ++k) {
    for (int n : {1 + k, 1 - k}) {
      if (k == 0 && n != 1) continue;
      if (n > w.lo && n < w.hi && std::find(out.begin(), out.end(), n) == out.end()) {
        out.push_back(n);
      }
    }
  }
  return out;
}

// Max over columns of ||a_j - b_j|| / max(1, ||b_j||).
double column_distance(const CMatrix& a, const CMatrix& b) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    worst = std::max(worst, (a.col(j) - b.col(j)).norm() / std::max(1.0, b.col(j).norm()));
  }
  return worst;
}

}  // namespace

ThresholdSolutions solve_threshold(const Potential& p, Window w, double tol) {
  const SpectralParameter one(1.0);
  return ThresholdSolutions{w, jost_plus(one, p, w, tol), jost_minus(one, p, w, tol)};
}

ThresholdWronskian threshold_wronskian(const ThresholdSolutions& s, const Potential& p,
                                       double tol) {
  ThresholdWronskian t;
  const WronskianValue direct = wronskian(s.u_minus, s.u_plus, 10.0 * tol);
  t.direct = direct.value;
  t.constancy_residual = direct.constancy_residual;
  const Eigen::Index L = p.dim();
  CMatrix sum = CMatrix::Zero(L, L);
  for (const auto& [j, v] : p.sites()) {
    const CMatrix u = s.u_plus(j);
    sum += v * u;
    t.reference += p.norm_at(j) * spec(u);
  }
  t.summed = -kI * sum;
  t.discrepancy = spec(t.direct - t.summed) / std::max(1.0, t.reference);
  if (t.discrepancy > 100.0 * tol) {
    throw InconsistentSolutionsError("threshold Wronskian: direct and summed forms disagree",
                                     t.discrepancy);
  }
  return t;
}

ThresholdWronskian threshold_wronskian(const Potential& p, Window w, double tol) {
  return threshold_wronskian(solve_threshold(p, w, tol), p, tol);
}

HalfBoundStates half_bound_states(const ThresholdSolutions& s, const ThresholdWronskian& w,
                                  double rank_tol) {
  HalfBoundStates h;
  h.rank = numerics::rank_report(w.summed, rank_tol, w.reference);
  h.N = numerics::kernel_basis(w.summed, rank_tol, w.reference);
  h.L = numerics::kernel_basis(w.summed.adjoint(), rank_tol, w.reference);
  if (h.N.count() != h.L.count()) {
    throw TheoryViolation("dim N and dim L differ (" + std::to_string(h.N.count()) + " vs " +
                          std::to_string(h.L.count()) + ")");
  }
  for (Eigen::Index i = 0; i < h.rank.singular_values.size(); ++i) {
    const double sv = h.rank.singular_values(i);
    if (sv > h.rank.threshold) h.sigma_min_nonzero = sv;
  }

  const Window win = s.u_plus.window();
  for (Eigen::Index c = 0; c < h.N.count(); ++c) {
    const CVector xi = h.N.vectors.col(c);
    double sup = 0.0;
    for (int n = win.lo; n <= win.hi; ++n) sup = std::max(sup, (s.u_plus.at(n) * xi).norm());
    const double far = (s.u_plus.at(win.hi) * xi).norm();
    h.bounded_ratio = std::max(h.bounded_ratio, sup / far);
  }
  if (h.N.count() > 0) {
    for (int n = win.lo; n <= win.hi; ++n) {
      h.bounded_sup = std::max(h.bounded_sup, spec(s.u_plus.at(n) * h.N.vectors));
    }
  }
  const SubspaceBasis perp = numerics::orthogonal_complement(h.N);
  h.growth_slope = perp.count() == 0
                       ? std::numeric_limits<double>::infinity()
                       : min_singular_value(s.u_plus.at(win.lo) * perp.vectors) /
                             std::max(1, std::abs(win.lo));
  return h;
}

GammaPaths gamma_map(const ThresholdSolutions& s, const Potential& p, const SubspaceBasis& N,
                     double path_tol) {
  const Eigen::Index L = p.dim();
  GammaPaths g;
  CMatrix G = CMatrix::Identity(L, L);
  for (const auto& [j, v] : p.sites()) G -= static_cast<double>(j) * (v * s.u_plus(j));
  g.gamma = G * numerics::orthogonal_projector(N);
  g.by_sum = G * N.vectors;
  g.by_limit = s.u_plus(s.u_plus.window().lo) * N.vectors;
  if (N.count() == 0) return g;

  for (int n : sites_near_one(s.u_minus.window())) {
    const CMatrix um = s.u_minus(n);
    if (numerics::condition_number(um) > kQuotientCondition) continue;
    g.by_quotient = (numerics::inverse(um) * s.u_plus(n) * N.vectors).eval();
    g.quotient_site = n;
    break;
  }
  g.agreement = column_distance(g.by_limit, g.by_sum);
  if (g.by_quotient) {
    g.agreement = std::max({g.agreement, column_distance(*g.by_quotient, g.by_sum),
                            column_distance(*g.by_quotient, g.by_limit)});
  }
  if (g.agreement > path_tol) {
    throw TruncationError("Gamma: sum, limit and quotient paths disagree; widen the window",
                          g.agreement);
  }
  return g;
}

OmegaMap omega_map(const ThresholdSolutions& s, const Potential& p) {
  const int reach = std::max(1, p.support().size());
  for (int k = 0; k <= reach; ++k) {
    for (int shift : {k, -k}) {
      if (k == 0 && shift != 0) continue;
      const int n = 1 + shift;
      if (!s.u_plus.window().contains(n) || !s.u_minus.window().contains(n)) continue;
      try {
        CMatrix inv = numerics::inverse(s.u_plus(n));
        return OmegaMap{inv * s.u_minus(n), shift};
      } catch (const SingularMatrixError&) {
      }
    }
  }
  throw AssumptionViolation("u_+^1 is singular at every site near the origin");
}

BandEdgeLimits assemble_limits(const CMatrix& W, const CMatrix& gamma, const CMatrix& omega,
                               const SubspaceBasis& N, const SubspaceBasis& L) {
  const Eigen::Index dim = W.rows();
  const Eigen::Index d = N.count();
  if (L.count() != d) throw TheoryViolation("dim N and dim L differ");
  const SubspaceBasis Np = numerics::orthogonal_complement(N);
  const SubspaceBasis Lp = numerics::orthogonal_complement(L);

  BandEdgeLimits r;
  CMatrix E(dim, dim), V(dim, dim);
  E << L.vectors, Lp.vectors;
  V << N.vectors, Np.vectors;
  r.P = E.adjoint();
  r.Q = V;
  r.A_block = L.vectors.adjoint() * (omega.adjoint() + gamma) * N.vectors;
  r.D_block = Lp.vectors.adjoint() * W * Np.vectors;

  CMatrix middle = CMatrix::Zero(dim, dim);
  if (d > 0) {
    try {
      middle.topLeftCorner(d, d) = 2.0 * numerics::inverse(r.A_block);
    } catch (const SingularMatrixError& e) {
      throw TheoryViolation(std::string("A block is singular, which the theory excludes: ") +
                            e.what());
    }
  }
  const CMatrix one = CMatrix::Identity(dim, dim);
  r.T1_plus = r.Q * middle * r.P;
  r.T1_minus = r.T1_plus.adjoint();
  r.R1_plus = one - gamma * r.T1_plus;
  r.R1_minus = one - omega * numerics::orthogonal_projector(L) * r.T1_minus;
  return r;
}

double range_residual(const CMatrix& T, const SubspaceBasis& S, double rank_tol) {
  return spec(numerics::orthogonal_projector(numerics::range_basis(T, rank_tol)) -
              numerics::orthogonal_projector(S));
}

double kernel_residual(const CMatrix& T, const SubspaceBasis& S, double rank_tol) {
  return spec(numerics::orthogonal_projector(numerics::kernel_basis(T, rank_tol)) -
              numerics::orthogonal_projector(S));
}

double BandEdgeCertificates::max_subspace_residual() const {
  return std::max({L_vs_range_complement, N_vs_range_complement, range_T_plus, ker_T_plus,
                   range_T_minus, ker_T_minus, range_one_minus_R_plus, ker_one_minus_R_plus,
                   range_one_minus_R_minus, ker_one_minus_R_minus});
}

BandEdgeReport band_edge_limits(const Potential& p, const SolverConfig& cfg) {
  return band_edge_limits(p, default_window(p, cfg.pad), cfg);
}

BandEdgeReport band_edge_limits(const Potential& p, Window w, const SolverConfig& cfg) {
  const ThresholdSolutions sol = solve_threshold(p, w, cfg.tol);
  const ThresholdWronskian tw = threshold_wronskian(sol, p, cfg.tol);
  const HalfBoundStates hb = half_bound_states(sol, tw, cfg.rank_tol);
  const GammaPaths gp = gamma_map(sol, p, hb.N);
  const OmegaMap om = omega_map(sol, p);
  const BandEdgeLimits lim = assemble_limits(tw.summed, gp.gamma, om.omega, hb.N, hb.L);

  BandEdgeReport r;
  r.window = w;
  r.W_minus_plus = tw.summed;
  r.dim_N = static_cast<int>(hb.N.count());
  r.N_basis = hb.N;
  r.L_basis = hb.L;
  r.N_perp = numerics::orthogonal_complement(hb.N);
  r.L_perp = numerics::orthogonal_complement(hb.L);
  r.Gamma = gp.gamma;
  r.Omega = om.omega;
  r.omega_shift = om.shift;
  r.gamma_quotient_site = gp.quotient_site;
  r.P = lim.P;
  r.Q = lim.Q;
  r.A_block = lim.A_block;
  r.D_block = lim.D_block;
  r.T1_plus = lim.T1_plus;
  r.T1_minus = lim.T1_minus;
  r.R1_plus = lim.R1_plus;
  r.R1_minus = lim.R1_minus;
  r.singular_values = hb.rank.singular_values;
  r.rank_threshold = hb.rank.threshold;

  BandEdgeCertificates& c = r.certificates;
  const double rt = cfg.rank_tol;
  const Eigen::Index L = p.dim();
  const CMatrix one = CMatrix::Identity(L, L);
  const SubspaceBasis range_wmp = numerics::range_basis(tw.summed, rt, tw.reference);
  const SubspaceBasis range_wpm = numerics::range_basis(tw.summed.adjoint(), rt, tw.reference);
  c.lemma_sum_discrepancy = tw.discrepancy;
  c.L_vs_range_complement = spec(numerics::orthogonal_projector(hb.L) - one +
                                 numerics::orthogonal_projector(range_wmp));
  c.N_vs_range_complement = spec(numerics::orthogonal_projector(hb.N) - one +
                                 numerics::orthogonal_projector(range_wpm));
  c.gamma_paths = gp.agreement;
  c.boundedness_ratio = hb.bounded_ratio;
  c.rank_ambiguous = hb.rank.ambiguous;
  c.growth_ok = r.N_perp.count() == 0 || hb.growth_slope >= hb.sigma_min_nonzero / 2.0;
  c.positivity_min = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < hb.N.count(); ++k) {
    const CVector xi = hb.N.vectors.col(k);
    const CVector gx = gp.gamma * xi;
    c.omega_gamma_on_N = std::max(c.omega_gamma_on_N, (om.omega * gx - xi).norm());
    c.gamma_into_L = std::max(
        c.gamma_into_L, (numerics::orthogonal_projector(r.L_perp) * gx).norm());
    const Complex val = gx.dot((om.omega.adjoint() + gp.gamma) * xi);
    c.positivity_defect =
        std::max(c.positivity_defect, std::abs(val - (xi.squaredNorm() + gx.squaredNorm())));
    c.positivity_min = std::min(c.positivity_min, val.real() / xi.squaredNorm());
  }
  if (hb.N.count() == 0) c.positivity_min = 0.0;
  c.range_T_plus = range_residual(r.T1_plus, hb.N, rt);
  c.ker_T_plus = kernel_residual(r.T1_plus, range_wmp, rt);
  c.range_T_minus = range_residual(r.T1_minus, hb.L, rt);
  c.ker_T_minus = kernel_residual(r.T1_minus, range_wpm, rt);
  c.range_one_minus_R_plus = range_residual(one - r.R1_plus, hb.L, rt);
  c.ker_one_minus_R_plus = kernel_residual(one - r.R1_plus, range_wmp, rt);
  c.range_one_minus_R_minus = range_residual(one - r.R1_minus, hb.N, rt);
  c.ker_one_minus_R_minus = kernel_residual(one - r.R1_minus, range_wpm, rt);
  return r;
}

namespace {

bool non_increasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[k - 1] + 1e-12) return false;
  }
  return true;
}

std::optional<double> loglog_slope(const std::vector<double>& eps, const std::vector<double>& dev) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (dev[k] > 1e-13) {
      x.push_back(std::log(eps[k]));
      y.push_back(std::log(dev[k]));
    }
  }
  if (x.size() < 2) return std::nullopt;
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / den;
}

}  // namespace

ConvergenceStudy convergence_study(const Potential& p, const BandEdgeReport& edge,
                                   ApproachPath path, const std::vector<double>& eps,
                                   const SolverConfig& cfg, unsigned workers) {
  for (std::size_t k = 0; k < eps.size(); ++k) {
    if (!(eps[k] > 0.0)) throw DomainError("convergence_study: eps must be positive");
    if (k > 0 && !(eps[k] < eps[k - 1])) {
      throw DomainError("convergence_study: eps must be strictly decreasing");
    }
  }
  ConvergenceStudy study;
  study.path = path;
  study.rows.resize(eps.size());
  parallel_for(eps.size(), workers, [&](std::size_t k) {
    ConvergenceRow& row = study.rows[k];
    row.eps = eps[k];
    row.z = path == ApproachPath::radial ? Complex(1.0 - eps[k], 0.0) : std::polar(1.0, eps[k]);
    try {
      const SpectralParameter z(row.z);
      if (path == ApproachPath::circular) {
        const ScatteringMatrix s = scattering_matrix(z, p, edge.window, cfg);
        row.T_plus = s.T_plus;
        row.T_minus = s.T_minus;
        row.R_plus = s.R_plus;
        row.R_minus = s.R_minus;
        row.dev_R_plus = spec(s.R_plus - edge.R1_plus);
        row.dev_R_minus = spec(s.R_minus - edge.R1_minus);
      } else {
        const ConnectionCoefficients c = connection_coefficients(z, p, edge.window, cfg);
        row.T_plus = numerics::inverse(c.M_plus);
        row.T_minus = numerics::inverse(c.M_minus);
      }
      row.dev_T_plus = spec(row.T_plus - edge.T1_plus);
      row.dev_T_minus = spec(row.T_minus - edge.T1_minus);
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
  });

  std::vector<double> e, tp, tm, rp, rm;
  for (const auto& row : study.rows) {
    if (!row.ok) continue;
    e.push_back(row.eps);
    tp.push_back(row.dev_T_plus);
    tm.push_back(row.dev_T_minus);
    if (row.dev_R_plus) {
      rp.push_back(*row.dev_R_plus);
      rm.push_back(*row.dev_R_minus);
    }
  }
  study.monotone_T_plus = non_increasing(tp);
  study.monotone_T_minus = non_increasing(tm);
  study.order_T_plus = loglog_slope(e, tp);
  if (path == ApproachPath::circular) {
    study.monotone_R_plus = non_increasing(rp);
    study.monotone_R_minus = non_increasing(rm);
    study.order_R_plus = loglog_slope(e, rp);
  }
  return study;
}

}  // namespace latscat
