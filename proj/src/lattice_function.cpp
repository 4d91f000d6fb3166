#include "latscat/lattice_function.hpp"

#include <algorithm>

#include "latscat/errors.hpp"
#include "latscat/potential.hpp"

namespace latscat {

std::string role_name(Role r) {
  switch (r) {
    case Role::jost_plus: return "jost_plus";
    case Role::jost_minus: return "jost_minus";
    case Role::v_plus: return "v_plus";
    case Role::v_minus: return "v_minus";
    case Role::prescribed: return "prescribed";
    case Role::free: return "free";
  }
  return "unknown";
}

LatticeMatrixFunction::LatticeMatrixFunction(Eigen::Index L, Window w, Role role, Complex z,
                                             Complex energy)
    : L_(L), window_(w), role_(role), z_(z), energy_(energy) {
  if (L < 1) throw DimensionError("lattice function dimension must be positive");
  if (w.empty()) throw WindowError("lattice function window is empty");
  data_.assign(static_cast<std::size_t>(L * L) * static_cast<std::size_t>(w.size()), Complex(0.0));
}

std::size_t LatticeMatrixFunction::offset(int n) const {
  if (!window_.contains(n)) {
    throw WindowError("site " + std::to_string(n) + " outside window " + window_.str());
  }
  return static_cast<std::size_t>(n - window_.lo) * static_cast<std::size_t>(L_ * L_);
}

CMatrix LatticeMatrixFunction::operator()(int n) const { return at(n); }

LatticeMatrixFunction::Map LatticeMatrixFunction::at(int n) {
  return Map(data_.data() + offset(n), L_, L_);
}

LatticeMatrixFunction::ConstMap LatticeMatrixFunction::at(int n) const {
  return ConstMap(data_.data() + offset(n), L_, L_);
}

void LatticeMatrixFunction::set(int n, const CMatrix& value) {
  if (value.rows() != L_ || value.cols() != L_) {
    throw DimensionError("lattice function value has the wrong shape");
  }
  at(n) = value;
}

LatticeMatrixFunction LatticeMatrixFunction::times(const CMatrix& c) const {
  if (c.rows() != L_) throw DimensionError("right factor has the wrong number of rows");
  if (c.cols() != L_) throw DimensionError("right factor must be square");
  LatticeMatrixFunction out(L_, window_, role_, z_, energy_);
  for (int n = window_.lo; n <= window_.hi; ++n) out.at(n) = at(n) * c;
  return out;
}

double schrodinger_residual(const LatticeMatrixFunction& u, const Potential& p) {
  const Window w = u.window();
  const Complex E = u.energy();
  double worst = 0.0;
  for (int n = w.lo + 1; n <= w.hi - 1; ++n) {
    const CMatrix un = u(n);
    const CMatrix v = p.at(n);
    const CMatrix r = u.at(n - 1) + v * un + u.at(n + 1) - E * un;
    const double scale = u.at(n - 1).norm() + (std::abs(E) + v.norm()) * un.norm() +
                         u.at(n + 1).norm();
    worst = std::max(worst, r.norm() / std::max(1.0, scale));
  }
  return worst;
}

Window overlap(const LatticeMatrixFunction& a, const LatticeMatrixFunction& b, int min_size) {
  const Window w{std::max(a.window().lo, b.window().lo), std::min(a.window().hi, b.window().hi)};
  if (w.size() < min_size) {
    throw WindowError("windows " + a.window().str() + " and " + b.window().str() +
                      " overlap in fewer than " + std::to_string(min_size) + " sites");
  }
  return w;
}

}  // namespace latscat
