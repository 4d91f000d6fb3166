#pragma once

#include <algorithm>
#include <string>

namespace latscat {

/// Closed integer interval [lo, hi] of lattice sites.
struct Window {
  int lo = 0;
  int hi = -1;

  bool empty() const { return hi < lo; }
  int size() const { return empty() ? 0 : hi - lo + 1; }
  bool contains(int n) const { return lo <= n && n <= hi; }
  bool contains(const Window& w) const { return w.empty() || (lo <= w.lo && w.hi <= hi); }
  Window padded(int pad) const { return Window{lo - pad, hi + pad}; }
  Window hull(const Window& w) const {
    if (empty()) return w;
    if (w.empty()) return *this;
    return Window{std::min(lo, w.lo), std::max(hi, w.hi)};
  }

  std::string str() const { return "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]"; }
  friend bool operator==(const Window&, const Window&) = default;
};

}  // namespace latscat
