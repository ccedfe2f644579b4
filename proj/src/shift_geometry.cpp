#include "qcmod/shift_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qcmod/operator_core.hpp"

namespace qcmod {

namespace {

constexpr int kMargin = 2;

}  // namespace

int ShiftCondenserSpec::a() const {
  return std::min(*std::min_element(M.begin(), M.end()), *std::min_element(N.begin(), N.end()));
}

int ShiftCondenserSpec::b() const {
  return std::max(*std::max_element(M.begin(), M.end()), *std::max_element(N.begin(), N.end()));
}

int minimum_window(const ShiftCondenserSpec& spec) { return spec.b() - spec.a() + 1 + 2 * kMargin; }

void ShiftCondenserSpec::validate() const {
  if (M.empty() || N.empty()) throw ValidationError("shift spec: M and N must be nonempty");
  std::set<int> m(M.begin(), M.end());
  if (m.size() != M.size()) throw ValidationError("shift spec: M has repeated points");
  std::set<int> n(N.begin(), N.end());
  if (n.size() != N.size()) throw ValidationError("shift spec: N has repeated points");
  for (int k : N)
    if (m.count(k)) throw ValidationError("shift spec: M and N must be disjoint");
  if (!(p >= 1.0) || std::isinf(p)) throw ValidationError("shift spec: need finite p >= 1");
  if (window < minimum_window(*this))
    throw ValidationError("shift spec: window " + std::to_string(window) + " too small (need >= " +
                          std::to_string(minimum_window(*this)) + ")");
}

int ShiftCondenserSpec::index(int k) const { return ((k - a()) % window + window) % window; }

int ShiftCondenserSpec::pin_index() const {
  const double mid = 0.5 * (b() - a());
  return static_cast<int>(std::floor(mid + 0.5 * window)) % window;
}

IntervalDecomposition decompose(const std::vector<int>& M, const std::vector<int>& N) {
  if (M.empty() || N.empty()) throw ValidationError("decompose: M and N must be nonempty");
  std::vector<std::pair<int, bool>> pts;  // (point, in M)
  for (int k : M) pts.emplace_back(k, true);
  for (int k : N) pts.emplace_back(k, false);
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].first == pts[i - 1].first) throw ValidationError("decompose: M and N must be disjoint");

  IntervalDecomposition d;
  d.a = pts.front().first;
  d.b = pts.back().first;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].second == pts[i - 1].second) continue;
    d.intervals.push_back({pts[i - 1].first, pts[i].first, pts[i - 1].second ? -1 : +1});
  }
  d.boundary_hits = (pts.front().second ? 1 : 0) + (pts.back().second ? 1 : 0);
  return d;
}

}  // namespace qcmod
