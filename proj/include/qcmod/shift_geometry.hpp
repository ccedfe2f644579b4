// Shift condensers: two disjoint finite sets M, N of integers placed on a
// cyclic window, and the decomposition of [min(M u N), max(M u N)] into the
// maximal gaps whose endpoints lie in different sets.

#pragma once

#include <optional>
#include <vector>

namespace qcmod {

struct ShiftCondenserSpec {
  std::vector<int> M;
  std::vector<int> N;
  double p = 2.0;
  int window = 0;  // cycle size
  bool pin = true;

  /// Throws ValidationError for overlapping/empty sets or a too small window.
  void validate() const;

  int a() const;  // min(M u N)
  int b() const;  // max(M u N)

  /// Cycle index of the integer k; a maps to 0.
  int index(int k) const;
  /// Cycle index of the pinning point, antipodal to the midpoint of [a, b].
  int pin_index() const;
};

struct ShiftInterval {
  int a;
  int b;
  int sign;  // -1 when a in M and b in N, +1 when a in N and b in M
  int length() const { return b - a; }
};

struct IntervalDecomposition {
  int a = 0;
  int b = 0;
  std::vector<ShiftInterval> intervals;
  int boundary_hits = 0;  // #({a, b} n M)
  int m() const { return static_cast<int>(intervals.size()); }
};

IntervalDecomposition decompose(const std::vector<int>& M, const std::vector<int>& N);

/// Smallest window with the required margin of two sites on each side.
int minimum_window(const ShiftCondenserSpec& spec);

}  // namespace qcmod
