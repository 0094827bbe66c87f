#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

/// Which U-statistic quantities a sweep over split points should produce.
///
/// All indices are 1-based and must lie inside `window`; nothing outside the
/// window is read. A "row" a asks for SQ(a, b) for every b in the window, a
/// "column" b for SQ(a, b) for every a, and a profile (s, e) for U(t; s, e) at
/// every t in the trimmed range [s+2q-1, e-2q].
struct SweepRequest {
  Interval window;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<Interval> profiles;
  bool all_rows = false;
};

/// Squared-profile sums SQ(a, b) = sum_{t=a+q-1}^{b-q} U(t; a, b)^2 and split
/// profiles, produced by one pass over split points t.
///
/// For each t the elementary symmetric sums of every left block [a, t] and every
/// right block [t+1, b] are built with the O(q) recurrence
/// e_c <- e_c + x e_{c-1}; all U(t; a, b) then follow from one matrix product
/// of the coefficient-weighted left and right blocks.
class SweepResult {
 public:
  int q() const noexcept { return q_; }
  const Interval& window() const noexcept { return window_; }

  /// SQ(a, b); requires that row a or column b was requested. Zero when b - a + 1 < 2q.
  double sq(std::size_t a, std::size_t b) const;
  bool has_sq(std::size_t a, std::size_t b) const;

  /// U(t; s, e) for t = s+2q-1 .. e-2q; requires the interval was requested.
  std::span<const double> profile(Interval iv) const;

 private:
  friend SweepResult sweep(const DataMatrix& x, int q, const SweepRequest& request);

  struct IntervalHash {
    std::size_t operator()(const Interval& iv) const noexcept { return iv.s * 1000003u ^ iv.e; }
  };

  int q_ = 2;
  Interval window_{};
  std::vector<std::vector<double>> row_sq_;  // by a - S, indexed by b - S
  std::vector<std::vector<double>> col_sq_;  // by b - S, indexed by a - S
  std::unordered_map<Interval, std::vector<double>, IntervalHash> profiles_;
};

SweepResult sweep(const DataMatrix& x, int q, const SweepRequest& request);

}  // namespace lqcp
