#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lqcp/datamodel.hpp"
#include "lqcp/split_sweep.hpp"

namespace lqcp {

/// Affine transform applied before forming U and W. The self-normalized ratio
/// is invariant to it, so it only conditions the arithmetic.
struct Preprocessing {
  bool center = true;
  bool scale = true;

  // Filled in by preprocess().
  std::vector<double> column_means;
  double pooled_scale = 1.0;
};

/// Subtracts column means (exactly-constant columns become exact zeros) and
/// divides by the pooled root-mean-square of the centered values. Throws
/// DegenerateNormalizer when scaling is requested and every value is zero.
DataMatrix preprocess(const DataMatrix& x, Preprocessing& prep);

/// Per-split self-normalized ratios over one interval.
struct SnProfile {
  int q = 2;
  Interval interval;
  std::vector<std::size_t> splits;  // s+2q-1 .. e-2q
  std::vector<double> u;            // U(k; s, e)
  std::vector<double> w;            // W(k; s, e)
  std::vector<double> ratio;        // u^2 / w, 0 where w == 0
  std::size_t argmax = 0;           // split k attaining `value`, smallest on ties
  double value = 0.0;
};

/// W(k; s, m) = (m-s+1)^{-1} [sum_{t=s+q-1}^{k-q} U(t;s,k)^2 + sum_{t=k+q}^{m-q} U(t;k+1,m)^2].
/// Throws InvalidSplit unless s+2q-1 <= k <= m-2q; DegenerateNormalizer when W == 0.
double self_normalizer(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m);

/// max_k U(k;s,e)^2 / W(k;s,e) over k in [s+2q-1, e-2q], computed only from rows in `iv`.
/// Throws IntervalTooShort when iv.length() < 4q, DegenerateNormalizer when no split has W > 0.
SnProfile sn_statistic(const DataMatrix& x, EvenOrder q, Interval iv, Preprocessing prep = {});

/// Whole-series convenience overload.
SnProfile sn_statistic(const DataMatrix& x, EvenOrder q, Preprocessing prep = {});

/// max_{l2} Q(1, l2) + max_{m1} Q(m1, n) with the endpoint grids subsampled by
/// `stride` (both grid ends always included; stride 1 is exact).
/// stride == 0 selects default_scan_stride(n). Throws IntervalTooShort when n < 4q.
double scan_statistic(const DataMatrix& x, EvenOrder q, std::size_t stride = 0, Preprocessing prep = {});

std::size_t default_scan_stride(std::size_t n) noexcept;

/// Builds the SnProfile of `iv` from a sweep that produced its profile and the
/// SQ entries it needs (row iv.s or columns, column iv.e or rows).
SnProfile assemble_profile(const SweepResult& sweep, Interval iv);

/// Q(s, e) and its maximizing split for many intervals of one (already
/// preprocessed) matrix, sharing a single sweep. Intervals shorter than 4q or
/// with no positive normalizer are reported with valid == false.
struct IntervalStatistic {
  Interval interval;
  double value = 0.0;
  std::size_t argmax = 0;
  bool valid = false;
};
std::vector<IntervalStatistic> interval_statistics(const DataMatrix& prepared, EvenOrder q,
                                                   std::span<const Interval> intervals);

}  // namespace lqcp
