#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lqcp/datamodel.hpp"
#include "lqcp/adaptive.hpp"
#include "lqcp/intervals.hpp"
#include "lqcp/nulldist.hpp"
#include "lqcp/sntest.hpp"

namespace lqcp {

struct SingleEstimate {
  std::size_t k_hat = 0;
  double tau_hat = 0.0;  // k_hat / n
  double value = 0.0;    // maximal ratio
};

/// argmax over k in [2q, n-2q] of U(k;1,n)^2 / W(k;1,n), smallest k on ties.
SingleEstimate single_cp_estimate(const DataMatrix& x, EvenOrder q);

/// How the adaptive recursion picks among orders at each node.
enum class LevelRule {
  Running,     // start at p0, accept any p_q strictly below the best seen so far
  Bonferroni,  // fixed per-order level 1 - (1 - p0)^{1/|I|}, keep the smallest p_q below it
};

/// Monte-Carlo p-value convention for a statistic against a wbs-max table.
enum class PValueOrientation {
  Upper,    // (1 + #{xi_r >= Q}) / (R + 1): small means significant
  Literal,  // #{Q > xi_r} / R, the fraction of replicates the statistic exceeds
};

struct WbsConfig {
  std::size_t M = 1000;
  std::size_t min_len = 0;    // 0 selects 4 q_max - 1
  std::size_t extra_len = 0;  // added on top of the default minimum
  double level = 0.95;        // threshold quantile for single-order detection
  std::size_t R = 200;        // calibration replicates
  std::uint64_t interval_seed = 1;
  std::uint64_t calibration_seed = 2;
  double p0 = 0.05;
  LevelRule rule = LevelRule::Running;
  PValueOrientation orientation = PValueOrientation::Upper;
  unsigned threads = 0;

  /// Minimum e - s for sampled intervals given the largest order in use.
  std::size_t resolved_min_len(int q_max) const;
};

struct BreakRecord {
  std::size_t location = 0;
  Interval interval;          // sampled interval that produced the break
  int q = 2;                  // order that located it
  double statistic = 0.0;     // Q(s, e) on that interval
  double p_value = 1.0;       // adaptive mode only; 1 otherwise
};

struct WbsResult {
  Segmentation breaks{1};
  std::vector<BreakRecord> per_break;  // detection order
  WbsConfig config;
  std::vector<int> orders;
  double threshold = 0.0;              // single-order mode
};

/// Precomputed Q(s_m, e_m) and split argmax for every sampled interval and order.
struct IntervalScores {
  std::vector<Interval> intervals;
  std::map<int, std::vector<IntervalStatistic>> by_q;
};

IntervalScores score_intervals(const DataMatrix& x, const QSet& orders, std::vector<Interval> intervals);

/// Algorithm with a fixed threshold: at node (S, E) stop when E - S < 4q - 1 or no
/// sampled interval lies inside; otherwise take the interval maximizing Q and,
/// when Q > xi, split at its U^2/W argmax and recurse on both sides.
WbsResult wbs_detect(const DataMatrix& x, EvenOrder q, const WbsConfig& cfg, double xi);

/// Adaptive variant over the orders in I, each calibrated by a wbs-max table.
/// Throws MissingCalibration when some q has no table, TableMismatch when a table
/// was simulated for a different n or M.
WbsResult wbs_adaptive(const DataMatrix& x, const QSet& orders, const WbsConfig& cfg,
                       const std::map<int, NullTable>& calibration);

/// NullSpec of the wbs-max table wbs_detect / wbs_adaptive expect for order q.
NullSpec wbs_null_spec(std::size_t n, std::size_t p, int q, int q_max, const WbsConfig& cfg);

/// Monte-Carlo p-value under the configured orientation.
double wbs_p_value(double stat, const NullTable& table, PValueOrientation orientation);

}  // namespace lqcp
