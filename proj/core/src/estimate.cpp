#include "lqcp/estimate.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace lqcp {

SingleEstimate single_cp_estimate(const DataMatrix& x, EvenOrder q) {
  const SnProfile prof = sn_statistic(x, q);
  return SingleEstimate{prof.argmax, static_cast<double>(prof.argmax) / static_cast<double>(x.n()), prof.value};
}

std::size_t WbsConfig::resolved_min_len(int q_max) const {
  const std::size_t base = min_len > 0 ? min_len : 4 * static_cast<std::size_t>(q_max) - 1;
  return base + extra_len;
}

IntervalScores score_intervals(const DataMatrix& x, const QSet& orders, std::vector<Interval> intervals) {
  Preprocessing prep;
  const DataMatrix z = preprocess(x, prep);
  IntervalScores out;
  out.intervals = std::move(intervals);
  for (const EvenOrder& q : orders) out.by_q[q.value()] = interval_statistics(z, q, out.intervals);
  return out;
}

namespace {

// Index of the interval inside [S, E] with the largest valid Q; smallest index on ties.
std::optional<std::size_t> best_inside(const std::vector<IntervalStatistic>& stats, std::size_t S, std::size_t E) {
  std::optional<std::size_t> best;
  for (std::size_t m = 0; m < stats.size(); ++m) {
    const auto& st = stats[m];
    if (!st.valid || st.interval.s < S || st.interval.e > E) continue;
    if (!best || st.value > stats[*best].value) best = m;
  }
  return best;
}

void finish(WbsResult& res, std::size_t n) {
  std::vector<std::size_t> locs;
  for (const auto& b : res.per_break) locs.push_back(b.location);
  res.breaks = Segmentation(n, std::move(locs));
}

}  // namespace

WbsResult wbs_detect(const DataMatrix& x, EvenOrder q, const WbsConfig& cfg, double xi) {
  const std::size_t n = x.n();
  const auto qv = static_cast<std::size_t>(q.value());
  WbsResult res;
  res.config = cfg;
  res.orders = {q.value()};
  res.threshold = xi;
  res.breaks = Segmentation(n);
  const std::size_t min_len = cfg.resolved_min_len(q.value());
  if (n <= min_len) return res;
  const IntervalScores scores = score_intervals(x, QSet{q.value()}, draw_intervals(n, cfg.M, min_len, cfg.interval_seed));
  const auto& stats = scores.by_q.at(q.value());

  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t S, std::size_t E) {
    if (E - S + 1 < 4 * qv) return;
    const auto best = best_inside(stats, S, E);
    if (!best) return;
    const auto& st = stats[*best];
    if (!(st.value > xi)) return;
    res.per_break.push_back(BreakRecord{st.argmax, st.interval, q.value(), st.value, 1.0});
    recurse(S, st.argmax);
    recurse(st.argmax + 1, E);
  };
  recurse(1, n);
  finish(res, n);
  return res;
}

NullSpec wbs_null_spec(std::size_t n, std::size_t p, int q, int q_max, const WbsConfig& cfg) {
  NullSpec spec;
  spec.kind = NullKind::WbsMax;
  spec.q = q;
  spec.n_sim = n;
  spec.p_sim = calibration_dim(p);
  spec.reps = cfg.R;
  spec.seed = cfg.calibration_seed;
  spec.M = cfg.M;
  spec.intervals_seed = cfg.interval_seed;
  spec.min_len = cfg.resolved_min_len(q_max);
  return resolve(spec);
}

double wbs_p_value(double stat, const NullTable& table, PValueOrientation orientation) {
  if (orientation == PValueOrientation::Upper) return p_value(stat, table);
  if (table.draws.empty()) throw Error(ErrorCode::EmptyTable, "null table has no draws");
  const auto below = std::lower_bound(table.draws.begin(), table.draws.end(), stat) - table.draws.begin();
  return static_cast<double>(below) / static_cast<double>(table.draws.size());
}

WbsResult wbs_adaptive(const DataMatrix& x, const QSet& orders, const WbsConfig& cfg,
                       const std::map<int, NullTable>& calibration) {
  const std::size_t n = x.n();
  const int q_max = orders.max().value();
  for (const EvenOrder& q : orders) {
    const auto it = calibration.find(q.value());
    if (it == calibration.end()) {
      throw Error(ErrorCode::MissingCalibration, "no wbs-max table for q = " + std::to_string(q.value()));
    }
    const NullSpec& s = it->second.spec;
    if (s.kind != NullKind::WbsMax || s.q != q.value() || s.n_sim != n || s.M != cfg.M) {
      throw Error(ErrorCode::TableMismatch,
                  "calibration for q = " + std::to_string(q.value()) + " was not simulated for this n and M");
    }
  }
  WbsResult res;
  res.config = cfg;
  res.orders = orders.values();
  res.breaks = Segmentation(n);
  const std::size_t min_len = cfg.resolved_min_len(q_max);
  if (n <= min_len) return res;
  const IntervalScores scores = score_intervals(x, orders, draw_intervals(n, cfg.M, min_len, cfg.interval_seed));
  const double start_level =
      cfg.rule == LevelRule::Running ? cfg.p0 : per_order_level(cfg.p0, orders.size());
  const auto guard = 4 * static_cast<std::size_t>(q_max);

  std::function<void(std::size_t, std::size_t)> recurse = [&](std::size_t S, std::size_t E) {
    if (E - S + 1 < guard) return;
    double level = start_level;
    std::optional<BreakRecord> chosen;
    for (const EvenOrder& q : orders) {
      const auto& stats = scores.by_q.at(q.value());
      const auto best = best_inside(stats, S, E);
      if (!best) continue;
      const auto& st = stats[*best];
      const double pv = wbs_p_value(st.value, calibration.at(q.value()), cfg.orientation);
      if (pv < level) {
        level = pv;
        chosen = BreakRecord{st.argmax, st.interval, q.value(), st.value, pv};
      }
    }
    if (!chosen) return;
    res.per_break.push_back(*chosen);
    recurse(S, chosen->location);
    recurse(chosen->location + 1, E);
  };
  recurse(1, n);
  finish(res, n);
  return res;
}

}  // namespace lqcp
