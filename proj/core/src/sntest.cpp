#include "lqcp/sntest.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lqcp/ustat.hpp"

namespace lqcp {

DataMatrix preprocess(const DataMatrix& x, Preprocessing& prep) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  std::vector<double> out(x.values().begin(), x.values().end());
  prep.column_means.assign(p, 0.0);
  prep.pooled_scale = 1.0;
  if (prep.center) {
    for (std::size_t l = 0; l < p; ++l) {
      const double first = x(0, l);
      bool constant = true;
      double mean = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        mean += x(t, l);
        constant = constant && x(t, l) == first;
      }
      mean /= static_cast<double>(n);
      prep.column_means[l] = constant ? first : mean;
      for (std::size_t t = 0; t < n; ++t) out[t * p + l] = constant ? 0.0 : x(t, l) - mean;
    }
  }
  if (prep.scale) {
    double ss = 0.0;
    for (double v : out) ss += v * v;
    const double scale = std::sqrt(ss / static_cast<double>(n * p));
    if (!(scale > 0.0)) {
      throw Error(ErrorCode::DegenerateNormalizer, "data are constant; no change-point information");
    }
    prep.pooled_scale = scale;
    for (double& v : out) v /= scale;
  }
  return DataMatrix(n, p, std::move(out));
}

double self_normalizer(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m) {
  const auto qv = static_cast<std::size_t>(q.value());
  if (s < 1 || m > x.n() || s > m || k < s + 2 * qv - 1 || k + 2 * qv > m) {
    throw Error(ErrorCode::InvalidSplit, "need s+2q-1 <= k <= m-2q, got (k, s, m) = (" + std::to_string(k) + ", " +
                                             std::to_string(s) + ", " + std::to_string(m) + ")");
  }
  double total = 0.0;
  for (double u : u_profile(x, q, Interval{s, k})) total += u * u;
  for (double u : u_profile(x, q, Interval{k + 1, m})) total += u * u;
  if (total == 0.0) throw Error(ErrorCode::DegenerateNormalizer, "W vanishes at k = " + std::to_string(k));
  return total / static_cast<double>(m - s + 1);
}

SnProfile assemble_profile(const SweepResult& sweep, Interval iv) {
  const auto q = static_cast<std::size_t>(sweep.q());
  if (iv.length() < 4 * q) {
    throw Error(ErrorCode::IntervalTooShort, "interval of length " + std::to_string(iv.length()) +
                                                 " is shorter than 4q = " + std::to_string(4 * q));
  }
  const auto us = sweep.profile(iv);
  SnProfile out;
  out.q = sweep.q();
  out.interval = iv;
  const std::size_t first = iv.s + 2 * q - 1;
  const std::size_t last = iv.e - 2 * q;
  const double len = static_cast<double>(iv.length());
  bool any = false;
  for (std::size_t b = first; b <= last; ++b) {
    const double u = us[b - first];
    const double w = (sweep.sq(iv.s, b) + sweep.sq(b + 1, iv.e)) / len;
    const double r = w > 0.0 ? u * u / w : 0.0;
    out.splits.push_back(b);
    out.u.push_back(u);
    out.w.push_back(w);
    out.ratio.push_back(r);
    if (w > 0.0 && (!any || r > out.value)) {
      out.value = r;
      out.argmax = b;
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::DegenerateNormalizer, "every candidate split has W = 0");
  return out;
}

SnProfile sn_statistic(const DataMatrix& x, EvenOrder q, Interval iv, Preprocessing prep) {
  make_interval(iv.s, iv.e, x.n());
  const auto qv = static_cast<std::size_t>(q.value());
  if (iv.length() < 4 * qv) {
    throw Error(ErrorCode::IntervalTooShort, "interval of length " + std::to_string(iv.length()) +
                                                 " is shorter than 4q = " + std::to_string(4 * qv));
  }
  const DataMatrix local = preprocess(x.slice_rows(iv.s, iv.e), prep);
  const std::size_t len = iv.length();
  SweepRequest req;
  req.window = Interval{1, len};
  req.rows = {1};
  req.cols = {len};
  req.profiles = {Interval{1, len}};
  const SweepResult res = sweep(local, q.value(), req);
  SnProfile out = assemble_profile(res, Interval{1, len});
  const std::size_t shift = iv.s - 1;
  for (auto& k : out.splits) k += shift;
  out.argmax += shift;
  out.interval = iv;
  return out;
}

SnProfile sn_statistic(const DataMatrix& x, EvenOrder q, Preprocessing prep) {
  return sn_statistic(x, q, Interval{1, x.n()}, std::move(prep));
}

std::size_t default_scan_stride(std::size_t n) noexcept { return std::max<std::size_t>(1, n / 100); }

namespace {

std::vector<std::size_t> grid(std::size_t lo, std::size_t hi, std::size_t stride) {
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; v += stride) out.push_back(v);
  if (out.empty() || out.back() != hi) out.push_back(hi);
  return out;
}

}  // namespace

double scan_statistic(const DataMatrix& x, EvenOrder q, std::size_t stride, Preprocessing prep) {
  const std::size_t n = x.n();
  const auto qv = static_cast<std::size_t>(q.value());
  if (n < 4 * qv) {
    throw Error(ErrorCode::IntervalTooShort, "scan statistic needs n >= 4q = " + std::to_string(4 * qv));
  }
  if (stride == 0) stride = default_scan_stride(n);
  const DataMatrix local = preprocess(x, prep);
  const auto right_ends = grid(4 * qv, n, stride);       // l2 for Q(1, l2)
  const auto left_starts = grid(1, n - 4 * qv + 1, stride);  // m1 for Q(m1, n)

  SweepRequest req;
  req.window = Interval{1, n};
  req.rows = left_starts;
  req.rows.push_back(1);
  req.cols = right_ends;
  req.cols.push_back(n);
  for (std::size_t l2 : right_ends) req.profiles.push_back(Interval{1, l2});
  for (std::size_t m1 : left_starts) req.profiles.push_back(Interval{m1, n});
  const SweepResult res = sweep(local, q.value(), req);

  auto best = [&](auto&& make_iv, const std::vector<std::size_t>& endpoints) {
    double out = 0.0;
    bool any = false;
    for (std::size_t v : endpoints) {
      try {
        const SnProfile prof = assemble_profile(res, make_iv(v));
        out = any ? std::max(out, prof.value) : prof.value;
        any = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateNormalizer) throw;
      }
    }
    if (!any) throw Error(ErrorCode::DegenerateNormalizer, "every scanned interval is degenerate");
    return out;
  };
  const double forward = best([](std::size_t l2) { return Interval{1, l2}; }, right_ends);
  const double backward = best([n](std::size_t m1) { return Interval{m1, n}; }, left_starts);
  return forward + backward;
}

std::vector<IntervalStatistic> interval_statistics(const DataMatrix& prepared, EvenOrder q,
                                                   std::span<const Interval> intervals) {
  const std::size_t n = prepared.n();
  const auto qv = static_cast<std::size_t>(q.value());
  std::vector<IntervalStatistic> out(intervals.size());
  SweepRequest req;
  req.window = Interval{1, n};
  std::set<std::size_t> starts, ends;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    out[i].interval = intervals[i];
    make_interval(intervals[i].s, intervals[i].e, n);
    if (intervals[i].length() < 4 * qv) continue;
    req.profiles.push_back(intervals[i]);
    starts.insert(intervals[i].s);
    ends.insert(intervals[i].e);
  }
  if (req.profiles.empty()) return out;
  // One full product per split beats two partial ones once most endpoints are in play.
  if (starts.size() + ends.size() > n / 2) {
    req.all_rows = true;
  } else {
    req.rows.assign(starts.begin(), starts.end());
    req.cols.assign(ends.begin(), ends.end());
  }
  const SweepResult res = sweep(prepared, q.value(), req);
  for (auto& stat : out) {
    if (stat.interval.length() < 4 * qv) continue;
    try {
      const SnProfile prof = assemble_profile(res, stat.interval);
      stat.value = prof.value;
      stat.argmax = prof.argmax;
      stat.valid = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateNormalizer) throw;
    }
  }
  return out;
}

}  // namespace lqcp
