#include "lqcp/ustat.hpp"

#include <cmath>
#include <string>

namespace lqcp {

PrefixPowerSums::PrefixPowerSums(const DataMatrix& x, EvenOrder q)
    : q_(q.value()), n_(x.n()), p_(x.p()), sums_(static_cast<std::size_t>(q_) * p_ * (n_ + 1), 0.0) {
  for (std::size_t l = 1; l <= p_; ++l) {
    for (std::size_t t = 1; t <= n_; ++t) {
      const double v = x(t - 1, l - 1);
      double power = 1.0;
      for (int r = 1; r <= q_; ++r) {
        power *= v;
        sums_[index(r, l, t)] = sums_[index(r, l, t - 1)] + power;
      }
    }
  }
}

double PrefixPowerSums::cumulative(int r, std::size_t l, std::size_t t) const {
  if (r < 1 || r > q_) throw Error(ErrorCode::OrderExceedsQ, "power " + std::to_string(r));
  if (l < 1 || l > p_ || t > n_) throw Error(ErrorCode::InvalidInterval, "index out of range");
  return sums_[index(r, l, t)];
}

double PrefixPowerSums::interval_sum(int r, std::size_t l, Interval iv) const {
  make_interval(iv.s, iv.e, n_);
  return cumulative(r, l, iv.e) - cumulative(r, l, iv.s - 1);
}

void elementary_from_power_sums(std::span<const double> power_sums, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    double acc = 0.0;
    for (std::size_t r = 1; r <= k; ++r) {
      const double term = out[k - r] * power_sums[r - 1];
      acc += (r % 2 == 1) ? term : -term;
    }
    out[k] = acc / static_cast<double>(k);
  }
}

namespace {

// c! e_c for c = 0..q over the interval, coordinate l.
void distinct_sums_all(const PrefixPowerSums& pps, Interval iv, std::size_t l, std::span<double> out,
                       std::span<double> scratch) {
  const int q = pps.q();
  for (int r = 1; r <= q; ++r) scratch[r - 1] = pps.interval_sum(r, l, iv);
  elementary_from_power_sums(scratch.first(q), out.first(q + 1));
  double fact = 1.0;
  for (int c = 0; c <= q; ++c) {
    if (c > 0) fact *= c;
    out[c] = static_cast<std::size_t>(c) > iv.length() ? 0.0 : out[c] * fact;
  }
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

// U on an interval-local matrix (rows are the interval), split after `left` rows.
double u_from_pps(const PrefixPowerSums& pps, std::size_t left) {
  const int q = pps.q();
  const std::size_t len = pps.n();
  const auto L = static_cast<long long>(left);
  const auto R = static_cast<long long>(len - left);
  if (L < q || R < q) return 0.0;
  std::vector<double> coef(q + 1);
  for (int c = 0; c <= q; ++c) {
    const double sign = ((q - c) % 2 == 0) ? 1.0 : -1.0;
    coef[c] = sign * binomial(q, c) * falling_factorial(L - c, q - c) * falling_factorial(R - q + c, c);
  }
  const Interval lhs{1, left};
  const Interval rhs{left + 1, len};
  std::vector<double> dl(q + 1), dr(q + 1), scratch(q);
  double total = 0.0;
  for (std::size_t l = 1; l <= pps.p(); ++l) {
    distinct_sums_all(pps, lhs, l, dl, scratch);
    distinct_sums_all(pps, rhs, l, dr, scratch);
    for (int c = 0; c <= q; ++c) total += coef[c] * dl[c] * dr[q - c];
  }
  return total;
}

void check_split(const DataMatrix& x, std::size_t k, std::size_t s, std::size_t m) {
  if (s < 1 || m > x.n() || k < s || k >= m) {
    throw Error(ErrorCode::InvalidSplit, "need 1 <= s <= k < m <= n, got (k, s, m) = (" + std::to_string(k) +
                                             ", " + std::to_string(s) + ", " + std::to_string(m) + ")");
  }
}

}  // namespace

double distinct_product_sum(const PrefixPowerSums& pps, Interval iv, int c, std::size_t l) {
  if (c < 0) throw Error(ErrorCode::OutOfRange, "negative order");
  if (c > pps.q()) {
    throw Error(ErrorCode::OrderExceedsQ, "order " + std::to_string(c) + " > q = " + std::to_string(pps.q()));
  }
  make_interval(iv.s, iv.e, pps.n());
  if (l < 1 || l > pps.p()) throw Error(ErrorCode::OutOfRange, "coordinate " + std::to_string(l));
  std::vector<double> out(pps.q() + 1), scratch(pps.q());
  distinct_sums_all(pps, iv, l, out, scratch);
  return out[c];
}

namespace detail {

DataMatrix center_rows(const DataMatrix& x, Interval iv) {
  const std::size_t len = iv.length();
  const std::size_t p = x.p();
  std::vector<double> out(len * p);
  for (std::size_t l = 0; l < p; ++l) {
    const double first = x(iv.s - 1, l);
    bool constant = true;
    double mean = 0.0;
    for (std::size_t t = iv.s - 1; t < iv.e; ++t) {
      mean += x(t, l);
      constant = constant && x(t, l) == first;
    }
    mean /= static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) {
      out[i * p + l] = constant ? 0.0 : x(iv.s - 1 + i, l) - mean;
    }
  }
  return DataMatrix(len, p, std::move(out));
}

}  // namespace detail

double u_stat(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m) {
  check_split(x, k, s, m);
  const int qv = q.value();
  if (k - s + 1 < static_cast<std::size_t>(qv) || m - k < static_cast<std::size_t>(qv)) return 0.0;
  const DataMatrix local = detail::center_rows(x, Interval{s, m});
  const PrefixPowerSums pps(local, q);
  return u_from_pps(pps, k - s + 1);
}

namespace {

void enumerate_tuples(std::size_t lo, std::size_t hi, int q, std::vector<std::size_t>& current,
                      std::vector<bool>& used, std::vector<std::vector<std::size_t>>& out) {
  if (static_cast<int>(current.size()) == q) {
    out.push_back(current);
    return;
  }
  for (std::size_t i = lo; i <= hi; ++i) {
    if (used[i - lo]) continue;
    used[i - lo] = true;
    current.push_back(i);
    enumerate_tuples(lo, hi, q, current, used, out);
    current.pop_back();
    used[i - lo] = false;
  }
}

std::vector<std::vector<std::size_t>> ordered_distinct_tuples(std::size_t lo, std::size_t hi, int q) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  std::vector<bool> used(hi - lo + 1, false);
  enumerate_tuples(lo, hi, q, current, used, out);
  return out;
}

}  // namespace

double u_stat_naive(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m,
                    std::uint64_t tuple_budget) {
  check_split(x, k, s, m);
  const int qv = q.value();
  const auto L = static_cast<long long>(k - s + 1);
  const auto R = static_cast<long long>(m - k);
  if (L < qv || R < qv) return 0.0;
  const double work = static_cast<double>(x.p()) * falling_factorial(L, qv) * falling_factorial(R, qv);
  if (work > static_cast<double>(tuple_budget)) {
    throw Error(ErrorCode::SizeGuard, "naive enumeration needs " + std::to_string(work) + " tuples");
  }
  const auto left = ordered_distinct_tuples(s, k, qv);
  const auto right = ordered_distinct_tuples(k + 1, m, qv);
  double total = 0.0;
  for (std::size_t l = 0; l < x.p(); ++l) {
    for (const auto& i : left) {
      for (const auto& j : right) {
        double prod = 1.0;
        for (int t = 0; t < qv; ++t) prod *= x(i[t] - 1, l) - x(j[t] - 1, l);
        total += prod;
      }
    }
  }
  return total;
}

std::vector<double> u_profile(const DataMatrix& x, EvenOrder q, Interval iv) {
  make_interval(iv.s, iv.e, x.n());
  const auto qv = static_cast<std::size_t>(q.value());
  if (iv.length() < 2 * qv) {
    throw Error(ErrorCode::IntervalTooShort, "profile needs at least 2q = " + std::to_string(2 * qv) + " points");
  }
  const DataMatrix local = detail::center_rows(x, iv);
  const PrefixPowerSums pps(local, q);
  std::vector<double> out;
  out.reserve(iv.length() - 2 * qv + 1);
  for (std::size_t left = qv; left + qv <= iv.length(); ++left) out.push_back(u_from_pps(pps, left));
  return out;
}

}  // namespace lqcp
