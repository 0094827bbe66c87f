#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

/// Per-coordinate cumulative power sums S_r[l][t] = sum_{u <= t} X_{u,l}^r for
/// r = 1..q, with S_r[l][0] = 0. Interval power sums are prefix differences.
class PrefixPowerSums {
 public:
  PrefixPowerSums(const DataMatrix& x, EvenOrder q);

  int q() const noexcept { return q_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }

  /// S_r[l][t]; r in 1..q, l in 1..p, t in 0..n.
  double cumulative(int r, std::size_t l, std::size_t t) const;
  /// sum_{t in iv} X_{t,l}^r.
  double interval_sum(int r, std::size_t l, Interval iv) const;

 private:
  std::size_t index(int r, std::size_t l, std::size_t t) const noexcept {
    return (static_cast<std::size_t>(r - 1) * p_ + (l - 1)) * (n_ + 1) + t;
  }

  int q_;
  std::size_t n_;
  std::size_t p_;
  std::vector<double> sums_;
};

/// Elementary symmetric polynomials e_0..e_c from power sums p_1..p_c via
/// Newton's identities: e_k = (1/k) sum_{r=1..k} (-1)^{r-1} e_{k-r} p_r.
/// `power_sums[r-1]` holds p_r; `out` receives e_0..e_{out.size()-1}.
void elementary_from_power_sums(std::span<const double> power_sums, std::span<double> out);

/// Sum over ordered c-tuples of pairwise-distinct indices in `iv` of the product
/// of coordinate-l values; equals c! e_c. Zero when c exceeds the interval
/// length. Throws OrderExceedsQ when c > pps.q().
double distinct_product_sum(const PrefixPowerSums& pps, Interval iv, int c, std::size_t l);

/// Two-sample U-statistic U_{n,q}(k; s, m): sum over coordinates and over all
/// ordered pairwise-distinct q-tuples i in [s, k] and j in [k+1, m] of
/// prod_t (X_{i_t,l} - X_{j_t,l}). Zero when either side has fewer than q points.
/// Evaluated through the distinct-product-sum expansion on column-centered data.
/// Throws InvalidSplit unless 1 <= s <= k < m <= n.
double u_stat(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m);

inline constexpr std::uint64_t kDefaultTupleBudget = 100'000'000;

/// Literal enumeration of the defining sum; the test oracle for u_stat.
/// Throws SizeGuard when p * P(L,q) * P(R,q) exceeds `tuple_budget`.
double u_stat_naive(const DataMatrix& x, EvenOrder q, std::size_t k, std::size_t s, std::size_t m,
                    std::uint64_t tuple_budget = kDefaultTupleBudget);

/// U(t; s, e) for t = s+q-1 .. e-q (length e-s-2q+2).
/// Throws IntervalTooShort when iv.length() < 2q.
std::vector<double> u_profile(const DataMatrix& x, EvenOrder q, Interval iv);

namespace detail {

/// Copy of rows [s, e] with each column centered on its mean; columns that are
/// exactly constant become exact zeros.
DataMatrix center_rows(const DataMatrix& x, Interval iv);

}  // namespace detail

}  // namespace lqcp
