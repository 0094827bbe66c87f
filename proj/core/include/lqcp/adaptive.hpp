#pragma once

#include <map>

#include "lqcp/datamodel.hpp"

namespace lqcp {

struct CombinedPValue {
  double p_ada = 1.0;       // min_q p_q
  double p_adjusted = 1.0;  // 1 - (1 - p_ada)^|I|
};

/// Throws MissingPValue when some q in I has no entry, OutOfRange when a p-value is outside (0, 1].
CombinedPValue combine_p_values(const QSet& orders, const std::map<int, double>& p);

/// Per-order level 1 - (1 - alpha)^{1/|I|}.
double per_order_level(double alpha, std::size_t num_orders);

struct PerOrder {
  double statistic = 0.0;
  double p_value = 1.0;
};

struct AdaptiveResult {
  QSet orders{2};
  std::map<int, PerOrder> per_q;
  double p_ada = 1.0;
  double p_adjusted = 1.0;
  double alpha = 0.05;
  bool reject = false;
};

/// reject is p_adjusted <= alpha. Throws as combine_p_values, and OutOfRange unless 0 < alpha < 1.
AdaptiveResult adaptive_decision(const QSet& orders, const std::map<int, PerOrder>& per_q, double alpha);
AdaptiveResult adaptive_decision(const QSet& orders, const std::map<int, double>& p, double alpha);

/// The per-order route: some p_q <= 1 - (1 - alpha)^{1/|I|}. Agrees with
/// adaptive_decision(...).reject for every input.
bool reject_by_per_order_level(const QSet& orders, const std::map<int, double>& p, double alpha);

}  // namespace lqcp
