#include "lqcp/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lqcp {

namespace {

double adjust(double p_ada, std::size_t k) { return 1.0 - std::pow(1.0 - p_ada, static_cast<double>(k)); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::OutOfRange, "alpha must lie in (0, 1)");
}

double lookup(const std::map<int, double>& p, int q) {
  const auto it = p.find(q);
  if (it == p.end()) throw Error(ErrorCode::MissingPValue, "no p-value for q = " + std::to_string(q));
  const double v = it->second;
  if (!(v > 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, "p-value for q = " + std::to_string(q) + " is outside (0, 1]");
  }
  return v;
}

// Largest double tau with adjust(tau, k) <= alpha. adjust() is monotone in its
// argument, so p <= tau reproduces the adjusted-p comparison bit for bit.
double exact_level(double alpha, std::size_t k) {
  double tau = per_order_level(alpha, k);
  while (tau > 0.0 && adjust(tau, k) > alpha) tau = std::nextafter(tau, 0.0);
  for (;;) {
    const double up = std::nextafter(tau, 1.0);
    if (up > 1.0 || adjust(up, k) > alpha) break;
    tau = up;
  }
  return tau;
}

}  // namespace

CombinedPValue combine_p_values(const QSet& orders, const std::map<int, double>& p) {
  CombinedPValue out;
  for (const EvenOrder& q : orders) out.p_ada = std::min(out.p_ada, lookup(p, q.value()));
  out.p_adjusted = adjust(out.p_ada, orders.size());
  return out;
}

double per_order_level(double alpha, std::size_t num_orders) {
  check_alpha(alpha);
  return 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(num_orders));
}

AdaptiveResult adaptive_decision(const QSet& orders, const std::map<int, PerOrder>& per_q, double alpha) {
  check_alpha(alpha);
  std::map<int, double> p;
  for (const auto& [q, entry] : per_q) p[q] = entry.p_value;
  const CombinedPValue c = combine_p_values(orders, p);
  AdaptiveResult out{orders, {}, c.p_ada, c.p_adjusted, alpha, c.p_adjusted <= alpha};
  for (const EvenOrder& q : orders) out.per_q[q.value()] = per_q.at(q.value());
  return out;
}

AdaptiveResult adaptive_decision(const QSet& orders, const std::map<int, double>& p, double alpha) {
  std::map<int, PerOrder> per_q;
  for (const auto& [q, v] : p) per_q[q] = PerOrder{0.0, v};
  return adaptive_decision(orders, per_q, alpha);
}

bool reject_by_per_order_level(const QSet& orders, const std::map<int, double>& p, double alpha) {
  check_alpha(alpha);
  const double tau = exact_level(alpha, orders.size());
  bool reject = false;
  for (const EvenOrder& q : orders) reject = reject || lookup(p, q.value()) <= tau;
  return reject;
}

}  // namespace lqcp
