#include "lqcp/evalmetrics.hpp"

#include <string>

namespace lqcp {

ContingencyTable contingency_table(const Segmentation& a, const Segmentation& b) {
  if (a.n() != b.n()) {
    throw Error(ErrorCode::LengthMismatch,
                "segmentations cover " + std::to_string(a.n()) + " and " + std::to_string(b.n()) + " points");
  }
  ContingencyTable t;
  t.total = a.n();
  t.counts.assign(a.num_segments(), std::vector<std::size_t>(b.num_segments(), 0));
  t.row_sums.assign(a.num_segments(), 0);
  t.col_sums.assign(b.num_segments(), 0);
  const auto la = a.labels();
  const auto lb = b.labels();
  for (std::size_t i = 0; i < la.size(); ++i) {
    ++t.counts[la[i]][lb[i]];
    ++t.row_sums[la[i]];
    ++t.col_sums[lb[i]];
  }
  return t;
}

namespace {

double pairs(std::size_t k) { return 0.5 * static_cast<double>(k) * static_cast<double>(k > 0 ? k - 1 : 0); }

}  // namespace

double adjusted_rand_index(const Segmentation& a, const Segmentation& b) {
  const ContingencyTable t = contingency_table(a, b);
  double index = 0.0;
  for (const auto& row : t.counts) {
    for (std::size_t c : row) index += pairs(c);
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t c : t.row_sums) sum_a += pairs(c);
  for (std::size_t c : t.col_sums) sum_b += pairs(c);
  const double all = pairs(t.total);
  const double expected = all > 0.0 ? sum_a * sum_b / all : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  const double denom = max_index - expected;
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double count_mse(std::span<const Segmentation> estimates, const Segmentation& truth) {
  if (estimates.empty()) throw Error(ErrorCode::EmptyList, "no estimates");
  double total = 0.0;
  const auto n_true = static_cast<double>(truth.num_breaks());
  for (const auto& est : estimates) {
    const double d = static_cast<double>(est.num_breaks()) - n_true;
    total += d * d;
  }
  return total / static_cast<double>(estimates.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyList, "no values");
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace lqcp
