#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

/// counts[i][j]: time points in segment i of `a` and segment j of `b`.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::size_t total = 0;
};

/// Throws LengthMismatch when a.n() != b.n().
ContingencyTable contingency_table(const Segmentation& a, const Segmentation& b);

/// Hubert-Arabie adjusted Rand index. Two single-segment partitions (0/0) give 1.
double adjusted_rand_index(const Segmentation& a, const Segmentation& b);

/// Mean of (N_hat - N)^2 over the estimates. Throws EmptyList.
double count_mse(std::span<const Segmentation> estimates, const Segmentation& truth);

/// Plain arithmetic mean. Throws EmptyList.
double mean(std::span<const double> values);

}  // namespace lqcp
