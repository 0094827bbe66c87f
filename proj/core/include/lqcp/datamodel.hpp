#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "lqcp/errors.hpp"

namespace lqcp {

/// n x p panel of finite observations; row t is the observation at time t.
///
/// Storage is time-major. Element access through operator() is zero-based;
/// every statistical API in the library takes 1-based time indices.
class DataMatrix {
 public:
  /// Throws Empty for n == 0 or p == 0, NonRectangular when values.size() != n*p,
  /// NonFiniteEntry (with 1-based row/col in the message) on NaN/Inf.
  DataMatrix(std::size_t n, std::size_t p, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }

  double operator()(std::size_t t, std::size_t l) const noexcept { return values_[t * p_ + l]; }
  std::span<const double> row(std::size_t t) const noexcept {
    return {values_.data() + t * p_, p_};
  }
  std::span<const double> values() const noexcept { return values_; }

  /// Rows s..e (1-based, inclusive) as a new matrix.
  DataMatrix slice_rows(std::size_t s, std::size_t e) const;

  bool operator==(const DataMatrix& other) const = default;

 private:
  std::size_t n_;
  std::size_t p_;
  std::vector<double> values_;
};

/// Checks a row-wise table and copies it into a DataMatrix unchanged.
DataMatrix validate_matrix(const std::vector<std::vector<double>>& raw);

/// Positive even integer q indexing the L_q statistic.
class EvenOrder {
 public:
  explicit EvenOrder(int q);
  int value() const noexcept { return q_; }
  auto operator<=>(const EvenOrder&) const = default;

 private:
  int q_;
};

/// Closed 1-based time window [s, e].
struct Interval {
  std::size_t s = 1;
  std::size_t e = 1;

  std::size_t length() const noexcept { return e - s + 1; }
  bool contains(const Interval& other) const noexcept { return s <= other.s && other.e <= e; }
  bool operator==(const Interval&) const = default;
};

/// Throws InvalidInterval unless 1 <= s <= e <= n.
Interval make_interval(std::size_t s, std::size_t e, std::size_t n);

/// Change points k_1 < ... < k_m of a length-n series; k is the last index of a
/// segment. Input is sorted and deduplicated on construction.
class Segmentation {
 public:
  Segmentation(std::size_t n, std::vector<std::size_t> breaks);
  explicit Segmentation(std::size_t n) : Segmentation(n, {}) {}

  std::size_t n() const noexcept { return n_; }
  const std::vector<std::size_t>& breaks() const noexcept { return breaks_; }
  std::size_t num_breaks() const noexcept { return breaks_.size(); }
  std::size_t num_segments() const noexcept { return breaks_.size() + 1; }

  /// Segment label (0-based) of every time point, in time order.
  std::vector<std::size_t> labels() const;
  /// Segment lengths, in time order.
  std::vector<std::size_t> segment_sizes() const;

  bool operator==(const Segmentation&) const = default;

 private:
  std::size_t n_;
  std::vector<std::size_t> breaks_;
};

/// Nonempty set of distinct even orders, kept sorted ascending.
class QSet {
 public:
  explicit QSet(std::vector<int> orders);
  QSet(std::initializer_list<int> orders) : QSet(std::vector<int>(orders)) {}

  const std::vector<EvenOrder>& orders() const noexcept { return orders_; }
  std::size_t size() const noexcept { return orders_.size(); }
  EvenOrder max() const noexcept { return orders_.back(); }
  bool contains(int q) const noexcept;
  std::vector<int> values() const;

  auto begin() const noexcept { return orders_.begin(); }
  auto end() const noexcept { return orders_.end(); }

 private:
  std::vector<EvenOrder> orders_;
};

/// Falling factorial a (a-1) ... (a-b+1) in floating point; 0 when a < b.
double falling_factorial(long long a, int b) noexcept;

}  // namespace lqcp
