#include "lqcp/datamodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lqcp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NonRectangular: return "NonRectangular";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::OrderExceedsQ: return "OrderExceedsQ";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::SizeGuard: return "SizeGuard";
    case ErrorCode::IntervalTooShort: return "IntervalTooShort";
    case ErrorCode::DegenerateNormalizer: return "DegenerateNormalizer";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::TableMismatch: return "TableMismatch";
    case ErrorCode::MissingPValue: return "MissingPValue";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NoAdmissibleInterval: return "NoAdmissibleInterval";
    case ErrorCode::MissingCalibration: return "MissingCalibration";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::InvalidCovariance: return "InvalidCovariance";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadLocation: return "BadLocation";
    case ErrorCode::MeanOutOfRange: return "MeanOutOfRange";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonZeroDiagonal: return "NonZeroDiagonal";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
  }
  return "Unknown";
}

DataMatrix::DataMatrix(std::size_t n, std::size_t p, std::vector<double> values)
    : n_(n), p_(p), values_(std::move(values)) {
  if (n_ == 0 || p_ == 0) {
    throw Error(ErrorCode::Empty, "matrix must have at least one row and one column");
  }
  if (values_.size() != n_ * p_) {
    throw Error(ErrorCode::NonRectangular,
                "expected " + std::to_string(n_ * p_) + " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteEntry, "row " + std::to_string(i / p_ + 1) + ", column " +
                                                 std::to_string(i % p_ + 1));
    }
  }
}

DataMatrix DataMatrix::slice_rows(std::size_t s, std::size_t e) const {
  const Interval iv = make_interval(s, e, n_);
  std::vector<double> out(values_.begin() + static_cast<std::ptrdiff_t>((iv.s - 1) * p_),
                          values_.begin() + static_cast<std::ptrdiff_t>(iv.e * p_));
  return DataMatrix(iv.length(), p_, std::move(out));
}

DataMatrix validate_matrix(const std::vector<std::vector<double>>& raw) {
  if (raw.empty() || raw.front().empty()) {
    throw Error(ErrorCode::Empty, "table has no rows or no columns");
  }
  const std::size_t p = raw.front().size();
  std::vector<double> values;
  values.reserve(raw.size() * p);
  for (std::size_t t = 0; t < raw.size(); ++t) {
    if (raw[t].size() != p) {
      throw Error(ErrorCode::NonRectangular, "row " + std::to_string(t + 1) + " has " +
                                                 std::to_string(raw[t].size()) + " columns, expected " +
                                                 std::to_string(p));
    }
    values.insert(values.end(), raw[t].begin(), raw[t].end());
  }
  return DataMatrix(raw.size(), p, std::move(values));
}

EvenOrder::EvenOrder(int q) : q_(q) {
  if (q < 2 || q % 2 != 0) {
    throw Error(ErrorCode::InvalidOrder, "q must be a positive even integer, got " + std::to_string(q));
  }
}

Interval make_interval(std::size_t s, std::size_t e, std::size_t n) {
  if (s < 1 || s > e || e > n) {
    throw Error(ErrorCode::InvalidInterval, "[" + std::to_string(s) + ", " + std::to_string(e) +
                                                "] is not inside [1, " + std::to_string(n) + "]");
  }
  return Interval{s, e};
}

Segmentation::Segmentation(std::size_t n, std::vector<std::size_t> breaks) : n_(n), breaks_(std::move(breaks)) {
  if (n_ == 0) {
    throw Error(ErrorCode::Empty, "segmentation of an empty series");
  }
  std::sort(breaks_.begin(), breaks_.end());
  breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  if (!breaks_.empty() && (breaks_.front() < 1 || breaks_.back() > n_ - 1)) {
    throw Error(ErrorCode::BadLocation, "change points must lie in [1, n-1]");
  }
}

std::vector<std::size_t> Segmentation::labels() const {
  std::vector<std::size_t> out(n_);
  std::size_t label = 0;
  std::size_t next = 0;
  for (std::size_t t = 1; t <= n_; ++t) {
    out[t - 1] = label;
    if (next < breaks_.size() && breaks_[next] == t) {
      ++label;
      ++next;
    }
  }
  return out;
}

std::vector<std::size_t> Segmentation::segment_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(breaks_.size() + 1);
  std::size_t prev = 0;
  for (std::size_t b : breaks_) {
    out.push_back(b - prev);
    prev = b;
  }
  out.push_back(n_ - prev);
  return out;
}

QSet::QSet(std::vector<int> orders) {
  if (orders.empty()) {
    throw Error(ErrorCode::InvalidOrder, "order set must be nonempty");
  }
  std::set<int> uniq;
  for (int q : orders) {
    if (!uniq.insert(q).second) {
      throw Error(ErrorCode::InvalidOrder, "duplicate order " + std::to_string(q));
    }
  }
  for (int q : uniq) orders_.emplace_back(q);
}

bool QSet::contains(int q) const noexcept {
  return std::any_of(orders_.begin(), orders_.end(), [q](EvenOrder o) { return o.value() == q; });
}

std::vector<int> QSet::values() const {
  std::vector<int> out;
  for (auto o : orders_) out.push_back(o.value());
  return out;
}

double falling_factorial(long long a, int b) noexcept {
  if (b < 0 || a < b) return 0.0;
  double out = 1.0;
  for (int i = 0; i < b; ++i) out *= static_cast<double>(a - i);
  return out;
}

}  // namespace lqcp
