#include "lqcp/split_sweep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <string>

namespace lqcp {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double SweepResult::sq(std::size_t a, std::size_t b) const {
  if (a < window_.s || b > window_.e || a > b) {
    throw Error(ErrorCode::InvalidInterval, "SQ(" + std::to_string(a) + ", " + std::to_string(b) + ") outside sweep window");
  }
  const auto& row = row_sq_[a - window_.s];
  if (!row.empty()) return row[b - window_.s];
  const auto& col = col_sq_[b - window_.s];
  if (!col.empty()) return col[a - window_.s];
  throw std::logic_error("SQ(" + std::to_string(a) + ", " + std::to_string(b) + ") was not requested");
}

bool SweepResult::has_sq(std::size_t a, std::size_t b) const {
  if (a < window_.s || b > window_.e || a > b) return false;
  return !row_sq_[a - window_.s].empty() || !col_sq_[b - window_.s].empty();
}

std::span<const double> SweepResult::profile(Interval iv) const {
  const auto it = profiles_.find(iv);
  if (it == profiles_.end()) throw std::logic_error("profile was not requested");
  return it->second;
}

namespace {

struct ProfileSlot {
  std::vector<double>* values;
  std::size_t offset;
  std::size_t s;
  std::size_t e;
};

// e_c <- e_c + v e_{c-1}, c = q..1, coordinate-wise. `e` is laid out [c][l].
inline void push_value(std::vector<double>& e, std::span<const double> v, int q, std::size_t p) {
  for (int c = q; c >= 1; --c) {
    double* cur = e.data() + static_cast<std::size_t>(c) * p;
    const double* prev = e.data() + static_cast<std::size_t>(c - 1) * p;
    for (std::size_t l = 0; l < p; ++l) cur[l] += v[l] * prev[l];
  }
}

inline void reset(std::vector<double>& e, std::size_t p) {
  std::fill(e.begin(), e.end(), 0.0);
  std::fill(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(p), 1.0);
}

}  // namespace

SweepResult sweep(const DataMatrix& x, int q, const SweepRequest& request) {
  (void)EvenOrder{q};
  const Interval win = make_interval(request.window.s, request.window.e, x.n());
  const std::size_t S = win.s;
  const std::size_t E = win.e;
  const std::size_t len = win.length();
  const std::size_t p = x.p();
  const auto uq = static_cast<std::size_t>(q);
  const std::size_t K = (uq + 1) * p;

  SweepResult out;
  out.q_ = q;
  out.window_ = win;
  out.row_sq_.resize(len);
  out.col_sq_.resize(len);

  std::vector<char> want_row(len, request.all_rows ? 1 : 0);
  std::vector<char> want_col(len, 0);
  for (std::size_t a : request.rows) {
    if (a < S || a > E) throw Error(ErrorCode::InvalidInterval, "requested row outside window");
    want_row[a - S] = 1;
  }
  for (std::size_t b : request.cols) {
    if (b < S || b > E) throw Error(ErrorCode::InvalidInterval, "requested column outside window");
    want_col[b - S] = 1;
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (want_row[i]) out.row_sq_[i].assign(len, 0.0);
    if (want_col[i]) out.col_sq_[i].assign(len, 0.0);
  }

  // Split points t that touch each requested profile.
  std::vector<std::vector<ProfileSlot>> slots_at(len);
  for (const Interval& iv : request.profiles) {
    if (!win.contains(iv)) throw Error(ErrorCode::InvalidInterval, "requested profile outside window");
    auto [it, inserted] = out.profiles_.try_emplace(iv);
    if (!inserted) continue;
    if (iv.length() < 4 * uq) continue;
    const std::size_t first = iv.s + 2 * uq - 1;
    const std::size_t last = iv.e - 2 * uq;
    it->second.assign(last - first + 1, 0.0);
    for (std::size_t t = first; t <= last; ++t) {
      slots_at[t - S].push_back(ProfileSlot{&it->second, t - first, iv.s, iv.e});
    }
  }

  if (len < 2 * uq) return out;

  // Coefficient tables: U = q! * sum_c left[L][c] e_c(left) * right[R][c] e_{q-c}(right).
  std::vector<double> left_coef((len + 1) * (uq + 1)), right_coef((len + 1) * (uq + 1));
  for (std::size_t m = 0; m <= len; ++m) {
    for (int c = 0; c <= q; ++c) {
      const double sign = ((q - c) % 2 == 0) ? 1.0 : -1.0;
      const auto mm = static_cast<long long>(m);
      left_coef[m * (uq + 1) + c] = sign * falling_factorial(mm - c, q - c);
      right_coef[m * (uq + 1) + c] = falling_factorial(mm - q + c, c);
    }
  }
  const double q_factorial = falling_factorial(q, q);

  RowMajorMatrix A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd u_rows, u_cols;
  RowMajorMatrix a_sel;
  Eigen::MatrixXd b_sel;
  std::vector<double> esym(K);
  std::vector<std::size_t> rows_here, cols_here;
  std::vector<std::ptrdiff_t> row_slot(len, -1), col_slot(len, -1);

  for (std::size_t t = S + uq - 1; t + uq <= E; ++t) {
    const std::size_t na = t + 2 - uq - S;  // a = S .. t-q+1
    const std::size_t nb = E + 1 - t - uq;  // b = t+q .. E
    A.resize(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(K));
    B.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(nb));

    reset(esym, p);
    for (std::size_t a = t + 1; a-- > S;) {
      push_value(esym, x.row(a - 1), q, p);
      const std::size_t L = t - a + 1;
      if (L < uq) continue;
      double* dst = A.row(static_cast<Eigen::Index>(a - S)).data();
      for (std::size_t c = 0; c <= uq; ++c) {
        const double f = left_coef[L * (uq + 1) + c];
        const double* src = esym.data() + c * p;
        for (std::size_t l = 0; l < p; ++l) dst[c * p + l] = f * src[l];
      }
    }

    reset(esym, p);
    for (std::size_t b = t + 1; b <= E; ++b) {
      push_value(esym, x.row(b - 1), q, p);
      const std::size_t R = b - t;
      if (R < uq) continue;
      double* dst = B.col(static_cast<Eigen::Index>(b - t - uq)).data();
      for (std::size_t c = 0; c <= uq; ++c) {
        const double g = right_coef[R * (uq + 1) + c];
        const double* src = esym.data() + (uq - c) * p;
        for (std::size_t l = 0; l < p; ++l) dst[c * p + l] = g * src[l];
      }
    }

    rows_here.clear();
    for (std::size_t a = S; a + uq <= t + 1; ++a) {
      row_slot[a - S] = -1;
      if (want_row[a - S]) {
        row_slot[a - S] = static_cast<std::ptrdiff_t>(rows_here.size());
        rows_here.push_back(a);
      }
    }
    cols_here.clear();
    for (std::size_t b = t + uq; b <= E; ++b) {
      col_slot[b - S] = -1;
      if (want_col[b - S]) {
        col_slot[b - S] = static_cast<std::ptrdiff_t>(cols_here.size());
        cols_here.push_back(b);
      }
    }

    if (!rows_here.empty()) {
      if (rows_here.size() == na) {
        u_rows.noalias() = A * B;
      } else {
        a_sel.resize(static_cast<Eigen::Index>(rows_here.size()), static_cast<Eigen::Index>(K));
        for (std::size_t i = 0; i < rows_here.size(); ++i) {
          a_sel.row(static_cast<Eigen::Index>(i)) = A.row(static_cast<Eigen::Index>(rows_here[i] - S));
        }
        u_rows.noalias() = a_sel * B;
      }
      u_rows *= q_factorial;
      for (std::size_t i = 0; i < rows_here.size(); ++i) {
        auto& dst = out.row_sq_[rows_here[i] - S];
        for (std::size_t j = 0; j < nb; ++j) {
          const double u = u_rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          dst[t + uq + j - S] += u * u;
        }
      }
    }

    if (!cols_here.empty()) {
      b_sel.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(cols_here.size()));
      for (std::size_t j = 0; j < cols_here.size(); ++j) {
        b_sel.col(static_cast<Eigen::Index>(j)) = B.col(static_cast<Eigen::Index>(cols_here[j] - t - uq));
      }
      u_cols.noalias() = A * b_sel;
      u_cols *= q_factorial;
      for (std::size_t j = 0; j < cols_here.size(); ++j) {
        auto& dst = out.col_sq_[cols_here[j] - S];
        for (std::size_t i = 0; i < na; ++i) {
          const double u = u_cols(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          dst[i] += u * u;
        }
      }
    }

    for (const ProfileSlot& slot : slots_at[t - S]) {
      double u;
      const std::ptrdiff_t rs = row_slot[slot.s - S];
      const std::ptrdiff_t cs = col_slot[slot.e - S];
      if (rs >= 0) {
        u = u_rows(rs, static_cast<Eigen::Index>(slot.e - t - uq));
      } else if (cs >= 0) {
        u = u_cols(static_cast<Eigen::Index>(slot.s - S), cs);
      } else {
        u = q_factorial * A.row(static_cast<Eigen::Index>(slot.s - S)).dot(
                              B.col(static_cast<Eigen::Index>(slot.e - t - uq)));
      }
      (*slot.values)[slot.offset] = u;
    }
  }
  return out;
}

}  // namespace lqcp
