#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

/// Which statistic a null table describes.
///   Single: T~ = max_k U(k;1,n)^2 / W(k;1,n).
///   WbsMax: max over a fixed interval sample of Q(s_m, e_m).
///   Scan:   max_{l2} Q(1,l2) + max_{m1} Q(m1,n) on the stride grid.
enum class NullKind { Single, WbsMax, Scan };

std::string_view to_string(NullKind kind) noexcept;
NullKind null_kind_from_string(std::string_view name);

/// Calibration dimension cap; simulating at p > 200 buys nothing for a pivotal statistic.
inline constexpr std::size_t kMaxCalibrationDim = 200;
inline std::size_t calibration_dim(std::size_t p) noexcept { return p < kMaxCalibrationDim ? p : kMaxCalibrationDim; }

struct NullSpec {
  NullKind kind = NullKind::Single;
  int q = 2;
  std::size_t n_sim = 0;
  std::size_t p_sim = 0;
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
  // WbsMax only.
  std::size_t M = 0;
  std::uint64_t intervals_seed = 0;
  std::size_t min_len = 0;  // 0 selects 4q - 1
  // Scan only; 0 selects default_scan_stride(n_sim).
  std::size_t stride = 0;

  bool operator==(const NullSpec&) const = default;
};

/// Spec with every defaulted field made explicit.
NullSpec resolve(NullSpec spec);

struct NullTable {
  NullSpec spec;
  std::vector<double> draws;  // ascending

  std::size_t reps() const noexcept { return draws.size(); }
};

struct RunOptions {
  unsigned threads = 0;       // 0: hardware concurrency
  double work_budget = 2e15;  // rough floating-point operation count
};

/// Projected floating-point work of simulate_null_samples(spec).
double projected_work(const NullSpec& spec);

/// Simulates the statistic on R i.i.d. N(0, I) panels of size n_sim x p_sim.
/// Replicate r uses its own generator derived from (seed, r), so the table does
/// not depend on the worker count. WbsMax draws its M intervals once from
/// intervals_seed and reuses them in every replicate.
/// Throws IntervalTooShort, InvalidConfig, BudgetExceeded.
NullTable simulate_null_samples(const NullSpec& spec, const RunOptions& opts = {});

/// Add-one Monte-Carlo p-value (1 + #{draws >= stat}) / (R + 1). Throws EmptyTable.
double p_value(double stat, const NullTable& table);

/// The ceil(level R)-th order statistic. Throws EmptyTable, OutOfRange.
double quantile(const NullTable& table, double level);

/// xi such that stat > xi exactly when p_value(stat, table) < p0.
/// Returns -inf when every statistic qualifies and +inf when none can.
double pvalue_threshold(const NullTable& table, double p0);

/// Level quantile of a freshly simulated wbs-max table.
double wbs_threshold(int q, std::size_t n, std::size_t p, std::size_t M, std::size_t R, double level,
                     std::uint64_t seed, std::uint64_t intervals_seed, std::size_t min_len = 0,
                     const RunOptions& opts = {});

/// JSON object {kind, q, n_sim, p_sim, R, M?, intervals_seed?, min_len?, stride?, seed, draws}.
std::string to_json(const NullTable& table);
NullTable null_table_from_json(std::string_view text);
void save_null_table(const NullTable& table, const std::filesystem::path& path);
NullTable load_null_table(const std::filesystem::path& path);

/// Directory of serialized tables keyed by the full resolved spec.
class NullTableCache {
 public:
  explicit NullTableCache(std::filesystem::path dir);

  /// Cache at $LQCP_NULL_CACHE, or an empty path (disabled) when unset.
  static NullTableCache from_environment();
  static constexpr const char* kEnvVar = "LQCP_NULL_CACHE";

  bool enabled() const noexcept { return !dir_.empty(); }
  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(const NullSpec& spec) const;

  /// Loads a cached table or simulates and stores it. `hit` reports which happened.
  NullTable get_or_simulate(const NullSpec& spec, const RunOptions& opts = {}, bool* hit = nullptr) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace lqcp
