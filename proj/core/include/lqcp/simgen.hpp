#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "lqcp/datamodel.hpp"

namespace lqcp {

enum class CovarianceKind { Identity, AR, CompoundSymmetric };

/// Identity, AR(rho) with sigma_ij = rho^|i-j|, or compound symmetric with unit
/// variances and common correlation rho.
struct CovarianceSpec {
  CovarianceKind kind = CovarianceKind::Identity;
  double rho = 0.0;

  static CovarianceSpec identity() { return {}; }
  static CovarianceSpec ar(double rho) { return {CovarianceKind::AR, rho}; }
  static CovarianceSpec compound_symmetric(double rho) { return {CovarianceKind::CompoundSymmetric, rho}; }
};

/// Throws InvalidCovariance unless |rho| < 1 (AR) or -1/(p-1) < rho < 1 (CS).
void validate(const CovarianceSpec& cov, std::size_t p);

/// n i.i.d. rows from N(0, Sigma), consuming `rng`.
DataMatrix gen_gaussian(std::size_t n, std::size_t p, const CovarianceSpec& cov, std::mt19937_64& rng);
DataMatrix gen_gaussian(std::size_t n, std::size_t p, const CovarianceSpec& cov, std::uint64_t seed);

/// Mean change by `delta` (length p) for every t > location.
struct MeanShift {
  std::size_t location = 0;
  std::vector<double> delta;
};
using MeanShiftSpec = std::vector<MeanShift>;

/// Adds the cumulative shifts to the rows after each location. Locations must be
/// strictly increasing inside [1, n-1] (BadLocation); deltas must have length p
/// (DimensionMismatch).
DataMatrix apply_mean_shifts(const DataMatrix& x, const MeanShiftSpec& shifts);

/// magnitude * (1_d, 0_{p-d}).
std::vector<double> block_shift(std::size_t p, std::size_t d, double magnitude);

/// sqrt(delta / d) * (1_d, 0_{p-d}): total squared shift size delta spread over d coordinates.
std::vector<double> power_shift(std::size_t p, std::size_t d, double delta);

/// Symmetric m x m matrix stored row-major.
struct SquareMatrix {
  std::size_t m = 0;
  std::vector<double> values;

  double operator()(std::size_t i, std::size_t j) const noexcept { return values[i * m + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return values[i * m + j]; }
  bool operator==(const SquareMatrix&) const = default;
};

/// Stochastic block model Theta = mu * Z Q Z^T with the diagonal removed.
/// membership[i] is the block of node i, or -1 for a node outside every block
/// (its edges have probability zero).
struct SbmSpec {
  std::size_t m = 0;
  std::vector<int> membership;
  std::size_t blocks = 0;
  std::vector<double> connectivity;  // blocks x blocks, row-major

  /// Nodes 0..r-1 in singleton blocks 0..r-1, the rest unassigned; Q = all ones.
  static SbmSpec first_r_singletons(std::size_t m, std::size_t r);

  /// Theta_ij for intensity mu.
  double mean(std::size_t i, std::size_t j, double mu) const;
};

/// n rows of vech(A_t) where A_t has independent Bernoulli(Theta_ij,t) edges,
/// Theta_t = intensity[t] * Z Q Z^T off the diagonal. Throws MeanOutOfRange if
/// any edge probability leaves [0, 1], LengthMismatch if intensity.size() != n.
DataMatrix gen_sbm_series(std::size_t n, const SbmSpec& spec, const std::vector<double>& intensity,
                          std::uint64_t seed);

/// Strict lower triangle in column-major order: entries (i, j), j < i, sorted by (j, i).
/// Throws NotSymmetric, NonZeroDiagonal.
std::vector<double> vech(const SquareMatrix& a);

/// Inverse of vech. Throws LengthMismatch unless v.size() == m(m-1)/2 for some m >= 2.
SquareMatrix unvech(const std::vector<double>& v);

/// Node count m with m(m-1)/2 == len, or 0 when there is none.
std::size_t vech_nodes(std::size_t len) noexcept;

}  // namespace lqcp
