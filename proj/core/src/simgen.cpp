#include "lqcp/simgen.hpp"

#include <cmath>
#include <string>

#include "lqcp/parallel.hpp"

namespace lqcp {

void validate(const CovarianceSpec& cov, std::size_t p) {
  const double rho = cov.rho;
  switch (cov.kind) {
    case CovarianceKind::Identity:
      return;
    case CovarianceKind::AR:
      if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::InvalidCovariance, "AR needs |rho| < 1");
      return;
    case CovarianceKind::CompoundSymmetric: {
      const double lower = p > 1 ? -1.0 / static_cast<double>(p - 1) : -1.0;
      if (!(rho > lower && rho < 1.0)) {
        throw Error(ErrorCode::InvalidCovariance, "compound symmetry needs -1/(p-1) < rho < 1");
      }
      return;
    }
  }
}

DataMatrix gen_gaussian(std::size_t n, std::size_t p, const CovarianceSpec& cov, std::mt19937_64& rng) {
  validate(cov, p);
  std::normal_distribution<double> z;
  std::vector<double> out(n * p);
  const double rho = cov.rho;
  const double innov = std::sqrt(1.0 - rho * rho);
  // CS as a z + (b - a) zbar 1 with a = sqrt(1-rho), b = sqrt(1-rho+rho p): covariance a^2 I + (b^2-a^2)/p 11^T.
  const double a = std::sqrt(1.0 - rho);
  const double b = std::sqrt(1.0 - rho + rho * static_cast<double>(p));
  for (std::size_t t = 0; t < n; ++t) {
    double* row = out.data() + t * p;
    switch (cov.kind) {
      case CovarianceKind::Identity:
        for (std::size_t l = 0; l < p; ++l) row[l] = z(rng);
        break;
      case CovarianceKind::AR:
        row[0] = z(rng);
        for (std::size_t l = 1; l < p; ++l) row[l] = rho * row[l - 1] + innov * z(rng);
        break;
      case CovarianceKind::CompoundSymmetric:
        if (rho >= 0.0) {
          const double shared = std::sqrt(rho) * z(rng);
          for (std::size_t l = 0; l < p; ++l) row[l] = a * z(rng) + shared;
        } else {
          double mean = 0.0;
          for (std::size_t l = 0; l < p; ++l) {
            row[l] = z(rng);
            mean += row[l];
          }
          mean /= static_cast<double>(p);
          for (std::size_t l = 0; l < p; ++l) row[l] = a * row[l] + (b - a) * mean;
        }
        break;
    }
  }
  return DataMatrix(n, p, std::move(out));
}

DataMatrix gen_gaussian(std::size_t n, std::size_t p, const CovarianceSpec& cov, std::uint64_t seed) {
  auto rng = make_stream(seed, 0);
  return gen_gaussian(n, p, cov, rng);
}

DataMatrix apply_mean_shifts(const DataMatrix& x, const MeanShiftSpec& shifts) {
  const std::size_t n = x.n();
  const std::size_t p = x.p();
  std::size_t prev = 0;
  for (const auto& s : shifts) {
    if (s.location < 1 || s.location >= n || s.location <= prev) {
      throw Error(ErrorCode::BadLocation, "shift location " + std::to_string(s.location) +
                                              " must be increasing inside [1, n-1]");
    }
    if (s.delta.size() != p) {
      throw Error(ErrorCode::DimensionMismatch,
                  "shift has " + std::to_string(s.delta.size()) + " entries, data have p = " + std::to_string(p));
    }
    prev = s.location;
  }
  std::vector<double> out(x.values().begin(), x.values().end());
  std::vector<double> level(p, 0.0);
  std::size_t next = 0;
  for (std::size_t t = 1; t <= n; ++t) {
    while (next < shifts.size() && shifts[next].location < t) {
      for (std::size_t l = 0; l < p; ++l) level[l] += shifts[next].delta[l];
      ++next;
    }
    if (next == 0) continue;
    for (std::size_t l = 0; l < p; ++l) out[(t - 1) * p + l] += level[l];
  }
  return DataMatrix(n, p, std::move(out));
}

std::vector<double> block_shift(std::size_t p, std::size_t d, double magnitude) {
  if (d > p) throw Error(ErrorCode::DimensionMismatch, "d = " + std::to_string(d) + " exceeds p = " + std::to_string(p));
  std::vector<double> out(p, 0.0);
  for (std::size_t l = 0; l < d; ++l) out[l] = magnitude;
  return out;
}

std::vector<double> power_shift(std::size_t p, std::size_t d, double delta) {
  if (d == 0) throw Error(ErrorCode::InvalidConfig, "d must be positive");
  return block_shift(p, d, std::sqrt(delta / static_cast<double>(d)));
}

SbmSpec SbmSpec::first_r_singletons(std::size_t m, std::size_t r) {
  if (r > m) throw Error(ErrorCode::InvalidConfig, "r exceeds m");
  SbmSpec spec;
  spec.m = m;
  spec.blocks = r;
  spec.membership.assign(m, -1);
  for (std::size_t i = 0; i < r; ++i) spec.membership[i] = static_cast<int>(i);
  spec.connectivity.assign(r * r, 1.0);
  return spec;
}

double SbmSpec::mean(std::size_t i, std::size_t j, double mu) const {
  if (i == j) return 0.0;
  const int a = membership[i];
  const int b = membership[j];
  if (a < 0 || b < 0) return 0.0;
  return mu * connectivity[static_cast<std::size_t>(a) * blocks + static_cast<std::size_t>(b)];
}

DataMatrix gen_sbm_series(std::size_t n, const SbmSpec& spec, const std::vector<double>& intensity,
                          std::uint64_t seed) {
  const std::size_t m = spec.m;
  if (m < 2) throw Error(ErrorCode::InvalidConfig, "SBM needs m >= 2");
  if (spec.membership.size() != m || spec.connectivity.size() != spec.blocks * spec.blocks) {
    throw Error(ErrorCode::DimensionMismatch, "membership or connectivity has the wrong size");
  }
  for (int g : spec.membership) {
    if (g >= static_cast<int>(spec.blocks)) throw Error(ErrorCode::InvalidConfig, "membership names a missing block");
  }
  if (intensity.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "intensity path has " + std::to_string(intensity.size()) + " entries, n = " +
                                               std::to_string(n));
  }
  const std::size_t p = m * (m - 1) / 2;
  std::vector<double> probs(p);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = j + 1; i < m; ++i) {
        const double theta = spec.mean(i, j, intensity[t]);
        if (!(theta >= 0.0 && theta <= 1.0)) {
          throw Error(ErrorCode::MeanOutOfRange, "edge probability " + std::to_string(theta) + " at t = " +
                                                     std::to_string(t + 1));
        }
      }
    }
  }
  auto rng = make_stream(seed, 0, 0x5b3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n * p);
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = j + 1; i < m; ++i, ++k) {
        out[t * p + k] = unif(rng) < spec.mean(i, j, intensity[t]) ? 1.0 : 0.0;
      }
    }
  }
  return DataMatrix(n, p, std::move(out));
}

std::vector<double> vech(const SquareMatrix& a) {
  const std::size_t m = a.m;
  if (a.values.size() != m * m) throw Error(ErrorCode::NonRectangular, "matrix storage is not m x m");
  for (std::size_t i = 0; i < m; ++i) {
    if (a(i, i) != 0.0) throw Error(ErrorCode::NonZeroDiagonal, "diagonal entry " + std::to_string(i + 1));
    for (std::size_t j = 0; j < i; ++j) {
      if (a(i, j) != a(j, i)) {
        throw Error(ErrorCode::NotSymmetric, "entries (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                                 ") and its transpose differ");
      }
    }
  }
  std::vector<double> out;
  out.reserve(m * (m - 1) / 2);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j + 1; i < m; ++i) out.push_back(a(i, j));
  }
  return out;
}

std::size_t vech_nodes(std::size_t len) noexcept {
  std::size_t m = 2;
  while (m * (m - 1) / 2 < len) ++m;
  return m * (m - 1) / 2 == len ? m : 0;
}

SquareMatrix unvech(const std::vector<double>& v) {
  const std::size_t m = vech_nodes(v.size());
  if (m == 0) throw Error(ErrorCode::LengthMismatch, "length " + std::to_string(v.size()) + " is not m(m-1)/2");
  SquareMatrix a{m, std::vector<double>(m * m, 0.0)};
  std::size_t k = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j + 1; i < m; ++i, ++k) {
      a(i, j) = v[k];
      a(j, i) = v[k];
    }
  }
  return a;
}

}  // namespace lqcp
