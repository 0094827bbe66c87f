#include "lqcp/nulldist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lqcp/intervals.hpp"
#include "lqcp/parallel.hpp"
#include "lqcp/simgen.hpp"
#include "lqcp/sntest.hpp"

namespace lqcp {

std::string_view to_string(NullKind kind) noexcept {
  switch (kind) {
    case NullKind::Single: return "single";
    case NullKind::WbsMax: return "wbs-max";
    case NullKind::Scan: return "scan";
  }
  return "single";
}

NullKind null_kind_from_string(std::string_view name) {
  if (name == "single") return NullKind::Single;
  if (name == "wbs-max") return NullKind::WbsMax;
  if (name == "scan") return NullKind::Scan;
  throw Error(ErrorCode::Parse, "unknown null-table kind '" + std::string(name) + "'");
}

NullSpec resolve(NullSpec spec) {
  (void)EvenOrder{spec.q};
  if (spec.kind == NullKind::WbsMax) {
    if (spec.min_len == 0) spec.min_len = 4 * static_cast<std::size_t>(spec.q) - 1;
  } else {
    spec.M = 0;
    spec.intervals_seed = 0;
    spec.min_len = 0;
  }
  if (spec.kind == NullKind::Scan) {
    if (spec.stride == 0) spec.stride = default_scan_stride(spec.n_sim);
  } else {
    spec.stride = 0;
  }
  return spec;
}

double projected_work(const NullSpec& raw) {
  const NullSpec spec = resolve(raw);
  const double n = static_cast<double>(spec.n_sim);
  const double k = static_cast<double>((spec.q + 1) * spec.p_sim);
  double per_rep = 0.0;
  switch (spec.kind) {
    case NullKind::Single:
      per_rep = 6.0 * n * n * k;
      break;
    case NullKind::WbsMax:
      per_rep = n * n * n * k / 3.0 + 6.0 * n * n * k;
      break;
    case NullKind::Scan:
      per_rep = 4.0 * n * n * k * (2.0 * n / static_cast<double>(spec.stride) + 2.0);
      break;
  }
  return per_rep * static_cast<double>(spec.reps);
}

NullTable simulate_null_samples(const NullSpec& raw, const RunOptions& opts) {
  const NullSpec spec = resolve(raw);
  const EvenOrder q{spec.q};
  const auto qv = static_cast<std::size_t>(spec.q);
  if (spec.n_sim < 4 * qv) {
    throw Error(ErrorCode::IntervalTooShort, "null simulation needs n >= 4q = " + std::to_string(4 * qv));
  }
  if (spec.p_sim == 0) throw Error(ErrorCode::InvalidConfig, "p_sim must be positive");
  if (spec.reps == 0) throw Error(ErrorCode::InvalidConfig, "R must be positive");
  if (spec.kind == NullKind::WbsMax && spec.M == 0) throw Error(ErrorCode::InvalidConfig, "M must be positive");
  const double work = projected_work(spec);
  if (work > opts.work_budget) {
    throw Error(ErrorCode::BudgetExceeded, "projected work " + std::to_string(work) + " exceeds budget " +
                                               std::to_string(opts.work_budget));
  }

  std::vector<Interval> intervals;
  if (spec.kind == NullKind::WbsMax) {
    intervals = draw_intervals(spec.n_sim, spec.M, spec.min_len, spec.intervals_seed);
  }

  std::vector<double> draws(spec.reps);
  parallel_for(spec.reps, opts.threads, [&](std::size_t r) {
    auto rng = make_stream(spec.seed, r);
    const DataMatrix x = gen_gaussian(spec.n_sim, spec.p_sim, CovarianceSpec::identity(), rng);
    switch (spec.kind) {
      case NullKind::Single:
        draws[r] = sn_statistic(x, q).value;
        break;
      case NullKind::Scan:
        draws[r] = scan_statistic(x, q, spec.stride);
        break;
      case NullKind::WbsMax: {
        Preprocessing prep;
        const DataMatrix z = preprocess(x, prep);
        double best = 0.0;
        for (const auto& st : interval_statistics(z, q, intervals)) {
          if (st.valid) best = std::max(best, st.value);
        }
        draws[r] = best;
        break;
      }
    }
  });
  std::sort(draws.begin(), draws.end());
  return NullTable{spec, std::move(draws)};
}

double p_value(double stat, const NullTable& table) {
  if (table.draws.empty()) throw Error(ErrorCode::EmptyTable, "null table has no draws");
  if (std::isnan(stat)) throw Error(ErrorCode::OutOfRange, "statistic is NaN");
  const auto first_ge = std::lower_bound(table.draws.begin(), table.draws.end(), stat);
  const auto exceed = static_cast<double>(table.draws.end() - first_ge);
  return (1.0 + exceed) / (static_cast<double>(table.draws.size()) + 1.0);
}

double quantile(const NullTable& table, double level) {
  if (table.draws.empty()) throw Error(ErrorCode::EmptyTable, "null table has no draws");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::OutOfRange, "quantile level must lie in (0, 1)");
  const auto R = static_cast<double>(table.draws.size());
  auto k = static_cast<std::size_t>(std::ceil(level * R - 1e-9));
  k = std::clamp<std::size_t>(k, 1, table.draws.size());
  return table.draws[k - 1];
}

double pvalue_threshold(const NullTable& table, double p0) {
  if (table.draws.empty()) throw Error(ErrorCode::EmptyTable, "null table has no draws");
  const std::size_t R = table.draws.size();
  // Largest exceedance count c with (1 + c) / (R + 1) < p0, evaluated exactly as p_value does.
  long long cmax = -1;
  for (std::size_t c = 0; c <= R; ++c) {
    if ((1.0 + static_cast<double>(c)) / (static_cast<double>(R) + 1.0) < p0) {
      cmax = static_cast<long long>(c);
    } else {
      break;
    }
  }
  if (cmax < 0) return std::numeric_limits<double>::infinity();
  const auto below = static_cast<long long>(R) - cmax;  // draws that must sit strictly below stat
  if (below <= 0) return -std::numeric_limits<double>::infinity();
  return table.draws[static_cast<std::size_t>(below - 1)];
}

double wbs_threshold(int q, std::size_t n, std::size_t p, std::size_t M, std::size_t R, double level,
                     std::uint64_t seed, std::uint64_t intervals_seed, std::size_t min_len, const RunOptions& opts) {
  NullSpec spec;
  spec.kind = NullKind::WbsMax;
  spec.q = q;
  spec.n_sim = n;
  spec.p_sim = p;
  spec.reps = R;
  spec.seed = seed;
  spec.M = M;
  spec.intervals_seed = intervals_seed;
  spec.min_len = min_len;
  return quantile(simulate_null_samples(spec, opts), level);
}

std::string to_json(const NullTable& table) {
  const NullSpec& s = table.spec;
  std::ostringstream os;
  os << "{\n  \"kind\": \"" << to_string(s.kind) << "\",\n  \"q\": " << s.q << ",\n  \"n_sim\": " << s.n_sim
     << ",\n  \"p_sim\": " << s.p_sim << ",\n  \"R\": " << table.draws.size();
  if (s.kind == NullKind::WbsMax) {
    os << ",\n  \"M\": " << s.M << ",\n  \"intervals_seed\": " << s.intervals_seed << ",\n  \"min_len\": " << s.min_len;
  }
  if (s.kind == NullKind::Scan) os << ",\n  \"stride\": " << s.stride;
  os << ",\n  \"seed\": " << s.seed << ",\n  \"draws\": [";
  char buf[32];
  for (std::size_t i = 0; i < table.draws.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", table.draws[i]);
    os << (i == 0 ? "" : ", ") << buf;
  }
  os << "]\n}\n";
  return os.str();
}

NullTable null_table_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("null table JSON: ") + e.what());
  }
  NullTable t;
  try {
    t.spec.kind = null_kind_from_string(j.at("kind").get<std::string>());
    t.spec.q = j.at("q").get<int>();
    t.spec.n_sim = j.at("n_sim").get<std::size_t>();
    t.spec.p_sim = j.at("p_sim").get<std::size_t>();
    t.spec.seed = j.at("seed").get<std::uint64_t>();
    t.spec.M = j.value("M", std::size_t{0});
    t.spec.intervals_seed = j.value("intervals_seed", std::uint64_t{0});
    t.spec.min_len = j.value("min_len", std::size_t{0});
    t.spec.stride = j.value("stride", std::size_t{0});
    t.draws = j.at("draws").get<std::vector<double>>();
    t.spec.reps = j.at("R").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("null table JSON: ") + e.what());
  }
  t.spec = resolve(t.spec);
  if (t.draws.empty()) throw Error(ErrorCode::EmptyTable, "null table has no draws");
  if (t.draws.size() != t.spec.reps) throw Error(ErrorCode::Parse, "R does not match the number of draws");
  if (!std::is_sorted(t.draws.begin(), t.draws.end())) throw Error(ErrorCode::Parse, "draws are not sorted");
  for (double d : t.draws) {
    if (!std::isfinite(d) || d < 0.0) throw Error(ErrorCode::Parse, "draws must be finite and nonnegative");
  }
  return t;
}

void save_null_table(const NullTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << to_json(table);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

NullTable load_null_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return null_table_from_json(buf.str());
}

NullTableCache::NullTableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

NullTableCache NullTableCache::from_environment() {
  const char* dir = std::getenv(kEnvVar);
  return NullTableCache(dir != nullptr ? std::filesystem::path(dir) : std::filesystem::path());
}

std::filesystem::path NullTableCache::path_for(const NullSpec& raw) const {
  const NullSpec s = resolve(raw);
  std::ostringstream name;
  name << "null-" << to_string(s.kind) << "-q" << s.q << "-n" << s.n_sim << "-p" << s.p_sim << "-R" << s.reps;
  if (s.kind == NullKind::WbsMax) name << "-M" << s.M << "-L" << s.min_len << "-i" << s.intervals_seed;
  if (s.kind == NullKind::Scan) name << "-st" << s.stride;
  name << "-s" << s.seed << ".json";
  return dir_ / name.str();
}

NullTable NullTableCache::get_or_simulate(const NullSpec& raw, const RunOptions& opts, bool* hit) const {
  const NullSpec spec = resolve(raw);
  if (hit != nullptr) *hit = false;
  if (!enabled()) return simulate_null_samples(spec, opts);
  const auto path = path_for(spec);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    NullTable cached = load_null_table(path);
    if (cached.spec == spec) {
      if (hit != nullptr) *hit = true;
      return cached;
    }
  }
  NullTable table = simulate_null_samples(spec, opts);
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create cache directory " + dir_.string());
  auto tmp = path;
  tmp += ".tmp";
  save_null_table(table, tmp);
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move table into " + path.string());
  return table;
}

}  // namespace lqcp
