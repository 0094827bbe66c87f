#include "cli/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "lqcp/adaptive.hpp"
#include "lqcp/estimate.hpp"
#include "lqcp/evalmetrics.hpp"
#include "lqcp/parallel.hpp"
#include "lqcp/simgen.hpp"
#include "lqcp/sntest.hpp"

namespace lqcp::cli {

namespace {

using Settings = std::map<std::string, std::string>;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

class Params {
 public:
  Params(Settings values) : values_(std::move(values)) {}

  const std::string& str(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::InvalidConfig, "missing setting '" + key + "'");
    return it->second;
  }
  double num(const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(str(key), &used);
      if (used != str(key).size()) throw std::invalid_argument(key);
      return v;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidConfig, "setting '" + key + "' is not a number: " + str(key));
    }
  }
  std::size_t count(const std::string& key) const {
    const double v = num(key);
    if (v < 0 || v != std::floor(v)) throw Error(ErrorCode::InvalidConfig, "setting '" + key + "' must be a count");
    return static_cast<std::size_t>(v);
  }
  std::uint64_t seed(const std::string& key) const {
    try {
      return std::stoull(str(key));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidConfig, "setting '" + key + "' is not a seed: " + str(key));
    }
  }
  std::vector<QSet> order_sets(const std::string& key) const {
    std::vector<QSet> out;
    for (const auto& part : split(str(key), ';')) out.push_back(parse_orders(part));
    return out;
  }
  const Settings& all() const { return values_; }

 private:
  Settings values_;
};

std::string label(const std::string& prefix, const QSet& set) {
  std::string out = prefix + "(";
  const auto v = set.values();
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out + ")";
}

CovarianceSpec parse_dgp(const std::string& name) {
  if (name == "id") return CovarianceSpec::identity();
  if (name == "cs") return CovarianceSpec::compound_symmetric(0.25);
  if (name.rfind("ar", 0) == 0) return CovarianceSpec::ar(std::stod(name.substr(name[2] == ':' ? 3 : 2)));
  if (name.rfind("cs:", 0) == 0) return CovarianceSpec::compound_symmetric(std::stod(name.substr(3)));
  throw Error(ErrorCode::InvalidConfig, "unknown dgp '" + name + "' (id, ar0.5, ar0.8, cs, cs:<rho>)");
}

// Shift direction for the single change point designs.
std::vector<double> design_shift(const Params& ps, std::size_t p) {
  const std::string design = ps.str("design");
  if (design == "dense") return power_shift(p, p, ps.num("delta"));
  if (design == "sparse") return power_shift(p, ps.count("d"), ps.num("delta"));
  throw Error(ErrorCode::InvalidConfig, "design must be sparse or dense");
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) { return make_stream(seed, 0, tag)(); }

struct Scenario {
  Settings defaults;
  std::function<Json(const Params&, const ScenarioOptions&)> run;
};

// Rejection rates of single-order and adaptive tests over replicated data sets.
Json rejection_rows(const Params& ps, const ScenarioOptions& opts, std::size_t n, std::size_t p,
                    const std::function<DataMatrix(std::size_t)>& make_data, const Json& row_prefix) {
  const auto singles = parse_orders(ps.str("orders"));
  const auto adaptive_sets = ps.str("adaptive").empty() ? std::vector<QSet>{} : ps.order_sets("adaptive");
  std::vector<int> needed = singles.values();
  for (const auto& s : adaptive_sets)
    for (int q : s.values()) needed.push_back(q);
  const QSet all(std::vector<int>([&] {
    std::vector<int> v = needed;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }()));
  const double alpha = ps.num("alpha");
  const std::size_t reps = ps.count("reps");
  std::map<int, NullTable> tables;
  for (const EvenOrder& q : all) {
    NullSpec spec;
    spec.kind = NullKind::Single;
    spec.q = q.value();
    spec.n_sim = n;
    spec.p_sim = calibration_dim(p);
    spec.reps = ps.count("null_reps");
    spec.seed = ps.seed("null_seed");
    tables[q.value()] = calibrated_table(spec, opts);
  }
  std::vector<std::map<int, double>> pvals(reps);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    const DataMatrix x = make_data(r);
    for (const EvenOrder& q : all) pvals[r][q.value()] = p_value(sn_statistic(x, q).value, tables[q.value()]);
  });
  Json rows = Json::array();
  auto emit = [&](const std::string& test, double rate) {
    Json row = row_prefix;
    row["test"] = test;
    row["rejection_rate"] = rate;
    rows.push_back(row);
  };
  for (const EvenOrder& q : singles) {
    std::size_t hits = 0;
    for (const auto& pv : pvals) hits += pv.at(q.value()) <= alpha;
    emit(label("SN", QSet{q.value()}), static_cast<double>(hits) / static_cast<double>(reps));
  }
  for (const auto& set : adaptive_sets) {
    std::size_t hits = 0;
    for (const auto& pv : pvals) hits += adaptive_decision(set, pv, alpha).reject;
    emit(label("SN", set), static_cast<double>(hits) / static_cast<double>(reps));
  }
  return rows;
}

Json gaussian_rejection(const Params& ps, const ScenarioOptions& opts, bool shifted) {
  const std::size_t n = ps.count("n"), p = ps.count("p");
  const auto cov = parse_dgp(ps.str("dgp"));
  const std::uint64_t seed = ps.seed("seed");
  std::vector<double> delta;
  Json prefix;
  prefix["dgp"] = ps.str("dgp");
  prefix["n"] = n;
  prefix["p"] = p;
  if (shifted) {
    delta = design_shift(ps, p);
    prefix["design"] = ps.str("design");
    prefix["delta"] = ps.num("delta");
  }
  return rejection_rows(ps, opts, n, p,
                        [&](std::size_t r) {
                          auto rng = make_stream(seed, r);
                          DataMatrix x = gen_gaussian(n, p, cov, rng);
                          if (shifted) x = apply_mean_shifts(x, {{n / 2, delta}});
                          return x;
                        },
                        prefix);
}

Json rmse_rows(const Params& ps, const ScenarioOptions& opts) {
  const std::size_t n = ps.count("n"), p = ps.count("p"), reps = ps.count("reps");
  const auto cov = parse_dgp(ps.str("dgp"));
  const auto orders = parse_orders(ps.str("orders"));
  const auto delta = design_shift(ps, p);
  const std::uint64_t seed = ps.seed("seed");
  const std::size_t k_star = n / 2;
  std::vector<std::map<int, double>> err(reps);
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    auto rng = make_stream(seed, r);
    const DataMatrix x = apply_mean_shifts(gen_gaussian(n, p, cov, rng), {{k_star, delta}});
    for (const EvenOrder& q : orders) {
      err[r][q.value()] = single_cp_estimate(x, q).tau_hat - static_cast<double>(k_star) / static_cast<double>(n);
    }
  });
  Json rows = Json::array();
  for (const EvenOrder& q : orders) {
    double ss = 0.0;
    for (const auto& e : err) ss += e.at(q.value()) * e.at(q.value());
    Json row;
    row["dgp"] = ps.str("dgp");
    row["n"] = n;
    row["p"] = p;
    row["design"] = ps.str("design");
    row["delta"] = ps.num("delta");
    row["method"] = label("SN", QSet{q.value()});
    row["rmse_x1000"] = 1000.0 * std::sqrt(ss / static_cast<double>(reps));
    rows.push_back(row);
  }
  return rows;
}

// MSE of the break count and average ARI for each WBS method.
Json wbs_rows(const Params& ps, const ScenarioOptions& opts, std::size_t n, std::size_t p,
              const std::function<DataMatrix(std::size_t)>& make_data, const Segmentation& truth, const Json& prefix) {
  WbsConfig cfg;
  cfg.M = ps.count("M");
  cfg.R = ps.count("calib_reps");
  cfg.level = ps.num("level");
  cfg.p0 = ps.num("p0");
  cfg.interval_seed = ps.seed("interval_seed");
  cfg.calibration_seed = ps.seed("null_seed");
  cfg.threads = opts.threads;
  const auto methods = ps.order_sets("methods");
  const std::size_t reps = ps.count("reps");
  // "method": 4 q_max - 1 per method; "shared": the largest of those for every method.
  const std::string min_len = ps.str("min_len");
  if (min_len == "shared") {
    int q_top = 2;
    for (const auto& set : methods) q_top = std::max(q_top, set.max().value());
    cfg.min_len = 4 * static_cast<std::size_t>(q_top) - 1;
  } else if (min_len != "method") {
    cfg.min_len = ps.count("min_len");
  }

  struct Method {
    QSet orders;
    std::map<int, NullTable> tables;
    double xi = 0.0;
  };
  std::vector<Method> prepared;
  for (const auto& set : methods) {
    Method m{set, {}, 0.0};
    for (const EvenOrder& q : set) {
      m.tables[q.value()] = calibrated_table(wbs_null_spec(n, p, q.value(), set.max().value(), cfg), opts);
    }
    if (set.size() == 1) m.xi = quantile(m.tables.begin()->second, cfg.level);
    prepared.push_back(std::move(m));
  }
  std::vector<std::vector<Segmentation>> found(prepared.size(), std::vector<Segmentation>(reps, Segmentation(n)));
  WbsConfig inner = cfg;
  inner.threads = 1;
  parallel_for(reps, opts.threads, [&](std::size_t r) {
    const DataMatrix x = make_data(r);
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      const auto& m = prepared[i];
      found[i][r] = m.orders.size() == 1 ? wbs_detect(x, m.orders.orders().front(), inner, m.xi).breaks
                                         : wbs_adaptive(x, m.orders, inner, m.tables).breaks;
    }
  });
  Json rows = Json::array();
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    std::vector<double> aris;
    for (const auto& seg : found[i]) aris.push_back(adjusted_rand_index(seg, truth));
    Json row = prefix;
    row["method"] = label("WBS-SN", prepared[i].orders);
    if (prepared[i].orders.size() == 1) row["threshold"] = prepared[i].xi;
    row["mse"] = count_mse(found[i], truth);
    row["ari"] = mean(aris);
    rows.push_back(row);
  }
  return rows;
}

Json gaussian_wbs(const Params& ps, const ScenarioOptions& opts) {
  const std::size_t n = ps.count("n"), p = ps.count("p");
  const std::string design = ps.str("design");
  const double k1 = ps.num("k");
  double k2 = k1;
  std::size_t d1 = 0, d2 = 0;
  if (design == "sparse") {
    d1 = d2 = ps.count("d_sparse");
  } else if (design == "dense") {
    d1 = d2 = p;
  } else if (design == "mixed") {
    // theta_1 = -theta_2 sparse with size k, theta_3 dense with size k2.
    d1 = ps.count("d_sparse");
    d2 = p;
    k2 = ps.num("k2");
  } else {
    throw Error(ErrorCode::InvalidConfig, "design must be sparse, dense or mixed");
  }
  const auto breaks = std::vector<std::size_t>{30 * n / 120, 60 * n / 120, 90 * n / 120};
  const auto th1 = block_shift(p, d1, 2.0 * std::sqrt(k1 / static_cast<double>(d1)));
  auto th2 = th1;
  for (double& v : th2) v = -v;
  const auto th3 = block_shift(p, d2, 2.0 * std::sqrt(k2 / static_cast<double>(d2)));
  const std::uint64_t seed = ps.seed("seed");
  Json prefix;
  prefix["design"] = design;
  prefix["k"] = k1;
  if (design == "mixed") prefix["k2"] = k2;
  return wbs_rows(ps, opts, n, p,
                  [&](std::size_t r) {
                    auto rng = make_stream(seed, r);
                    return apply_mean_shifts(gen_gaussian(n, p, CovarianceSpec::identity(), rng),
                                             {{breaks[0], th1}, {breaks[1], th2}, {breaks[2], th3}});
                  },
                  Segmentation(n, breaks), prefix);
}

SbmSpec network_spec(const Params& ps, double* mu) {
  const std::size_t m = ps.count("m");
  const double c = ps.num("c");
  const auto r = static_cast<std::size_t>(std::lround(c * static_cast<double>(m)));
  if (c <= 0.0 || r < 1 || r > m) throw Error(ErrorCode::InvalidConfig, "need 0 < c <= 1 with c*m >= 1");
  *mu = 0.1 / c;
  return SbmSpec::first_r_singletons(m, r);
}

Json network_rejection(const Params& ps, const ScenarioOptions& opts, bool shifted) {
  const std::size_t n = ps.count("n");
  double mu = 0.0;
  const SbmSpec spec = network_spec(ps, &mu);
  const double delta = shifted ? ps.num("delta") : 0.0;
  std::vector<double> path(n, mu);
  for (std::size_t t = 0; t < n; ++t)
    if (t + 1 > n / 2) path[t] = mu * (1.0 + delta);
  const std::uint64_t seed = ps.seed("seed");
  Json prefix;
  prefix["n"] = n;
  prefix["m"] = spec.m;
  prefix["c"] = ps.num("c");
  if (shifted) prefix["delta"] = delta;
  const std::size_t p = spec.m * (spec.m - 1) / 2;
  return rejection_rows(ps, opts, n, p,
                        [&](std::size_t r) { return gen_sbm_series(n, spec, path, derived_seed(seed, r)); }, prefix);
}

Json network_wbs(const Params& ps, const ScenarioOptions& opts) {
  const std::size_t n = ps.count("n");
  double mu = 0.0;
  const SbmSpec spec = network_spec(ps, &mu);
  const double delta = ps.num("delta");
  std::vector<double> path(n);
  for (std::size_t t = 1; t <= n; ++t) {
    const bool up = (t > 30 && t <= 60) || t > 90;
    path[t - 1] = mu + (up ? delta * mu : 0.0);
  }
  const std::uint64_t seed = ps.seed("seed");
  Json prefix;
  prefix["m"] = spec.m;
  prefix["c"] = ps.num("c");
  prefix["delta"] = delta;
  const std::size_t p = spec.m * (spec.m - 1) / 2;
  return wbs_rows(ps, opts, n, p, [&](std::size_t r) { return gen_sbm_series(n, spec, path, derived_seed(seed, r)); },
                  Segmentation(n, {30, 60, 90}), prefix);
}

const std::map<std::string, Scenario>& registry() {
  static const std::map<std::string, Scenario> table = [] {
    const Settings test_common{{"alpha", "0.05"}, {"reps", "2000"}, {"null_reps", "2000"}, {"orders", "2,4,6"},
                               {"adaptive", "2,4;2,6;2,4,6"}};
    const Settings wbs_common{{"M", "1000"}, {"calib_reps", "200"}, {"level", "0.95"}, {"p0", "0.05"},
                              {"methods", "2;6;2,6"}, {"reps", "100"}, {"min_len", "shared"}};
    auto merge = [](Settings a, const Settings& b) {
      a.insert(b.begin(), b.end());
      return a;
    };
    std::map<std::string, Scenario> t;
    t["table1-size"] = {merge(test_common, {{"dgp", "id"}, {"n", "200"}, {"p", "100"}}),
                        [](const Params& ps, const ScenarioOptions& o) { return gaussian_rejection(ps, o, false); }};
    t["table2-power"] = {merge(test_common, {{"dgp", "id"}, {"n", "200"}, {"p", "100"}, {"design", "sparse"},
                                             {"d", "3"}, {"delta", "1"}}),
                         [](const Params& ps, const ScenarioOptions& o) { return gaussian_rejection(ps, o, true); }};
    t["table3-rmse"] = {{{"dgp", "id"}, {"n", "200"}, {"p", "100"}, {"design", "dense"}, {"d", "3"}, {"delta", "2"},
                         {"orders", "2,4,6"}, {"reps", "2000"}},
                        rmse_rows};
    t["table4-wbs"] = {merge(wbs_common, {{"n", "120"}, {"p", "50"}, {"design", "sparse"}, {"k", "2.5"},
                                           {"k2", "4"}, {"d_sparse", "5"}}),
                       gaussian_wbs};
    t["network-size"] = {merge(test_common, {{"n", "200"}, {"m", "10"}, {"c", "1"}, {"reps", "1000"}}),
                         [](const Params& ps, const ScenarioOptions& o) { return network_rejection(ps, o, false); }};
    t["network-power"] = {merge(test_common, {{"n", "200"}, {"m", "10"}, {"c", "1"}, {"delta", "0.5"},
                                              {"reps", "1000"}}),
                          [](const Params& ps, const ScenarioOptions& o) { return network_rejection(ps, o, true); }};
    t["network-wbs"] = {merge(wbs_common, {{"n", "120"}, {"m", "10"}, {"c", "1"}, {"delta", "0.5"}}), network_wbs};
    for (auto& [name, sc] : t) {
      sc.defaults["seed"] = "";
      sc.defaults["null_seed"] = "";
      if (sc.defaults.count("M")) sc.defaults["interval_seed"] = "";
    }
    return t;
  }();
  return table;
}

const Scenario& lookup(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
  return it->second;
}

}  // namespace

QSet parse_orders(const std::string& text) {
  std::vector<int> orders;
  for (const auto& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      orders.push_back(std::stoi(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidConfig, "bad order list '" + text + "'");
    }
  }
  return QSet(orders);
}

NullTable calibrated_table(const NullSpec& spec, const ScenarioOptions& opts) {
  return opts.cache.get_or_simulate(spec, RunOptions{opts.threads, opts.work_budget});
}

std::vector<std::string> scenario_names() {
  return {"table1-size", "table2-power", "table3-rmse", "table4-wbs", "network-size", "network-power", "network-wbs"};
}

std::map<std::string, std::string> scenario_defaults(const std::string& name) { return lookup(name).defaults; }

RunReport run_scenario(const std::string& name, const std::map<std::string, std::string>& overrides,
                       const ScenarioOptions& opts) {
  const Scenario& sc = lookup(name);
  Settings values = sc.defaults;
  for (const auto& [k, v] : overrides) {
    if (!values.count(k)) throw Error(ErrorCode::InvalidConfig, "scenario '" + name + "' has no setting '" + k + "'");
    values[k] = v;
  }
  RunReport report;
  report.command = Json::array({"simulate", name});
  if (values["seed"].empty()) values["seed"] = std::to_string(fresh_seed());
  const std::uint64_t seed = std::stoull(values["seed"]);
  if (values["null_seed"].empty()) values["null_seed"] = std::to_string(derived_seed(seed, 1));
  if (values.count("interval_seed") && values["interval_seed"].empty()) {
    values["interval_seed"] = std::to_string(derived_seed(seed, 2));
  }
  for (const auto& [k, v] : values) {
    if (k.find("seed") != std::string::npos) {
      report.seeds[k] = std::stoull(v);
    } else {
      report.config[k] = v;
    }
  }
  report.config["scenario"] = name;
  Stopwatch clock;
  const Params ps(values);
  report.results["rows"] = sc.run(ps, opts);
  report.timing["wall_seconds"] = clock.seconds();
  return report;
}

}  // namespace lqcp::cli
