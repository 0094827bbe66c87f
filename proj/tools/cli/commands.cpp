#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "cli/report.hpp"
#include "cli/scenarios.hpp"
#include "lqcp/adaptive.hpp"
#include "lqcp/estimate.hpp"
#include "lqcp/parallel.hpp"
#include "lqcp/simgen.hpp"
#include "lqcp/sntest.hpp"

namespace lqcp::cli {

namespace {

struct Common {
  unsigned threads = 0;
  std::string cache_dir;
  bool csv = false;
  std::string header = "auto";
  double work_budget = RunOptions{}.work_budget;

  ScenarioOptions scenario() const {
    ScenarioOptions o;
    o.threads = threads;
    o.cache = cache_dir.empty() ? NullTableCache::from_environment() : NullTableCache(cache_dir);
    o.work_budget = work_budget;
    return o;
  }
  RunOptions run() const { return RunOptions{threads, work_budget}; }
};

void add_common(CLI::App* app, Common& c, bool with_data) {
  app->add_option("--threads", c.threads, "worker threads (0: all cores)");
  app->add_option("--cache-dir", c.cache_dir, std::string("null table cache (default $") + NullTableCache::kEnvVar + ")");
  app->add_option("--work-budget", c.work_budget, "abort simulations projected above this many flops");
  app->add_flag("--csv", c.csv, "emit result rows as CSV instead of JSON");
  if (with_data) {
    app->add_option("--header", c.header, "header row: auto, yes or no")
        ->check(CLI::IsMember({"auto", "yes", "no"}));
  }
}

HeaderMode header_mode(const std::string& h) {
  if (h == "yes") return HeaderMode::Present;
  if (h == "no") return HeaderMode::Absent;
  return HeaderMode::Auto;
}

std::uint64_t seed_or_sample(const std::optional<std::uint64_t>& given, const std::string& flag, std::ostream& err) {
  if (given) return *given;
  const std::uint64_t s = fresh_seed();
  err << "lqcp: sampled " << flag << "=" << s << "\n";
  return s;
}

Json orders_json(const QSet& set) { return Json(set.values()); }

// Flags shared by `test` and `network test`.
struct TestArgs {
  std::string path;
  std::string q = "2";
  double alpha = 0.05;
  std::size_t null_reps = 2000;
  std::optional<std::uint64_t> null_seed;
  bool scan = false;
  bool single = false;
  std::size_t stride = 0;
};

void add_test_options(CLI::App* app, TestArgs& a) {
  app->add_option("--q", a.q, "even order(s), comma separated; several select the adaptive test");
  app->add_option("--alpha", a.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  app->add_option("--null-reps", a.null_reps, "null table size R")->check(CLI::PositiveNumber);
  app->add_option("--null-seed", a.null_seed, "seed of the null table");
  auto* scan = app->add_flag("--scan", a.scan, "scan statistic over both interval ends");
  auto* single = app->add_flag("--single", a.single, "single change-point statistic (default)");
  scan->excludes(single);
  app->add_option("--stride", a.stride, "scan endpoint stride (0: n/100)");
}

// Flags shared by `estimate` and `network estimate`.
struct EstimateArgs {
  std::string path;
  std::string method = "single";
  std::string q = "2";
  std::size_t intervals = 1000;
  double level = 0.95;
  std::size_t calib_reps = 200;
  std::optional<std::uint64_t> interval_seed;
  std::optional<std::uint64_t> calib_seed;
  std::optional<double> threshold;
  std::size_t extra_len = 0;
  double p0 = 0.05;
  std::string level_rule = "running";
  std::string orientation = "upper";
};

void add_estimate_options(CLI::App* app, EstimateArgs& a) {
  app->add_option("--method", a.method, "single or wbs")->check(CLI::IsMember({"single", "wbs"}));
  app->add_option("--q", a.q, "even order(s), comma separated");
  app->add_option("--intervals", a.intervals, "number M of random intervals")->check(CLI::PositiveNumber);
  app->add_option("--threshold-level", a.level, "quantile of the wbs-max table used as threshold")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--threshold", a.threshold, "fixed threshold, skipping calibration (single order)");
  app->add_option("--calib-reps", a.calib_reps, "calibration replicates")->check(CLI::PositiveNumber);
  app->add_option("--interval-seed", a.interval_seed, "seed of the interval sample");
  app->add_option("--calib-seed", a.calib_seed, "seed of the calibration tables");
  app->add_option("--extra-len", a.extra_len, "added to the minimum interval length 4q-1");
  app->add_option("--p0", a.p0, "adaptive significance level")->check(CLI::Range(0.0, 1.0));
  app->add_option("--level-rule", a.level_rule, "adaptive level: running or bonferroni")
      ->check(CLI::IsMember({"running", "bonferroni"}));
  app->add_option("--p-orientation", a.orientation, "adaptive p-value: upper or literal")
      ->check(CLI::IsMember({"upper", "literal"}));
}

void emit(std::ostream& out, const RunReport& report, bool csv, const char* rows_key) {
  if (csv) {
    write_rows_csv(out, report.results.at(rows_key));
  } else {
    out << report.dump();
  }
}

Json echo(int argc, const char* const* argv) {
  Json cmd = Json::array();
  for (int i = 1; i < argc; ++i) cmd.push_back(argv[i]);
  return cmd;
}

void record_data(RunReport& r, const std::string& path, const CsvMatrix& data) {
  r.config["data"] = path;
  r.config["n"] = data.data.n();
  r.config["p"] = data.data.p();
  if (!data.column_names.empty()) r.config["columns"] = data.column_names;
}

int run_test(const TestArgs& a, const Common& c, const CsvMatrix& data, RunReport& r, std::ostream& out,
             std::ostream& err) {
  const DataMatrix& x = data.data;
  const QSet orders = parse_orders(a.q);
  const NullKind kind = a.scan ? NullKind::Scan : NullKind::Single;
  const std::uint64_t null_seed = seed_or_sample(a.null_seed, "--null-seed", err);
  const ScenarioOptions so = c.scenario();
  Stopwatch clock;
  r.config["statistic"] = std::string(to_string(kind));
  r.config["q"] = orders_json(orders);
  r.config["alpha"] = a.alpha;
  r.config["null_reps"] = a.null_reps;
  if (a.scan) r.config["stride"] = a.stride == 0 ? default_scan_stride(x.n()) : a.stride;
  r.seeds["null_seed"] = null_seed;

  Json rows = Json::array();
  std::map<int, PerOrder> per_q;
  for (const EvenOrder& q : orders) {
    NullSpec spec;
    spec.kind = kind;
    spec.q = q.value();
    spec.n_sim = x.n();
    spec.p_sim = calibration_dim(x.p());
    spec.reps = a.null_reps;
    spec.seed = null_seed;
    spec.stride = a.stride;
    Json row;
    row["q"] = q.value();
    double stat = 0.0;
    if (a.scan) {
      stat = scan_statistic(x, q, a.stride);
    } else {
      const SnProfile prof = sn_statistic(x, q);
      stat = prof.value;
      row["argmax"] = prof.argmax;
    }
    const NullTable table = calibrated_table(spec, so);
    const double pv = p_value(stat, table);
    row["statistic"] = stat;
    row["p_value"] = pv;
    row["critical_value"] = quantile(table, 1.0 - a.alpha);
    rows.push_back(row);
    per_q[q.value()] = PerOrder{stat, pv};
  }
  r.results["rows"] = rows;
  bool reject = false;
  if (orders.size() > 1) {
    const AdaptiveResult ad = adaptive_decision(orders, per_q, a.alpha);
    r.results["p_ada"] = ad.p_ada;
    r.results["p_adjusted"] = ad.p_adjusted;
    reject = ad.reject;
  } else {
    reject = per_q.begin()->second.p_value <= a.alpha;
  }
  r.results["reject"] = reject;
  r.timing["wall_seconds"] = clock.seconds();
  emit(out, r, c.csv, "rows");
  return reject ? kExitReject : kExitOk;
}

int run_estimate(const EstimateArgs& a, const Common& c, const CsvMatrix& data, RunReport& r, std::ostream& out,
                 std::ostream& err) {
  const DataMatrix& x = data.data;
  const QSet orders = parse_orders(a.q);
  Stopwatch clock;
  r.config["method"] = a.method;
  r.config["q"] = orders_json(orders);
  if (a.method == "single") {
    Json rows = Json::array();
    for (const EvenOrder& q : orders) {
      const SingleEstimate est = single_cp_estimate(x, q);
      rows.push_back(Json{{"q", q.value()}, {"k_hat", est.k_hat}, {"tau_hat", est.tau_hat}, {"statistic", est.value}});
    }
    r.results["rows"] = rows;
    r.timing["wall_seconds"] = clock.seconds();
    emit(out, r, c.csv, "rows");
    return kExitOk;
  }

  WbsConfig cfg;
  cfg.M = a.intervals;
  cfg.extra_len = a.extra_len;
  cfg.level = a.level;
  cfg.R = a.calib_reps;
  cfg.p0 = a.p0;
  cfg.rule = a.level_rule == "bonferroni" ? LevelRule::Bonferroni : LevelRule::Running;
  cfg.orientation = a.orientation == "literal" ? PValueOrientation::Literal : PValueOrientation::Upper;
  cfg.threads = c.threads;
  cfg.interval_seed = seed_or_sample(a.interval_seed, "--interval-seed", err);
  const bool needs_tables = !(orders.size() == 1 && a.threshold);
  if (needs_tables) cfg.calibration_seed = seed_or_sample(a.calib_seed, "--calib-seed", err);
  r.config["M"] = cfg.M;
  r.config["min_len"] = cfg.resolved_min_len(orders.max().value());
  r.seeds["interval_seed"] = cfg.interval_seed;

  const ScenarioOptions so = c.scenario();
  std::map<int, NullTable> tables;
  if (needs_tables) {
    r.config["calib_reps"] = cfg.R;
    r.seeds["calib_seed"] = cfg.calibration_seed;
    for (const EvenOrder& q : orders) {
      tables[q.value()] = calibrated_table(wbs_null_spec(x.n(), x.p(), q.value(), orders.max().value(), cfg), so);
    }
  }
  WbsResult res;
  if (orders.size() == 1) {
    const double xi = a.threshold ? *a.threshold : quantile(tables.begin()->second, cfg.level);
    if (!a.threshold) r.config["threshold_level"] = cfg.level;
    r.config["threshold"] = xi;
    res = wbs_detect(x, orders.max(), cfg, xi);
  } else {
    r.config["p0"] = cfg.p0;
    r.config["level_rule"] = a.level_rule;
    r.config["p_orientation"] = a.orientation;
    res = wbs_adaptive(x, orders, cfg, tables);
  }
  Json rows = Json::array();
  for (const auto& b : res.per_break) {
    Json row{{"location", b.location}, {"s", b.interval.s}, {"e", b.interval.e}, {"q", b.q},
             {"statistic", b.statistic}};
    if (orders.size() > 1) row["p_value"] = b.p_value;
    rows.push_back(row);
  }
  r.results["breaks"] = res.breaks.breaks();
  r.results["rows"] = rows;
  r.timing["wall_seconds"] = clock.seconds();
  emit(out, r, c.csv, "rows");
  return kExitOk;
}

// Each row holds an m x m adjacency matrix, row-major.
CsvMatrix adjacency_to_vech(const CsvMatrix& raw, std::size_t* nodes) {
  const std::size_t p = raw.data.p();
  const auto m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(p))));
  if (m < 2 || m * m != p) {
    throw Error(ErrorCode::DimensionMismatch,
                "network rows need m*m columns for some m >= 2, got " + std::to_string(p));
  }
  std::vector<double> values;
  values.reserve(raw.data.n() * m * (m - 1) / 2);
  for (std::size_t t = 0; t < raw.data.n(); ++t) {
    const auto row = raw.data.row(t);
    SquareMatrix a{m, std::vector<double>(row.begin(), row.end())};
    try {
      const auto v = vech(a);
      values.insert(values.end(), v.begin(), v.end());
    } catch (const Error& e) {
      throw Error(e.code(), "row " + std::to_string(t + 1) + ": " + e.what());
    }
  }
  *nodes = m;
  return CsvMatrix{DataMatrix(raw.data.n(), m * (m - 1) / 2, std::move(values)), {}};
}

void write_sidecar(const std::string& path, std::size_t m) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  f << Json{{"m", m}, {"ordering", "strict-lower-column-major"}}.dump(2) << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"lqcp: L_q-norm change-point testing and estimation for high-dimensional panels", "lqcp"};
  app.require_subcommand(1);

  Common common;
  TestArgs test_args;
  EstimateArgs est_args;

  auto* test = app.add_subcommand("test", "test for a single change point in a CSV panel");
  test->add_option("data", test_args.path, "CSV file")->required()->check(CLI::ExistingFile);
  add_test_options(test, test_args);
  add_common(test, common, true);

  auto* estimate = app.add_subcommand("estimate", "locate change points in a CSV panel");
  estimate->add_option("data", est_args.path, "CSV file")->required()->check(CLI::ExistingFile);
  add_estimate_options(estimate, est_args);
  add_common(estimate, common, true);

  NullSpec cal;
  std::string cal_kind = "single";
  std::optional<std::uint64_t> cal_seed, cal_intervals_seed;
  std::string cal_out;
  auto* calibrate = app.add_subcommand("calibrate", "simulate a null table");
  calibrate->add_option("--kind", cal_kind, "single, wbs-max or scan")
      ->check(CLI::IsMember({"single", "wbs-max", "scan"}));
  calibrate->add_option("--q", cal.q, "even order");
  calibrate->add_option("--n", cal.n_sim, "series length")->required();
  calibrate->add_option("--p", cal.p_sim, "dimension (capped at 200)")->required();
  calibrate->add_option("--reps", cal.reps, "replicates R")->check(CLI::PositiveNumber);
  calibrate->add_option("--seed", cal_seed, "table seed");
  calibrate->add_option("--intervals", cal.M, "wbs-max: number of intervals M");
  calibrate->add_option("--intervals-seed", cal_intervals_seed, "wbs-max: interval sample seed");
  calibrate->add_option("--min-len", cal.min_len, "wbs-max: minimum e - s (0: 4q-1)");
  calibrate->add_option("--stride", cal.stride, "scan: endpoint stride (0: n/100)");
  calibrate->add_option("--out", cal_out, "write the table here instead of stdout");
  add_common(calibrate, common, false);

  std::string scenario;
  std::vector<std::string> sets;
  bool list = false;
  auto* simulate = app.add_subcommand("simulate", "run a simulation scenario");
  simulate->add_option("scenario", scenario, "scenario name");
  simulate->add_option("--set", sets, "override key=value (repeatable)");
  simulate->add_flag("--list", list, "list scenarios and their settings");
  add_common(simulate, common, false);

  std::string export_path;
  auto* network = app.add_subcommand("network", "adjacency-matrix series: vech, then test or estimate");
  network->require_subcommand(1);
  network->add_option("--export", export_path, "also write the vech panel as CSV with a .json sidecar");
  auto* net_test = network->add_subcommand("test", "single change-point test on vech(A_t)");
  net_test->add_option("data", test_args.path, "CSV, one m*m adjacency matrix per row")->required()->check(
      CLI::ExistingFile);
  add_test_options(net_test, test_args);
  add_common(net_test, common, true);
  auto* net_est = network->add_subcommand("estimate", "change-point estimation on vech(A_t)");
  net_est->add_option("data", est_args.path, "CSV, one m*m adjacency matrix per row")->required()->check(
      CLI::ExistingFile);
  add_estimate_options(net_est, est_args);
  add_common(net_est, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunReport report;
  report.command = echo(argc, argv);
  try {
    if (test->parsed()) {
      const CsvMatrix data = load_csv_matrix(test_args.path, header_mode(common.header));
      record_data(report, test_args.path, data);
      return run_test(test_args, common, data, report, out, err);
    }
    if (estimate->parsed()) {
      const CsvMatrix data = load_csv_matrix(est_args.path, header_mode(common.header));
      record_data(report, est_args.path, data);
      return run_estimate(est_args, common, data, report, out, err);
    }
    if (network->parsed()) {
      const std::string& path = net_test->parsed() ? test_args.path : est_args.path;
      const CsvMatrix raw = load_csv_matrix(path, header_mode(common.header));
      std::size_t m = 0;
      const CsvMatrix data = adjacency_to_vech(raw, &m);
      record_data(report, path, data);
      report.config["m"] = m;
      report.config["ordering"] = "strict-lower-column-major";
      if (!export_path.empty()) {
        write_csv_matrix(export_path, data.data);
        write_sidecar(export_path + ".json", m);
      }
      return net_test->parsed() ? run_test(test_args, common, data, report, out, err)
                                : run_estimate(est_args, common, data, report, out, err);
    }
    if (calibrate->parsed()) {
      cal.kind = null_kind_from_string(cal_kind);
      cal.p_sim = calibration_dim(cal.p_sim);
      cal.seed = seed_or_sample(cal_seed, "--seed", err);
      if (cal.kind == NullKind::WbsMax) {
        if (cal.M == 0) throw Error(ErrorCode::InvalidConfig, "wbs-max tables need --intervals");
        cal.intervals_seed = seed_or_sample(cal_intervals_seed, "--intervals-seed", err);
      }
      Stopwatch clock;
      const NullTable table = calibrated_table(cal, common.scenario());
      if (cal_out.empty()) {
        out << to_json(table);
        return kExitOk;
      }
      save_null_table(table, cal_out);
      const NullSpec full = table.spec;
      report.config["kind"] = cal_kind;
      report.config["q"] = full.q;
      report.config["n"] = full.n_sim;
      report.config["p"] = full.p_sim;
      report.config["reps"] = full.reps;
      if (full.kind == NullKind::WbsMax) {
        report.config["M"] = full.M;
        report.config["min_len"] = full.min_len;
        report.seeds["intervals_seed"] = full.intervals_seed;
      }
      if (full.kind == NullKind::Scan) report.config["stride"] = full.stride;
      report.seeds["seed"] = full.seed;
      report.results["path"] = cal_out;
      report.results["quantiles"] = Json{{"0.90", quantile(table, 0.90)},
                                         {"0.95", quantile(table, 0.95)},
                                         {"0.99", quantile(table, 0.99)}};
      report.timing["wall_seconds"] = clock.seconds();
      out << report.dump();
      return kExitOk;
    }
    if (simulate->parsed()) {
      if (list || scenario.empty()) {
        for (const auto& name : scenario_names()) {
          out << name;
          for (const auto& [k, v] : scenario_defaults(name)) out << " " << k << "=" << v;
          out << "\n";
        }
        return list ? kExitOk : kExitUsage;
      }
      std::map<std::string, std::string> overrides;
      for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--set expects key=value, got " + s);
        overrides[s.substr(0, eq)] = s.substr(eq + 1);
      }
      scenario_defaults(scenario);
      if (!overrides.count("seed")) {
        const std::uint64_t s = fresh_seed();
        err << "lqcp: sampled --set seed=" << s << "\n";
        overrides["seed"] = std::to_string(s);
      }
      RunReport rep = run_scenario(scenario, overrides, common.scenario());
      rep.command = report.command;
      emit(out, rep, common.csv, "rows");
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "lqcp: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "lqcp: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace lqcp::cli
