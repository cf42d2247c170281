// storeplan: command-line front end for the storage planning model.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "storeplan/app/experiment.hpp"
#include "storeplan/app/plot_data.hpp"
#include "storeplan/formulation/model.hpp"
#include "storeplan/io/config.hpp"
#include "storeplan/io/dataset.hpp"
#include "storeplan/io/results.hpp"
#include "storeplan/peakshave/flatten.hpp"
#include "storeplan/solver/mps.hpp"

namespace fs = std::filesystem;
using namespace storeplan;

namespace {

constexpr int kExitFailed = 1;  // an experiment failed to solve or a check failed
constexpr int kExitUsage = 2;   // bad input, configuration or data

const char* const kEpilog = R"(Configuration:
  Settings come from defaults, then the --config file, then --set and --<section.key> flags in
  command-line order. `storeplan config --keys` lists every key; `storeplan config --defaults`
  prints a complete configuration file.

Environment:
  STOREPLAN_BACKEND          solver backend when --backend is not given (overrides solver.backend)
  STOREPLAN_BACKEND_COMMAND  command registered as backend "external" (reads MPS on stdin)

Exit status: 0 if every experiment solved (optimal, or within the configured MIP gap) and passed
its checks; 1 if any did not; 2 for usage, configuration or data errors.)";

struct Options {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;  // key, value in command-line order
  std::string backend;
};

void add_config_options(CLI::App* app, Options& o) {
  app->add_option("-c,--config", o.config_path, "configuration file")->check(CLI::ExistingFile);
  app->add_option_function<std::vector<std::string>>(
         "--set",
         [&o](const std::vector<std::string>& v) {
           for (const auto& a : v) {
             const auto eq = a.find('=');
             if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected section.key=value, got " + a);
             o.overrides.emplace_back(a.substr(0, eq), a.substr(eq + 1));
           }
         },
         "override a configuration key, section.key=value (repeatable)")
      ->type_name("KEY=VALUE")
      ->trigger_on_parse();
  for (const auto& key : io::config_keys()) {
    app->add_option_function<std::string>(
           "--" + key, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, "")
        ->type_name("VALUE")
        ->group("Configuration keys")
        ->trigger_on_parse();
  }
}

void add_backend_option(CLI::App* app, Options& o) {
  app->add_option("--backend", o.backend, "solver backend: reference, highs, external");
}

io::PlanningConfig resolve_config(const Options& o) {
  io::PlanningConfig c = o.config_path.empty() ? io::PlanningConfig{} : io::load_config(o.config_path);
  for (const auto& [key, value] : o.overrides) io::apply_override(c, key + "=" + value, fs::current_path());
  c.validate();
  return c;
}

io::BuiltInstance load_instance(const io::PlanningConfig& c) {
  if (c.load_csv.empty()) throw io::ConfigError("load.csv is not set; pass --config or --load.csv");
  return io::build_instance(c, io::load_dataset(c));
}

// Picks the experiment: a case-study name (exp1..exp9) or the [experiment] section as configured.
ExperimentConfig pick_experiment(const io::PlanningConfig& c, const std::string& name) {
  if (name.empty()) return c.experiment;
  for (const auto& e : app::case_study_suite(c.experiment))
    if (e.name == name) return e;
  throw io::ConfigError(fmt::format("unknown case-study experiment '{}' (expected exp1..exp9)", name));
}

int period_of_year(const io::PlanningConfig& c, int year) {
  const int n = year - c.first_year;
  if (n < 0 || n >= c.periods) {
    throw std::out_of_range(
        fmt::format("year {} is outside the horizon {}..{}", year, c.first_year, c.first_year + c.periods - 1));
  }
  return n;
}

std::string fmt_opt(const std::optional<double>& v, int digits = 3) {
  return v ? fmt::format("{:.{}f}", *v, digits) : "na";
}

void print_result(const io::ExperimentResult& r) {
  if (r.error) {
    fmt::print("{:<8} {:<14} FAILED: {}\n", r.name, r.status, *r.error);
    return;
  }
  const char* comp = r.complementarity_violations < 0 ? "skipped (negative prices)"
                     : r.complementarity_violations == 0 ? "ok"
                                                         : "VIOLATED";
  fmt::print("{:<8} {:<14} total {:>10.3f} M$  gap {:.2e}  time {:>7.1f} s  storage {:>7.3f} MW  "
             "constraints {}  complementarity {}\n",
             r.name, r.status, r.costs.total / 1e6, r.mip_gap, r.solve_time, r.metrics.storage_build,
             r.violations.empty() ? "ok" : fmt::format("{} VIOLATED", r.violations.size()), comp);
  for (std::size_t i = 0; i < std::min<std::size_t>(r.violations.size(), 5); ++i) {
    fmt::print("         - {}\n", r.violations[i]);
  }
}

int exit_code(const std::vector<io::ExperimentResult>& results) {
  return std::all_of(results.begin(), results.end(), app::succeeded) ? 0 : kExitFailed;
}

int cmd_run(const Options& o, const std::string& name, const fs::path& out, bool timing) {
  const auto config = resolve_config(o);
  const auto data = load_instance(config);
  const auto experiment = pick_experiment(config, name);
  const auto backend = app::resolve_backend(o.backend, config);
  const auto r = app::run_experiment(experiment, data, backend);
  print_result(r);
  io::write_results({r}, out, timing);
  fmt::print("wrote {}\n", (out / "results.json").string());
  return exit_code({r});
}

int cmd_suite(const Options& o, const std::vector<std::string>& only, int jobs, const fs::path& out, bool timing,
              std::optional<int> plot_year) {
  const auto config = resolve_config(o);
  const auto data = load_instance(config);
  auto suite = app::case_study_suite(config.experiment);
  if (!only.empty()) {
    std::vector<ExperimentConfig> picked;
    for (const auto& n : only) picked.push_back(pick_experiment(config, n));
    suite = std::move(picked);
  }
  const auto backend = app::resolve_backend(o.backend, config);
  fmt::print("running {} experiment(s) on {} thread(s), backend {}\n", suite.size(), std::max(1, jobs), backend);
  const auto results = app::run_suite(suite, data, backend, jobs, [](const io::ExperimentResult& r) {
    print_result(r);
    std::fflush(stdout);
  });
  io::write_results(results, out, timing);
  const int n = period_of_year(config, plot_year.value_or(config.first_year));
  app::emit_plot_data(results, n, out / "plot");
  fmt::print("wrote {} and {}\n", (out / "results.csv").string(), (out / "plot").string());
  return exit_code(results);
}

int cmd_flatten(const Options& o, std::optional<int> year, double sweep_step) {
  const auto config = resolve_config(o);
  const auto data = load_instance(config);
  const int n = period_of_year(config, year.value_or(config.first_year));
  const Tensor3& load = data.full_load;
  std::vector<std::vector<double>> days;
  for (int j = 0; j < load.days(); ++j) {
    std::vector<double> d(load.hours());
    for (int k = 0; k < load.hours(); ++k) d[k] = load(n, j, k);
    days.push_back(std::move(d));
  }
  double sum = 0, peak = 0;
  for (const auto& d : days) {
    sum += std::accumulate(d.begin(), d.end(), 0.0);
    peak = std::max(peak, *std::max_element(d.begin(), d.end()));
  }
  const double average = sum / (static_cast<double>(days.size()) * load.hours());
  const double dt = 1.0;

  if (sweep_step > 0) {
    // roundtrip efficiency split evenly between charging and discharging
    fmt::print("roundtrip_efficiency,flattened_peak_mw,power_mw,power_over_average,duration_h\n");
    for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += sweep_step) {
      StorageSpec s = config.storage;
      s.eta_c = s.eta_d = std::sqrt(std::min(eta, 1.0));
      double flat = 0;
      for (const auto& d : days) flat = std::max(flat, flattened_peak_closed_form(d, std::min(eta, 1.0)));
      const auto bound = eta > 0 ? storage_upper_bound(days, s, dt) : StorageBound{};
      fmt::print("{:.4f},{:.6f},{:.6f},{:.6f},{}\n", eta, flat, bound.power, bound.power / average,
                 fmt_opt(bound.duration, 6));
    }
    return 0;
  }
  const auto bound = storage_upper_bound(days, config.storage, dt);
  const double eta_rt = config.storage.eta_c * config.storage.eta_d;
  double flat = 0;
  for (const auto& d : days) flat = std::max(flat, flattened_peak_closed_form(d, eta_rt));
  fmt::print("year                 {}\n", config.first_year + n);
  fmt::print("days                 {}\n", days.size());
  fmt::print("roundtrip efficiency {:.4f}\n", eta_rt);
  fmt::print("average load         {:.3f} MW\n", average);
  fmt::print("peak load            {:.3f} MW\n", peak);
  fmt::print("flattened peak       {:.3f} MW (largest daily flattened peak)\n", flat);
  fmt::print("storage power bound  {:.3f} MW ({:.1f}% of average load)\n", bound.power, 100.0 * bound.power / average);
  fmt::print("storage duration     {} h\n", fmt_opt(bound.duration, 2));
  return 0;
}

int cmd_export_mps(const Options& o, const std::string& name, const std::string& out) {
  const auto config = resolve_config(o);
  const auto data = load_instance(config);
  const auto m = build_model(data.instance, pick_experiment(config, name));
  const auto text = solver::export_mps(m.problem);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write " + out);
    int binaries = 0;
    for (auto t : m.problem.col_type) binaries += t == solver::VarType::Binary;
    std::cerr << fmt::format("wrote {}: {} columns ({} binary), {} rows\n", out, m.problem.num_cols(), binaries,
                             m.problem.num_rows());
  }
  return 0;
}

int cmd_validate(const Options& o, const fs::path& results_path) {
  const auto config = resolve_config(o);
  const auto data = load_instance(config);
  bool all = true;
  for (const auto& r : io::read_results(results_path)) {
    if (r.error) {
      fmt::print("{:<8} FAIL  no solution saved: {}\n", r.name, *r.error);
      all = false;
      continue;
    }
    const auto report = app::recheck_result(r, data, config.experiment);
    const bool ok = report.ok() && app::succeeded(r);
    all = all && ok;
    fmt::print("{:<8} {}  status {}  constraints {}  complementarity {}  cost mismatch {:.2e}\n", r.name,
               ok ? "PASS" : "FAIL", r.status, report.violations.empty() ? "ok" : fmt::format("{} violated", report.violations.size()),
               report.complementarity_violations < 0 ? "skipped" : fmt::format("{}", report.complementarity_violations),
               report.cost_mismatch);
    for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 5); ++i) {
      fmt::print("         - {}\n", report.violations[i]);
    }
  }
  return all ? 0 : kExitFailed;
}

int cmd_plot(const fs::path& results_path, int period, const fs::path& out) {
  const auto results = io::read_results(results_path);
  app::emit_plot_data(results, period, out);
  fmt::print("wrote plot data to {}\n", out.string());
  return 0;
}

int cmd_config(const Options& o, bool defaults, bool keys) {
  if (keys) {
    for (const auto& k : io::config_keys()) fmt::print("{}\n", k);
    return 0;
  }
  std::cout << io::format_config(defaults ? io::PlanningConfig{} : resolve_config(o));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"storeplan: capacity expansion planning with battery storage"};
  cli.footer(kEpilog);
  cli.require_subcommand(1);
  cli.set_version_flag("--version", "storeplan 1.0");

  Options o;
  fs::path out = "results";
  bool no_timing = false;
  std::string experiment_name;

  auto* run = cli.add_subcommand("run", "solve one experiment and write results.json and results.csv");
  add_config_options(run, o);
  add_backend_option(run, o);
  run->add_option("-e,--experiment", experiment_name,
                  "case-study experiment exp1..exp9 (default: the [experiment] section)");
  run->add_option("-o,--out", out, "output directory")->capture_default_str();
  run->add_flag("--no-timing", no_timing, "omit solve times so reports are reproducible byte for byte");

  std::vector<std::string> only;
  int jobs = 1;
  std::optional<int> plot_year;
  auto* suite = cli.add_subcommand("suite", "run the nine case-study experiments, write the table and plot data");
  add_config_options(suite, o);
  add_backend_option(suite, o);
  suite->add_option("--only", only, "run only these experiments")->delimiter(',');
  suite->add_option("-j,--jobs", jobs, "experiments solved concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  suite->add_option("-o,--out", out, "output directory")->capture_default_str();
  suite->add_option("--plot-year", plot_year, "planning year of the supply heatmaps (default: the first)");
  suite->add_flag("--no-timing", no_timing, "omit solve times so reports are reproducible byte for byte");

  double sweep = 0;
  std::optional<int> flatten_year;
  auto* flatten = cli.add_subcommand("flatten", "peak-shaving potential: storage needed to flatten every daily load");
  add_config_options(flatten, o);
  flatten->add_option("--year", flatten_year, "planning year of the scaled load (default: the first)");
  flatten->add_option("--sweep", sweep, "print a CSV over roundtrip efficiencies 0..1 in this step")
      ->check(CLI::Range(1e-4, 1.0));

  std::string mps_out;
  auto* mps = cli.add_subcommand("export-mps", "write the experiment's MILP in fixed-name MPS format");
  add_config_options(mps, o);
  mps->add_option("-e,--experiment", experiment_name, "case-study experiment exp1..exp9");
  mps->add_option("-o,--out", mps_out, "output file (default: stdout)");

  fs::path results_path;
  auto* validate = cli.add_subcommand("validate", "re-check saved results against the configured data");
  add_config_options(validate, o);
  validate->add_option("results", results_path, "results.json")->required()->check(CLI::ExistingFile);

  int period = 0;
  auto* plot = cli.add_subcommand("plot", "write plot data (savings, supply heatmaps) from saved results");
  plot->add_option("results", results_path, "results.json")->required()->check(CLI::ExistingFile);
  plot->add_option("--period", period, "planning period index of the heatmaps, 0 = first year")->capture_default_str();
  plot->add_option("-o,--out", out, "output directory")->capture_default_str();

  bool defaults = false, keys = false;
  auto* config = cli.add_subcommand("config", "print the effective configuration");
  add_config_options(config, o);
  config->add_flag("--defaults", defaults, "print the built-in defaults instead");
  config->add_flag("--keys", keys, "list every configuration key");

  CLI11_PARSE(cli, argc, argv);

  try {
    app::register_default_backends();
    if (*run) return cmd_run(o, experiment_name, out, !no_timing);
    if (*suite) return cmd_suite(o, only, jobs, out, !no_timing, plot_year);
    if (*flatten) return cmd_flatten(o, flatten_year, sweep);
    if (*mps) return cmd_export_mps(o, experiment_name, mps_out);
    if (*validate) return cmd_validate(o, results_path);
    if (*plot) return cmd_plot(results_path, period, out);
    if (*config) return cmd_config(o, defaults, keys);
  } catch (const std::exception& e) {
    std::cerr << "storeplan: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
