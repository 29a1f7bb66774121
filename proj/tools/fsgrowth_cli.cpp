#include "fsgrowth/fsgrowth.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace fsgrowth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config;
  std::string out;
  int jobs = 1;
  bool dump_matrices = false;
  std::string suite;
  std::string what;
};

// Runs fn(0..n-1) on up to `jobs` threads; results are written by index so
// the output order never depends on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(jobs, n); ++t)
    pool.emplace_back([&] {
      for (int k = next++; k < n; k = next++) {
        try {
          fn(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("output: cannot create directory " + dir);
  return p;
}

RunConfig config_or_default(const Options& o) {
  if (!o.config.empty()) return load_run_config(o.config);
  json root = {{"schema_version", kSchemaVersion}, {"params", {{"zeta", 0.1}}}};
  return parse_run_config(root);
}

int cmd_run(const Options& o) {
  if (o.config.empty()) throw ConfigError("run: --config is required");
  const RunConfig cfg = load_run_config(o.config);
  const TwoPhaseDomain d = cfg.domain();
  const InitialData w0 = cfg.initial_data(d);
  const std::string hash = config_hash(cfg.raw);
  const fs::path out = prepare_out(o.out.empty() ? cfg.output.dir : o.out);

  if (o.dump_matrices) {
    const LinearBlock lin(d, cfg.params, cfg.driver.dt);
    const std::pair<const char*, const SpMat*> mats[] = {{"stokes.mtx", &lin.stokes().matrix()},
                                                         {"heat_fluid.mtx", &lin.heat(Phase::Fluid).matrix()},
                                                         {"heat_solid.mtx", &lin.heat(Phase::Solid).matrix()}};
    for (const auto& [name, A] : mats) {
      std::ofstream f(out / name);
      write_matrix_market(f, *A, "config_hash=" + hash);
    }
  }

  const Trajectory tr = run_continuation(w0, cfg.T_total, cfg.driver, cfg.params, d);
  {
    std::ofstream csv(out / "trajectory.csv");
    write_trajectory_csv(csv, tr, d, hash, cfg.output.cadence);
  }
  json windows = json::array();
  for (const auto& r : tr.reports) windows.push_back(to_json(r));
  write_json_file(out / "windows.json", {{"config_hash", hash}, {"windows", windows}});

  const NonnegativityReport nn = nonnegativity_audit(tr);
  const DeterminantAudit det = determinant_audit(tr, cfg.params, d);
  json files = {"trajectory.csv", "windows.json", "manifest.json"};
  if (o.dump_matrices) {
    files.push_back("stokes.mtx");
    files.push_back("heat_fluid.mtx");
    files.push_back("heat_solid.mtx");
  }
  write_json_file(out / "manifest.json", {{"config_hash", hash},
                                         {"config", cfg.raw},
                                         {"grid", grid_json(d)},
                                         {"versions", versions_json()},
                                         {"levels", tr.levels.size()},
                                         {"T_total", cfg.T_total},
                                         {"compatibility", to_json(tr.compatibility)},
                                         {"nonnegativity", to_json(nn)},
                                         {"determinants", {{"fluid", det.fluid}, {"solid", det.solid}}},
                                         {"warnings", warning_count()},
                                         {"files", files}});
  std::cout << "run: " << tr.reports.size() << " windows, " << tr.levels.size() << " levels, config " << hash
            << ", output in " << out.string() << '\n';
  return kExitOk;
}

int cmd_mms(const Options& o) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = mms::suite_names();
    suites.push_back("heat-time");
  } else {
    bool known = o.suite == "heat-time";
    for (const auto& s : mms::suite_names()) known = known || s == o.suite;
    if (!known) throw ConfigError("mms: unknown suite '" + o.suite + "'");
    suites = {o.suite};
  }
  std::vector<std::vector<mms::Table>> tables(suites.size());
  parallel_for(static_cast<int>(suites.size()), o.jobs, [&](int k) {
    if (suites[k] == "stokes-neumann" || suites[k] == "stokes-dirichlet") {
      const OuterBoundary bc = suites[k] == "stokes-neumann" ? OuterBoundary::Neumann : OuterBoundary::Dirichlet;
      tables[k] = mms::stokes_tables(bc);
    } else {
      tables[k] = {mms::run_suite(suites[k])};
    }
  });
  const std::string hash = config_hash({{"command", "mms"}, {"suite", o.suite}});
  std::ostringstream csv;
  csv << "# config_hash=" << hash << '\n' << "suite,quantity,n,h,error,slope\n" << std::setprecision(10);
  for (const auto& group : tables)
    for (const auto& t : group)
      for (const auto& r : t.rows)
        csv << t.suite << ',' << t.quantity << ',' << r.n << ',' << r.h << ',' << r.error << ',' << r.slope << '\n';
  std::cout << csv.str();
  if (!o.out.empty()) {
    std::ofstream f(prepare_out(o.out) / ("mms_" + o.suite + ".csv"));
    f << csv.str();
  }
  return kExitOk;
}

json diagnose_contraction(const RunConfig& cfg, int jobs) {
  const TwoPhaseDomain d = cfg.domain();
  const InitialData w0 = cfg.initial_data(d);
  std::vector<diag::LadderResult> res(3);
  parallel_for(3, jobs, [&](int k) {
    res[k] = diag::contraction_ladder(d, cfg.params, cfg.driver.norms, w0, static_cast<std::uint64_t>(k + 1));
  });
  json pairs = json::array();
  bool ok = true;
  for (const auto& r : res) {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"T", row.T}, {"ratio", row.ratio}});
    pairs.push_back({{"seed", r.seed}, {"rows", rows}, {"slope", r.slope()}, {"pass", r.strictly_decreasing()}});
    ok = ok && r.strictly_decreasing();
  }
  return {{"what", "contraction"}, {"delta", cfg.driver.norms.delta()}, {"pairs", pairs}, {"pass", ok}};
}

json diagnose_extension(int jobs) {
  const std::vector<double> ss = {0.6, 0.75, 0.9};
  std::vector<std::vector<diag::ExtensionRow>> parts(ss.size());
  parallel_for(static_cast<int>(ss.size()), jobs, [&](int k) { parts[k] = diag::extension_sweep({ss[k]}); });
  json rows = json::array();
  bool ok = true;
  for (const auto& part : parts)
    for (const auto& r : part) {
      rows.push_back({{"s", r.s}, {"q", r.q}, {"T", r.T}, {"input", r.input}, {"ratio", r.ratio}, {"bound", r.bound},
                      {"pass", r.pass}});
      ok = ok && r.pass;
    }
  json s1 = json::array();
  for (double q : {3.0, 4.0, 6.0}) {
    const double defect = diag::extension_s1_defect(q);
    s1.push_back({{"q", q}, {"defect", defect}, {"pass", defect <= 1e-10}});
    ok = ok && defect <= 1e-10;
  }
  return {{"what", "extension"}, {"sweep", rows}, {"s_equals_1", s1}, {"pass", ok}};
}

json diagnose_kinematics(const RunConfig& cfg) {
  const diag::KinematicsReport k = diag::kinematics_report(cfg.driver.norms.q, cfg.params.n_dim);
  return {{"what", "kinematics"},
          {"piola", {{"h", k.h}, {"residual", k.piola}, {"slope", k.piola_slope}, {"pass", k.piola_slope >= 1.8}}},
          {"det_derivative", {{"dt", k.det_dt}, {"residual", k.det}, {"slope", k.det_slope}, {"pass", k.det_slope >= 1.8}}},
          {"inversion", {{"max_defect", k.inversion}, {"pass", k.inversion <= 1e-12}}},
          {"finv_decay",
           {{"T", k.Ts}, {"sup_norm", k.finv}, {"slope", k.finv_slope}, {"target", k.finv_slope_target},
            {"pass", k.finv_slope >= k.finv_slope_target}}},
          {"pass", k.pass()}};
}

int cmd_diagnose(const Options& o) {
  const RunConfig cfg = config_or_default(o);
  json report;
  if (o.what == "contraction") report = diagnose_contraction(cfg, o.jobs);
  else if (o.what == "extension") report = diagnose_extension(o.jobs);
  else if (o.what == "kinematics") report = diagnose_kinematics(cfg);
  else throw ConfigError("diagnose: expected contraction, extension or kinematics, got '" + o.what + "'");
  report["config_hash"] = config_hash(cfg.raw);
  std::cout << report.dump(2) << '\n';
  if (!o.out.empty()) write_json_file(prepare_out(o.out) / ("diagnose_" + o.what + ".json"), report);
  return kExitOk;
}

int cmd_check_compat(const Options& o) {
  if (o.config.empty()) throw ConfigError("check-compat: --config is required");
  const RunConfig cfg = load_run_config(o.config);
  const TwoPhaseDomain d = cfg.domain();
  const CompatibilityReport r = check_compatibility(cfg.initial_data(d), cfg.params, d, cfg.driver.compat_tol);
  json j = to_json(r);
  j["config_hash"] = config_hash(cfg.raw);
  std::cout << j.dump(2) << '\n';
  if (!o.out.empty()) write_json_file(prepare_out(o.out) / "compatibility.json", j);
  if (!r.pass()) {
    std::cerr << "check-compat: initial data violate the compatibility conditions\n";
    return kExitConfig;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrangian fluid-structure growth solver"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--jobs", o.jobs, "threads for independent sweep entries")->check(CLI::PositiveNumber);
  app.add_flag("--dump-matrices", o.dump_matrices, "write the linear-block matrices (run only)");
  app.set_version_flag("--version", kVersion);

  auto* run = app.add_subcommand("run", "time continuation of the coupled problem");
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence table");
  mms_cmd->add_option("suite", o.suite, "stokes-neumann | stokes-dirichlet | heat | heat-time | elliptic | all")
      ->required();
  auto* diag_cmd = app.add_subcommand("diagnose", "property diagnostics");
  diag_cmd->add_option("what", o.what, "contraction | extension | kinematics")->required();
  auto* compat = app.add_subcommand("check-compat", "compatibility conditions of the initial data");
  for (auto* sub : {run, mms_cmd, diag_cmd, compat}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (mms_cmd->parsed()) return cmd_mms(o);
    if (diag_cmd->parsed()) return cmd_diagnose(o);
    if (compat->parsed()) return cmd_check_compat(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::out_of_range& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitOk;
}
