#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "svg_plot.hpp"
#include "windfarm/appendix.hpp"
#include "windfarm/config.hpp"
#include "windfarm/error.hpp"
#include "windfarm/export.hpp"
#include "windfarm/simulation.hpp"

namespace windfarm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kSeedEnv = "WINDFARM_ROM_SEED";

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig resolve_config(const std::string& path) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t seed = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
      throw ConfigError(std::string(kSeedEnv) + " must be an unsigned integer", "seed");
    }
    cfg.scenario.seed = seed;
  }
  return cfg;
}

json derived_json(const DerivedParams& d) {
  return {{"K_mrr", d.K_mrr},         {"L_s_prime", d.L_s_prime}, {"R_2", d.R_2},
          {"R_1", d.R_1},             {"T_r", d.T_r},             {"X_m", d.X_m},
          {"cp_scale", d.cp_scale},   {"lambda_opt", d.lambda_opt}, {"v_rated", d.v_rated},
          {"omega_t_base", d.omega_t_base}};
}

json stats_json(const IntegratorStats& s) {
  return {{"accepted_steps", s.accepted_steps},
          {"rejected_steps", s.rejected_steps},
          {"rhs_evaluations", s.rhs_evaluations},
          {"wall_s", static_cast<double>(s.wall_ns) * 1e-9}};
}

json base_manifest(const std::string& command, const RunConfig& cfg, const DerivedParams& d) {
  return {{"tool", "windfarm-rom"},
          {"version", WINDFARM_VERSION},
          {"command", command},
          {"seed", cfg.scenario.seed},
          {"config", json::parse(serialize_config(cfg))},
          {"derived", derived_json(d)}};
}

void write_config_and_manifest(const fs::path& dir, const RunConfig& cfg, json manifest,
                               std::vector<std::string> outputs) {
  const fs::path resolved = dir / "resolved_config.json";
  write_file_atomic(resolved, serialize_config(cfg));
  outputs.push_back(resolved.string());
  manifest["outputs"] = outputs;
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string config;
  std::string mode = "single";
  std::string out = "out";
  int n = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  RunConfig cfg = resolve_config(a.config);
  if (a.n > 0) cfg.scenario.n_turbines = a.n;
  const int n = cfg.scenario.n_turbines;

  const auto t0 = Clock::now();
  const PreparedScenario ps = prepare(cfg.params, cfg.scenario);
  const double t_prep = seconds_since(t0);

  Trajectory tr;
  std::string csv;
  if (a.mode == "single") {
    tr = run_single(ps);
    csv = trajectory_csv(tr);
  } else if (a.mode == "farm") {
    tr = run_farm(ps, n);
    csv = farm_csv(tr, n);
  } else {
    tr = run_aggregate(ps, n);
    csv = trajectory_csv(tr);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path traj = dir / "trajectory.csv";
  write_file_atomic(traj, csv);

  json m = base_manifest("simulate", cfg, ps.single.derived);
  m["mode"] = a.mode;
  m["n"] = a.mode == "single" ? 1 : n;
  m["integrator_stats"] = stats_json(tr.stats);
  m["timings"] = {{"steady_state_s", t_prep}, {"integration_s", tr.stats.wall_ns * 1e-9}};
  write_config_and_manifest(dir, cfg, m, {traj.string()});

  out << "wrote " << traj.string() << " (" << tr.size() << " samples, "
      << tr.stats.accepted_steps << " steps)\n";
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string config;
  std::vector<int> n{2, 3, 8};
  std::string out = "out";
  double threshold = 1e-5;
  std::string unscale;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(a.config);
  const PreparedScenario ps = prepare(cfg.params, cfg.scenario);
  if (!a.unscale.empty()) {
    // fail fast on a bad name before any long run
    unscale_parameter(ps.single, ps.single, a.unscale);
  }

  const fs::path dir(a.out);
  fs::create_directories(dir);
  std::vector<std::string> outputs;
  json runs = json::array();
  bool all_pass = true;

  out << "     n  global_max_rel  worst_state   farm_s    agg_s  speedup  result\n";
  for (int n : a.n) {
    const Trajectory farm = run_farm(ps, n);
    ParameterSet agg = scale_params(ps.single.params, ps.single.derived, n);
    if (!a.unscale.empty()) agg = unscale_parameter(agg, ps.single, a.unscale);
    const Trajectory aggr = run_aggregate(ps, n, &agg);
    const EquivalenceReport rep = verify_equivalence(farm, aggr, n, a.threshold);
    all_pass = all_pass && rep.pass;

    const fs::path report = dir / ("report_n" + std::to_string(n) + ".json");
    write_file_atomic(report, report_json(rep));
    outputs.push_back(report.string());
    runs.push_back({{"n", n},
                    {"global_max_rel_error", rep.global_max_rel_error},
                    {"worst_state", state_names()[rep.worst_state]},
                    {"pass", rep.pass},
                    {"farm_stats", stats_json(farm.stats)},
                    {"aggregate_stats", stats_json(aggr.stats)},
                    {"speedup", rep.speedup}});

    std::ostringstream row;
    row << std::setw(6) << n << "  " << std::setw(14) << std::scientific << std::setprecision(3)
        << rep.global_max_rel_error << "  " << std::setw(11) << state_names()[rep.worst_state]
        << std::fixed << std::setprecision(3) << "  " << std::setw(7) << rep.farm_wall_s << "  "
        << std::setw(7) << rep.aggregate_wall_s << "  " << std::setw(7) << std::setprecision(2)
        << rep.speedup << "  " << (rep.pass ? "PASS" : "FAIL") << "\n";
    out << row.str();
  }

  json m = base_manifest("verify", cfg, ps.single.derived);
  m["threshold"] = a.threshold;
  m["unscale"] = a.unscale;
  m["runs"] = runs;
  write_config_and_manifest(dir, cfg, m, outputs);
  return all_pass ? kOk : kEquivalenceFailure;
}

// ---- crosscheck -----------------------------------------------------------

struct CrosscheckArgs {
  std::string config;
  std::size_t samples = 100;
  std::string out = "crosscheck.csv";
};

int cmd_crosscheck(const CrosscheckArgs& a, std::ostream& out) {
  const RunConfig cfg = resolve_config(a.config);
  const DerivedParams d = derive(cfg.params);
  const auto rows = crosscheck(cfg.params, d, a.samples, cfg.scenario.seed);
  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, crosscheck_csv(rows));
  const auto disagree = std::count_if(rows.begin(), rows.end(),
                                      [](const DiscrepancyRow& r) { return !agrees(r); });
  out << "wrote " << path.string() << ": " << rows.size() << " rows, " << disagree
      << " disagreeing\n";
  return kOk;
}

// ---- plot -----------------------------------------------------------------

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // by column
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  Csv csv;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + " is empty");
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) csv.columns.push_back(col);
  }
  csv.data.resize(csv.columns.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < csv.columns.size(); ++c) {
      const std::size_t end = std::min(line.find(',', pos), line.size());
      double v = 0.0;
      const auto res = std::from_chars(line.data() + pos, line.data() + end, v);
      if (res.ec != std::errc{}) {
        throw ConfigError(path + ": bad number in column " + csv.columns[c], csv.columns[c], lineno);
      }
      csv.data[c].push_back(v);
      pos = end + 1;
    }
  }
  return csv;
}

struct PlotArgs {
  std::vector<std::string> files;
  std::vector<std::string> vars;
  std::string out = "plot.svg";
};

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  if (a.vars.empty()) {
    err << "plot: --vars needs at least one variable name\n";
    return kConfigError;
  }
  std::vector<Panel> panels;
  for (const auto& v : a.vars) panels.push_back({v, {}});

  for (const auto& file : a.files) {
    const Csv csv = read_csv(file);
    auto col = [&](const std::string& name) -> std::ptrdiff_t {
      const auto it = std::find(csv.columns.begin(), csv.columns.end(), name);
      return it == csv.columns.end() ? -1 : it - csv.columns.begin();
    };
    const std::ptrdiff_t t_col = col("t");
    const std::ptrdiff_t rep_col = col("replica");
    if (t_col < 0) {
      err << "plot: " << file << " has no t column\n";
      return kConfigError;
    }
    for (std::size_t p = 0; p < a.vars.size(); ++p) {
      const std::ptrdiff_t c = col(a.vars[p]);
      if (c < 0) {
        err << "plot: unknown variable '" << a.vars[p] << "' in " << file
            << "; available columns:";
        for (const auto& name : csv.columns) err << ' ' << name;
        err << '\n';
        return kConfigError;
      }
      Series s{fs::path(file).parent_path().filename().string() + "/" +
                   fs::path(file).filename().string(),
               {},
               {}};
      const auto& tc = csv.data[static_cast<std::size_t>(t_col)];
      const auto& vc = csv.data[static_cast<std::size_t>(c)];
      for (std::size_t k = 0; k < tc.size(); ++k) {
        if (rep_col >= 0 && csv.data[static_cast<std::size_t>(rep_col)][k] != 0.0) continue;
        s.t.push_back(tc[k]);
        s.y.push_back(vc[k]);
      }
      panels[p].series.push_back(std::move(s));
    }
  }

  const fs::path path(a.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, render_svg(panels));
  out << "wrote " << path.string() << "\n";
  return kOk;
}

int report_error(std::ostream& err, const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what();
    if (!e.field().empty()) err << " [field " << e.field() << "]";
    if (e.line() != 0) err << " [line " << e.line() << "]";
    err << '\n';
    return kConfigError;
  } catch (const StiffnessError& e) {
    // component index modulo 27 names the state within its replica
    err << "integration failed at t=" << e.time() << " s: " << e.what() << " (state "
        << state_names()[e.component() % kStateSize] << ")\n";
    return kIntegrationFailure;
  } catch (const IntegrationError& e) {
    err << "integration failed at t=" << e.time() << " s: " << e.what() << '\n';
    return kIntegrationFailure;
  } catch (const SteadyStateError& e) {
    err << "steady state: " << e.what() << " (residual " << e.residual() << ")\n";
    return kIntegrationFailure;
  } catch (const ModelError& e) {
    err << "model error in " << e.subsystem() << ": " << e.what() << '\n';
    return kIntegrationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIntegrationFailure;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wind farm aggregate model: simulate, verify, plot, crosscheck"};
  app.name("windfarm-rom");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one scenario and write trajectory.csv");
  s->add_option("config", sim.config, "JSON config (defaults when omitted)");
  s->add_option("--mode", sim.mode, "single | farm | aggregate")
      ->check(CLI::IsMember({"single", "farm", "aggregate"}));
  s->add_option("--out", sim.out, "Output directory");
  s->add_option("--n", sim.n, "Override scenario.n_turbines")->check(CLI::PositiveNumber);

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Farm vs aggregate equivalence and timing");
  v->add_option("config", ver.config, "JSON config (defaults when omitted)");
  v->add_option("--n", ver.n, "Turbine counts, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  v->add_option("--out", ver.out, "Output directory");
  v->add_option("--threshold", ver.threshold, "Pass threshold on the global max relative error");
  v->add_option("--unscale", ver.unscale,
                "Negative control: leave this scaled parameter at its single-turbine value");

  PlotArgs plt;
  auto* p = app.add_subcommand("plot", "Overlay CSV columns as an SVG chart");
  p->add_option("files", plt.files, "Trajectory CSV files")->required();
  p->add_option("--vars", plt.vars, "Column names, comma separated")->delimiter(',');
  p->add_option("--out", plt.out, "SVG path");

  CrosscheckArgs cc;
  auto* c = app.add_subcommand("crosscheck", "Compare the vector field with its printed form");
  c->add_option("config", cc.config, "JSON config (defaults when omitted)");
  c->add_option("--samples", cc.samples, "Number of random states");
  c->add_option("--out", cc.out, "CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (s->parsed()) return cmd_simulate(sim, out);
    if (v->parsed()) return cmd_verify(ver, out);
    if (p->parsed()) return cmd_plot(plt, out, err);
    if (c->parsed()) return cmd_crosscheck(cc, out);
  } catch (...) {
    return report_error(err, std::current_exception());
  }
  return kConfigError;
}

}  // namespace windfarm::cli
