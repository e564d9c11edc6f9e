#include "contact_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "contact_cli/config.hpp"
#include "contact_cli/output.hpp"

namespace contact::cli {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct GlobalFlags {
  std::string output;
  std::string format;
  bool quiet = false;
  std::string config;
};

// Run-description flags; unset values keep the config file or defaults.
struct RunFlags {
  std::optional<std::string> model;
  std::map<std::string, std::optional<double>> params;
  std::optional<std::string> method;
  bool b_map_compat = false;
  bool cvi_explicit_action = false;
  std::optional<double> tau, t_end, t0, s0;
  std::vector<double> q0, p0;
  std::optional<std::uint64_t> sample_every, seed;
  std::string dump_config;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--model", f.model, "kepler | quadratic_oscillator | linear_oscillator");
  for (const auto& [model, params] : model_registry()) {
    for (const auto& [key, value] : params) {
      if (f.params.count(key)) continue;
      std::string flag = key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      cmd->add_option("--" + flag, f.params[key], "parameter of " + model);
    }
  }
  cmd->add_option("--method", f.method, "chi2 | chi4 | chi6 | cvi2 | rk4 | midpoint");
  cmd->add_flag("--b-map-compat", f.b_map_compat,
                "use the printed half potential update in the B map");
  cmd->add_flag("--cvi-explicit-action", f.cvi_explicit_action,
                "use the explicit action update in CVI2");
  cmd->add_option("--tau", f.tau, "step size");
  cmd->add_option("--t-end", f.t_end, "final time");
  cmd->add_option("--t0", f.t0, "initial time");
  cmd->add_option("--q0", f.q0, "initial position (comma separated)")->delimiter(',');
  cmd->add_option("--p0", f.p0, "initial momentum (comma separated)")->delimiter(',');
  cmd->add_option("--s0", f.s0, "initial action");
  cmd->add_option("--sample-every", f.sample_every, "store every k-th step");
  cmd->add_option("--seed", f.seed, "seed for random-state utilities");
  cmd->add_option("--dump-config", f.dump_config, "write the resolved config as JSON");
}

std::string flag_name(const std::string& key) {
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return "--" + flag;
}

RunConfig resolve(const GlobalFlags& g, const RunFlags& f) {
  RunConfig cfg = g.config.empty()
                      ? default_config(f.model.value_or("quadratic_oscillator"))
                      : load_config_file(g.config);
  if (f.model && *f.model != cfg.model) {
    const RunConfig d = default_config(*f.model);
    cfg.model = d.model;
    cfg.params = d.params;
    cfg.q = d.q;
    cfg.p = d.p;
    cfg.s = d.s;
  }
  for (const auto& [key, value] : f.params) {
    if (!value) continue;
    if (!cfg.params.count(key)) {
      throw ConfigError(flag_name(key) + ": not a parameter of " + cfg.model);
    }
    cfg.params[key] = *value;
  }
  if (f.method) cfg.method = *f.method;
  if (f.b_map_compat) cfg.b_map_compat = true;
  if (f.cvi_explicit_action) cfg.cvi_explicit_action = true;
  if (f.tau) cfg.tau = *f.tau;
  if (f.t_end) cfg.t_end = *f.t_end;
  if (f.t0) cfg.t0 = *f.t0;
  if (!f.q0.empty()) cfg.q = f.q0;
  if (!f.p0.empty()) cfg.p = f.p0;
  if (f.s0) cfg.s = *f.s0;
  if (f.sample_every) cfg.sample_every = *f.sample_every;
  if (f.seed) cfg.seed = *f.seed;
  if (!g.output.empty()) cfg.output = g.output;
  if (!g.format.empty()) cfg.format = g.format;
  validate(cfg);
  if (!f.dump_config.empty()) {
    std::ofstream dump(f.dump_config);
    if (!dump) throw ConfigError("--dump-config: cannot write '" + f.dump_config + "'");
    dump << to_json(cfg);
  }
  return cfg;
}

std::vector<StepMethod> parse_methods(const std::vector<std::string>& ids,
                                      const RunConfig& cfg) {
  std::vector<StepMethod> methods;
  for (const auto& id : ids) {
    RunConfig c = cfg;
    c.method = id;
    methods.push_back(make_method(c));
  }
  if (methods.empty()) throw ConfigError("--methods: at least one method required");
  return methods;
}

std::ofstream open_file(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("output: cannot write '" + path.string() + "'");
  return file;
}

// Writes to the configured path or to `out` when no path is set.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty()) {
    write(out);
  } else {
    auto file = open_file(path);
    write(file);
  }
}

struct TimedRun {
  Trajectory traj;
  double wall_time_s = 0.0;
};

TimedRun timed_integrate(const SeparableContactModel& model, const StepMethod& method,
                         const ContactState& x0, double tau, double t_end,
                         std::uint64_t sample_every) {
  IntegrateOptions opt;
  opt.sample_every = sample_every;
  const auto start = Clock::now();
  TimedRun run{integrate(model, method, x0, tau, t_end, opt), 0.0};
  run.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  return run;
}

RunMetadata metadata(const TimedRun& run) {
  return {run.traj.status, run.traj.message, run.traj.steps, run.traj.counters,
          run.wall_time_s};
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const GlobalFlags& g, std::ostream& out,
                 std::ostream& err) {
  const auto model = make_model(cfg);
  const auto run = timed_integrate(*model, make_method(cfg), initial_state(cfg), cfg.tau,
                                   cfg.t_end, cfg.sample_every);
  emit(cfg.output, out, [&](std::ostream& os) {
    write_trajectory(os, cfg.format, *model, run.traj.samples, metadata(run));
  });
  if (!g.quiet) {
    err << "status=" << to_string(run.traj.status) << " steps=" << run.traj.steps
        << " samples=" << run.traj.samples.size();
    if (run.traj.t_fail) err << " t_fail=" << format_double(*run.traj.t_fail);
    if (!run.traj.message.empty()) err << " message=\"" << run.traj.message << '"';
    err << '\n';
  }
  return run.traj.completed() ? kSuccess : kModelFailure;
}

// ---- presets ---------------------------------------------------------------

std::vector<ExtraColumn> kepler_columns(double mu) {
  auto el = [mu](const ContactState& x) { return diagnostics::kepler_elements(x, mu); };
  return {{"r", [](const ContactState& x) { return x.q.norm(); }},
          {"energy", [el](const ContactState& x) { return el(x).energy; }},
          {"angular_momentum",
           [el](const ContactState& x) { return el(x).angular_momentum; }},
          {"eccentricity", [el](const ContactState& x) { return el(x).eccentricity; }},
          {"perihelion_angle",
           [el](const ContactState& x) { return el(x).perihelion_angle; }}};
}

struct PresetContext {
  fs::path dir;
  std::string format;
  bool quiet = false;
  std::ostream& out;
};

fs::path data_file(const PresetContext& ctx, const std::string& stem) {
  return ctx.dir / (stem + (ctx.format == "jsonl" ? ".jsonl" : ".csv"));
}

void kepler_summary(std::ostream& out, const std::string& id, const TimedRun& run) {
  double r_min = std::numeric_limits<double>::infinity(), r_max = 0.0;
  for (const auto& x : run.traj.samples) {
    r_min = std::min(r_min, x.q.norm());
    r_max = std::max(r_max, x.q.norm());
  }
  out << id << ": status=" << to_string(run.traj.status)
      << " r_min=" << format_double(r_min) << " r_max=" << format_double(r_max);
  if (run.traj.t_fail) out << " t_fail=" << format_double(*run.traj.t_fail);
  out << '\n';
}

int preset_kepler(const PresetContext& ctx, const std::string& name, double alpha,
                  double tau, double t_end, const std::vector<std::string>& ids,
                  std::uint64_t sample_every) {
  const PerturbedKepler model({1.0, alpha, M_PI, 1e-10});
  const auto x0 = make_state({1.0, 0.0}, {0.0, 1.0}, 0.0);
  std::vector<std::future<TimedRun>> runs;
  for (const auto& id : ids) {
    runs.push_back(std::async(std::launch::async, [&, id] {
      return timed_integrate(model, *parse_method(id), x0, tau, t_end, sample_every);
    }));
  }
  const auto extras = kepler_columns(1.0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const TimedRun run = runs[i].get();
    auto file = open_file(data_file(ctx, name + "_" + ids[i]));
    write_trajectory(file, ctx.format, model, run.traj.samples, metadata(run), extras);
    kepler_summary(ctx.out, ids[i], run);
  }
  return kSuccess;
}

int preset_fig3(const PresetContext& ctx) {
  const QuadraticActionOscillator model({1.0, 18.0});
  const std::vector<std::pair<std::string, ContactState>> starts{
      {"on", make_state({3.0}, {3.0}, std::sqrt(18.0))},
      {"outside", make_state({4.0}, {4.0}, 4.0)},
      {"inside", make_state({1.0}, {-1.0}, 2.0)}};
  const std::vector<ExtraColumn> extras{
      {"sphere_distance", [](const ContactState& x) {
         return diagnostics::sphere_distance(x, 1.0, 18.0);
       }}};
  int code = kSuccess;
  for (const auto& [label, x0] : starts) {
    for (const std::string id : {"chi2", "cvi2"}) {
      const auto run = timed_integrate(model, *parse_method(id), x0, 0.1, 100.0, 1);
      auto file = open_file(data_file(ctx, "fig3_" + label + "_" + id));
      write_trajectory(file, ctx.format, model, run.traj.samples, metadata(run), extras);
      ctx.out << label << " " << id << ": status=" << to_string(run.traj.status)
              << " final_sphere_distance="
              << format_double(diagnostics::sphere_distance(run.traj.samples.back(), 1.0, 18.0))
              << '\n';
      if (!run.traj.completed()) code = kModelFailure;
    }
  }
  return code;
}

std::vector<double> default_tau_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 12; ++k) grid.push_back(0.05 * k);
  return grid;
}

std::vector<Record> scan_records(const std::vector<diagnostics::StabilityReport>& reports) {
  std::vector<Record> records;
  for (const auto& r : reports) {
    for (const auto& run : r.runs) {
      records.push_back({{"method", method_id(r.method)},
                         {"tau", format_double(run.tau)},
                         {"status", std::string(to_string(run.status))},
                         {"escaped", run.escaped ? "true" : "false"},
                         {"stable", run.stable() ? "true" : "false"},
                         {"max_norm", format_double(run.max_norm)},
                         {"s_final", format_double(run.final_state.s)}});
    }
  }
  return records;
}

void scan_summary(std::ostream& out, const std::vector<diagnostics::StabilityReport>& reports) {
  for (const auto& r : reports) {
    out << method_id(r.method) << ": max_stable_tau="
        << (r.max_stable_tau ? format_double(*r.max_stable_tau) : std::string("none"))
        << " stable_at=";
    bool first = true;
    for (const auto& run : r.runs) {
      if (!run.stable()) continue;
      out << (first ? "" : ",") << format_double(run.tau);
      first = false;
    }
    out << '\n';
  }
}

int preset_fig4(const PresetContext& ctx) {
  const QuadraticActionOscillator model({1.0, 18.0});
  const auto x0 = make_state({0.0}, {-1.0}, -7.0);
  const std::vector<StepMethod> methods{StepMethod::chi(), StepMethod::cvi(),
                                        StepMethod::rk4()};
  const auto reports =
      diagnostics::stability_scan(model, methods, x0, default_tau_grid(), 500.0, 100.0);
  {
    auto file = open_file(data_file(ctx, "fig4_scan"));
    write_records(file, ctx.format, scan_records(reports));
  }
  scan_summary(ctx.out, reports);
  // Trajectories at a few step sizes for plotting.
  const std::vector<ExtraColumn> extras{
      {"sphere_distance", [](const ContactState& x) {
         return diagnostics::sphere_distance(x, 1.0, 18.0);
       }}};
  for (const auto& m : methods) {
    for (const auto& [tau, label] :
         std::vector<std::pair<double, std::string>>{{0.05, "0.05"}, {0.15, "0.15"},
                                                     {0.25, "0.25"}}) {
      const auto run = timed_integrate(model, m, x0, tau, 500.0, 1);
      auto file = open_file(data_file(ctx, "fig4_" + method_id(m) + "_tau" + label));
      write_trajectory(file, ctx.format, model, run.traj.samples, metadata(run), extras);
    }
  }
  return kSuccess;
}

std::vector<Record> benchmark_records(const std::vector<diagnostics::BenchmarkRow>& rows) {
  std::vector<Record> records;
  for (const auto& r : rows) {
    const double n = std::max<double>(1.0, static_cast<double>(r.steps));
    records.push_back(
        {{"method", method_id(r.method)},
         {"repeats", std::to_string(r.repeats)},
         {"mean_s", format_double(r.mean_seconds)},
         {"std_s", format_double(r.std_seconds)},
         {"steps", std::to_string(r.steps)},
         {"status", std::string(to_string(r.status))},
         {"grad_V_per_step", format_double(r.counters.grad_V_evals / n)},
         {"vector_field_per_step", format_double(r.counters.vector_field_evals / n)},
         {"a_map_per_step", format_double(r.counters.a_map_evals / n)}});
  }
  return records;
}

int preset_table1(const PresetContext& ctx) {
  const QuadraticActionOscillator model({1.0, 18.0});
  const auto x0 = make_state({0.0}, {-1.0}, -7.0);
  const auto rows = diagnostics::benchmark(
      model, {StepMethod::chi(), StepMethod::cvi(), StepMethod::rk4(), StepMethod::midpoint()},
      x0, 0.1, 500.0, 10);
  const auto table = diagnostics::format_benchmark_table(rows);
  ctx.out << table;
  {
    auto file = open_file(ctx.dir / "table1.txt");
    file << table;
  }
  auto file = open_file(data_file(ctx, "table1"));
  write_records(file, ctx.format, benchmark_records(rows));
  return kSuccess;
}

int cmd_preset(const std::string& name, bool full, const GlobalFlags& g, std::ostream& out) {
  const std::string format = g.format.empty() ? "csv" : g.format;
  if (format != "csv" && format != "jsonl") {
    throw ConfigError("--format: expected csv or jsonl, got '" + format + "'");
  }
  const PresetContext ctx{g.output.empty() ? fs::path(".") : fs::path(g.output), format,
                          g.quiet, out};
  if (name == "fig1") {
    const double t_end = full ? 200000.0 : 20000.0;
    return preset_kepler(ctx, "fig1", 0.01, 0.1, t_end, {"chi2", "cvi2", "rk4"},
                         full ? 100 : 10);
  }
  if (name == "fig2") {
    return preset_kepler(ctx, "fig2", 0.05, 0.3, 1000.0, {"chi2", "cvi2", "rk4", "chi6"}, 1);
  }
  if (name == "fig3") return preset_fig3(ctx);
  if (name == "fig4") return preset_fig4(ctx);
  if (name == "table1") return preset_table1(ctx);
  throw ConfigError("preset: unknown preset '" + name +
                    "' (expected fig1, fig2, fig3, fig4 or table1)");
}

// ---- scan / convergence / benchmark ----------------------------------------

int cmd_scan(const RunConfig& cfg, const std::vector<std::string>& ids,
             std::vector<double> taus, double bound, std::ostream& out) {
  if (taus.empty()) taus = default_tau_grid();
  const auto model = make_model(cfg);
  const auto reports = diagnostics::stability_scan(
      *model, parse_methods(ids, cfg), initial_state(cfg), taus, cfg.t_end, bound);
  if (!cfg.output.empty()) {
    auto file = open_file(cfg.output);
    write_records(file, cfg.format, scan_records(reports));
  }
  scan_summary(out, reports);
  return kSuccess;
}

int cmd_convergence(const RunConfig& cfg, const std::vector<std::string>& ids,
                    std::vector<double> taus, std::ostream& out) {
  if (taus.empty()) taus = {0.2, 0.1, 0.05, 0.025};
  const auto model = make_model(cfg);
  const auto x0 = initial_state(cfg);
  diagnostics::ConvergenceReference reference = diagnostics::RefinedReference{};
  std::string reference_kind = "refined";
  if (cfg.model == "linear_oscillator" &&
      cfg.params.at("damping") < 2.0 * cfg.params.at("omega0")) {
    reference = damped_oscillator_exact_state(
        static_cast<const LinearDampedOscillator&>(*model), x0, cfg.t_end);
    reference_kind = "exact";
  }
  std::vector<Record> records;
  for (const auto& method : parse_methods(ids, cfg)) {
    const auto r = diagnostics::convergence_order(*model, method, x0, cfg.t_end, taus,
                                                  reference);
    out << method_id(method) << ": slope=" << format_double(r.slope)
        << " reference=" << reference_kind << '\n';
    for (std::size_t i = 0; i < r.taus.size(); ++i) {
      records.push_back({{"method", method_id(method)},
                         {"tau", format_double(r.taus[i])},
                         {"error", format_double(r.errors[i])},
                         {"slope", format_double(r.slope)}});
    }
  }
  if (!cfg.output.empty()) {
    auto file = open_file(cfg.output);
    write_records(file, cfg.format, records);
  }
  return kSuccess;
}

int cmd_benchmark(const RunConfig& cfg, const std::vector<std::string>& ids, int repeats,
                  std::ostream& out) {
  const auto model = make_model(cfg);
  const auto rows = diagnostics::benchmark(*model, parse_methods(ids, cfg),
                                           initial_state(cfg), cfg.tau, cfg.t_end, repeats);
  out << diagnostics::format_benchmark_table(rows);
  if (!cfg.output.empty()) {
    auto file = open_file(cfg.output);
    write_records(file, cfg.format, benchmark_records(rows));
  }
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contact Hamiltonian and contact variational integrators", "contact_cli"};
  app.fallthrough();
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--output", g.output, "output file (preset: output directory)");
  app.add_option("--format", g.format, "csv | jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_flag("--quiet", g.quiet, "suppress progress messages");
  app.add_option("--config", g.config, "JSON run configuration; flags override it");

  RunFlags sim_flags, scan_flags, conv_flags, bench_flags;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory");
  add_run_flags(simulate, sim_flags);

  std::string preset_name;
  bool full = false;
  auto* preset = app.add_subcommand("preset", "reproduce a figure or table data set");
  preset->add_option("name", preset_name, "fig1 | fig2 | fig3 | fig4 | table1")->required();
  preset->add_flag("--full", full, "fig1 over the full horizon of 200000");

  std::vector<std::string> scan_methods{"chi2", "cvi2", "rk4"};
  std::vector<double> scan_taus;
  double bound = 100.0;
  auto* scan = app.add_subcommand("scan", "stability scan over a step-size grid");
  add_run_flags(scan, scan_flags);
  scan->add_option("--methods", scan_methods, "comma separated method ids")->delimiter(',');
  scan->add_option("--taus", scan_taus, "comma separated increasing step sizes")
      ->delimiter(',');
  scan->add_option("--bound", bound, "escape bound on the max norm of (q, p, s)");

  std::vector<std::string> conv_methods;
  std::vector<double> conv_taus;
  auto* convergence = app.add_subcommand("convergence", "estimate the order of methods");
  add_run_flags(convergence, conv_flags);
  convergence->add_option("--methods", conv_methods, "comma separated method ids")
      ->delimiter(',');
  convergence->add_option("--taus", conv_taus, "comma separated decreasing step sizes")
      ->delimiter(',');

  std::vector<std::string> bench_methods{"chi2", "cvi2", "rk4", "midpoint"};
  int repeats = 10;
  auto* bench = app.add_subcommand("benchmark", "time methods and count evaluations");
  add_run_flags(bench, bench_flags);
  bench->add_option("--methods", bench_methods, "comma separated method ids")
      ->delimiter(',');
  bench->add_option("--repeats", repeats, "timed runs per method");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(resolve(g, sim_flags), g, out, err);
    }
    if (preset->parsed()) return cmd_preset(preset_name, full, g, out);
    if (scan->parsed()) {
      if (!scan_flags.t_end && g.config.empty()) scan_flags.t_end = 500.0;
      return cmd_scan(resolve(g, scan_flags), scan_methods, scan_taus, bound, out);
    }
    if (convergence->parsed()) {
      if (!conv_flags.model && g.config.empty()) conv_flags.model = "linear_oscillator";
      const RunConfig cfg = resolve(g, conv_flags);
      if (conv_methods.empty()) conv_methods = {cfg.method};
      return cmd_convergence(cfg, conv_methods, conv_taus, out);
    }
    if (bench->parsed()) {
      if (!bench_flags.t_end && g.config.empty()) bench_flags.t_end = 500.0;
      return cmd_benchmark(resolve(g, bench_flags), bench_methods, repeats, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ContactError& e) {
    err << (e.kind() == ErrorKind::InvalidArgument ? "config error: " : "model failure: ")
        << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidArgument ? kConfigError : kModelFailure;
  }
  return kConfigError;
}

}  // namespace contact::cli
