#include "cli.hpp"

#include "dimer/experiments.hpp"
#include "dimer/experiments/report.hpp"
#include "dimer/fixedpoints.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace dimersim {

using namespace dimer;
using namespace dimer::experiments;
using nlohmann::json;

namespace {

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"spectrum", "many-body eigenvalues along --sweep, branches matched by continuity"},
    {"evolve-mf", "mean-field Bloch trajectory from (--theta0, --phi0)"},
    {"evolve-mp", "many-body evolution of the coherent state at (--theta0, --phi0)"},
    {"compare", "many-body vs mean-field sz and norms side by side"},
    {"fixed-points", "fixed points, their type and index, as JSON"},
    {"halflife-mf", "mean-field half-life map over (p, q)"},
    {"halflife-mp", "many-body half-life map of the rescaled norm"},
    {"selftrap", "sz(t) for a sweep over g, default start the south pole"},
    {"manifolds", "stable and unstable manifolds of the saddle"}};

template <class T>
json opt_json(const std::optional<T>& x) {
  return x ? json(*x) : json(nullptr);
}

template <class T>
void opt_from(const json& v, std::optional<T>& x) {
  if (v.is_null()) x.reset();
  else x = v.get<T>();
}

int required_particles(const RunConfig& c) {
  if (!c.params.n_particles) throw std::invalid_argument(c.command + ": --n-particles is required");
  return *c.params.n_particles;
}

double default_t_max_for(const RunConfig& c) {
  if (c.command == "halflife-mf" || c.command == "halflife-mp") return default_t_max(c.params.gamma);
  if (c.command == "selftrap") return 50.0;
  if (c.command == "manifolds") return 100.0;
  return 10.0;
}

std::vector<double> time_grid(const RunConfig& c) {
  const double t_max = c.t_max.value_or(default_t_max_for(c));
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("--t-max must be positive");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw std::invalid_argument("--dt must be positive");
  const double steps = std::ceil(t_max / c.dt - 1e-9);
  if (steps > 1e7) throw std::invalid_argument("--t-max / --dt gives too many samples");
  return linspace(0.0, t_max, static_cast<int>(steps) + 1);
}

meanfield::MeanFieldOptions tolerances(const RunConfig& c) {
  if (!(c.atol > 0.0) || !(c.rtol > 0.0)) throw std::invalid_argument("--atol and --rtol must be positive");
  return {c.atol, c.rtol};
}

HalfLifeOptions halflife_options(const RunConfig& c) {
  HalfLifeOptions o;
  o.n_p = c.n_p;
  o.n_q = c.n_q;
  o.t_max = c.t_max;
  o.tol = tolerances(c);
  o.mp_step = c.mp_step;
  o.threads = c.threads;
  return o;
}

struct Output {
  const RunConfig& cfg;
  std::ostream& out;

  void table(const Table& t, const std::string& name, bool primary = true) {
    if (cfg.out_dir.empty()) {
      if (primary) write_csv(t, out);
      return;
    }
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    write_csv(t, path);
    out << path.string() << "\n";
  }

  void document(const json& j, const std::string& name) {
    if (cfg.out_dir.empty()) {
      out << j.dump(2) << "\n";
      return;
    }
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    f << j.dump(2) << "\n";
    if (!f) throw std::runtime_error("cannot write " + path.string());
    out << path.string() << "\n";
  }
};

void dispatch(const RunConfig& c, std::ostream& out) {
  const SystemParams& p = c.params;
  p.validate();
  if (c.threads < 0) throw std::invalid_argument("--threads must be >= 0");
  Output o{c, out};
  const double theta = c.theta0.value_or(c.command == "selftrap" ? kPi : 0.0);

  if (c.command == "spectrum") {
    if (!c.sweep) throw std::invalid_argument("spectrum: --sweep is required");
    const auto spec = SweepSpec::parse(*c.sweep, p);
    o.table(spectrum_sweep(spec, required_particles(c), c.mean_field, c.threads).table(), "spectrum.csv");
  } else if (c.command == "evolve-mf") {
    const auto tr = meanfield::integrate_meanfield(bloch_from_angles(theta, c.phi0), p, time_grid(c),
                                                   meanfield::Formulation::Bloch, tolerances(c));
    o.table(trajectory_table(tr), "evolve_mf.csv");
  } else if (c.command == "evolve-mp") {
    const int n = required_particles(c);
    const auto grid = time_grid(c);
    const auto states = manybody::propagate(manybody::coherent_state(theta, c.phi0, n), p, grid);
    o.table(manybody_table(grid, states), "evolve_mp.csv");
  } else if (c.command == "compare") {
    o.table(compare_mp_mf(p, required_particles(c), theta, c.phi0, time_grid(c), tolerances(c)).table(),
            "compare.csv");
  } else if (c.command == "fixed-points") {
    o.document(experiments::to_json(fixedpoints::analyse(p)), "fixed_points.json");
  } else if (c.command == "halflife-mf") {
    o.table(halflife_meanfield(p, halflife_options(c)).table(), "halflife_mf.csv");
  } else if (c.command == "halflife-mp") {
    o.table(halflife_manybody(p, required_particles(c), halflife_options(c)).table(), "halflife_mp.csv");
  } else if (c.command == "selftrap") {
    const auto spec = SweepSpec::parse(c.sweep.value_or("g:0:3:61"), p);
    if (spec.parameter != "g") throw std::invalid_argument("selftrap: the sweep must run over g");
    const auto m = selftrapping_map(p, spec.values(), time_grid(c), bloch_from_angles(theta, c.phi0), c.threads);
    o.table(m.table(), "selftrap.csv");
    o.table(m.summary(), "selftrap_summary.csv", false);
  } else if (c.command == "manifolds") {
    const auto m = trace_manifolds(p, c.t_max.value_or(100.0), c.dt);
    o.table(m.table(), "manifolds.csv");
  } else {
    throw std::invalid_argument("unknown command '" + c.command + "'");
  }
}

}  // namespace

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"params", experiments::to_json(c.params)},
          {"theta0", opt_json(c.theta0)},
          {"phi0", c.phi0},
          {"t_max", opt_json(c.t_max)},
          {"dt", c.dt},
          {"sweep", opt_json(c.sweep)},
          {"mean_field", c.mean_field},
          {"n_p", c.n_p},
          {"n_q", c.n_q},
          {"mp_step", c.mp_step},
          {"out_dir", c.out_dir},
          {"threads", c.threads},
          {"atol", c.atol},
          {"rtol", c.rtol}};
}

RunConfig config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") base.command = v.get<std::string>();
    else if (key == "params") base.params = params_from_json(v, base.params);
    else if (key == "theta0") opt_from(v, base.theta0);
    else if (key == "phi0") base.phi0 = v.get<double>();
    else if (key == "t_max") opt_from(v, base.t_max);
    else if (key == "dt") base.dt = v.get<double>();
    else if (key == "sweep") opt_from(v, base.sweep);
    else if (key == "mean_field") base.mean_field = v.get<bool>();
    else if (key == "n_p") base.n_p = v.get<int>();
    else if (key == "n_q") base.n_q = v.get<int>();
    else if (key == "mp_step") base.mp_step = v.get<double>();
    else if (key == "out_dir") base.out_dir = v.get<std::string>();
    else if (key == "threads") base.threads = v.get<int>();
    else if (key == "atol") base.atol = v.get<double>();
    else if (key == "rtol") base.rtol = v.get<double>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return base;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-mode Bose-Hubbard dimer with decay: spectra, mean-field and many-body dynamics"};
  app.name("dimersim");
  app.require_subcommand(1);
  app.fallthrough();

  // flag values land here and are applied on top of the config file
  RunConfig flags;
  std::string variant, config_path;
  double g = 0, c_times_n = 0;
  int n_particles = 0;
  bool dump = false;

  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_flag("--dump-config", dump, "print the resolved config as JSON and exit");
  auto* o_eps = app.add_option("--epsilon", flags.params.epsilon, "onsite bias");
  auto* o_v = app.add_option("--v", flags.params.v, "coupling");
  auto* o_gamma = app.add_option("--gamma", flags.params.gamma, "decay rate");
  auto* o_g = app.add_option("--g", g, "macroscopic interaction g = N c");
  auto* o_cn = app.add_option("--c-times-n", c_times_n, "microscopic interaction times N (same as --g)");
  o_g->excludes(o_cn);
  auto* o_n = app.add_option("--n-particles", n_particles, "particle number for many-body runs");
  auto* o_var = app.add_option("--variant", variant, "decaying or pt")->check(CLI::IsMember({"decaying", "pt"}));
  double theta0 = 0;
  auto* o_theta = app.add_option("--theta0", theta0, "initial polar angle (default 0, pi for selftrap)");
  auto* o_phi = app.add_option("--phi0", flags.phi0, "initial azimuth");
  double t_max = 0;
  auto* o_tmax = app.add_option("--t-max", t_max, "final time (or the half-life cap)");
  auto* o_dt = app.add_option("--dt", flags.dt, "output sampling step");
  std::string sweep;
  auto* o_sweep = app.add_option("--sweep", sweep, "name:start:stop:count");
  auto* o_mf = app.add_flag("--mean-field", flags.mean_field, "add mean-field energies to the spectrum");
  auto* o_np = app.add_option("--n-p", flags.n_p, "half-life grid cells in p");
  auto* o_nq = app.add_option("--n-q", flags.n_q, "half-life grid cells in q");
  auto* o_step = app.add_option("--mp-step", flags.mp_step, "coarse many-body step for half-lives, in 1/v");
  auto* o_out = app.add_option("--out-dir", flags.out_dir, "write files here instead of stdout");
  auto* o_threads = app.add_option("--threads", flags.threads, "worker threads (0: DIMERSIM_THREADS or all cores)");
  auto* o_atol = app.add_option("--atol", flags.atol, "ODE absolute tolerance");
  auto* o_rtol = app.add_option("--rtol", flags.rtol, "ODE relative tolerance");
  for (const auto& [name, what] : kCommands) app.add_subcommand(name, what);

  const std::string usage = app.help();
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "dimersim: " << e.what() << "\n\n" << usage;
    return 2;
  }

  try {
    RunConfig cfg;
    const std::string command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::invalid_argument("cannot read config '" + config_path + "'");
      cfg = config_from_json(json::parse(f));
      if (!cfg.command.empty() && cfg.command != command)
        throw std::invalid_argument("config is for '" + cfg.command + "', not '" + command + "'");
    }
    cfg.command = command;
    auto set = [](const CLI::Option* opt) { return opt->count() > 0; };
    if (set(o_eps)) cfg.params.epsilon = flags.params.epsilon;
    if (set(o_v)) cfg.params.v = flags.params.v;
    if (set(o_gamma)) cfg.params.gamma = flags.params.gamma;
    if (set(o_g)) cfg.params.g = g;
    if (set(o_cn)) cfg.params.g = c_times_n;
    if (set(o_n)) cfg.params.n_particles = n_particles;
    if (set(o_var)) cfg.params.variant = variant_from_string(variant);
    if (set(o_theta)) cfg.theta0 = theta0;
    if (set(o_phi)) cfg.phi0 = flags.phi0;
    if (set(o_tmax)) cfg.t_max = t_max;
    if (set(o_dt)) cfg.dt = flags.dt;
    if (set(o_sweep)) cfg.sweep = sweep;
    if (set(o_mf)) cfg.mean_field = flags.mean_field;
    if (set(o_np)) cfg.n_p = flags.n_p;
    if (set(o_nq)) cfg.n_q = flags.n_q;
    if (set(o_step)) cfg.mp_step = flags.mp_step;
    if (set(o_out)) cfg.out_dir = flags.out_dir;
    if (set(o_threads)) cfg.threads = flags.threads;
    if (set(o_atol)) cfg.atol = flags.atol;
    if (set(o_rtol)) cfg.rtol = flags.rtol;

    if (dump) {
      out << to_json(cfg).dump(2) << "\n";
      return 0;
    }
    dispatch(cfg, out);
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "dimersim: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "dimersim: bad JSON: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "dimersim: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dimersim
