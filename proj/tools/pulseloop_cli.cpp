// pulseloop command-line front end.
//
//   simulate    integrate a pulse sequence (optionally fluctuated), CSV out
//   phases      decompose the basis phases and reconstruct the gate
//   papercheck  run the reference-criteria battery, table or JSON out
//   sweep       grid sweep over profile parameters, CSV out
//
// Exit codes: 0 success, 1 numeric/assertion failure, 2 usage/config error.
// The default grid density is 16384 steps per unit time; override with
// --steps or the PULSELOOP_STEPS environment variable (flag wins).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pulseloop/pulseloop.hpp"

namespace {

constexpr int kDefaultSteps = 16384;

int resolve_steps(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("PULSELOOP_STEPS")) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("PULSELOOP_STEPS must be an integer, got \"" +
                                  std::string(env) + "\"");
    }
  }
  return kDefaultSteps;
}

pulseloop::BlochVector parse_basis(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    v.push_back(std::stod(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("--basis: bad component \"" + tok + "\"");
  }
  if (v.size() != 3) throw std::invalid_argument("--basis expects nx,ny,nz");
  return pulseloop::normalized({v[0], v[1], v[2]});
}

// Shared command inputs.
struct CommonArgs {
  std::string seq_text = "90x 180y 90x";
  std::string profile_path;
  std::string basis_text = "0,1,0";
  std::optional<int> steps;
  std::string out_path;
  pulseloop::ProfileOverrides overrides;
};

void add_profile_flags(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--profile", a.profile_path, "fluctuation profile JSON file");
  cmd->add_option("--f0", a.overrides.f0, "override the profile's f amplitude");
  cmd->add_option("--g0", a.overrides.g0, "override the profile's g amplitude");
  cmd->add_option("--xi", a.overrides.xi, "override the profile's f frequency index");
  cmd->add_option("--eta", a.overrides.eta, "override the profile's g frequency index");
}

// Opens the output file or falls back to stdout; null on failure.
std::ostream* open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return &std::cout;
  file.open(path);
  if (!file) {
    std::cerr << "error: cannot open output file: " << path << "\n";
    return nullptr;
  }
  return &file;
}

struct LoadedRun {
  pulseloop::PulseSequence seq;
  std::optional<pulseloop::FluctuationProfile> profile;
  pulseloop::GridSpec grid;
  pulseloop::BlochVector basis;
};

// Validates everything up front; throws invalid_argument / parse_error on
// config problems (mapped to exit 2 by the caller).
LoadedRun load_run(const CommonArgs& a) {
  LoadedRun run;
  run.seq = pulseloop::parse_sequence(a.seq_text);
  run.grid = pulseloop::GridSpec{resolve_steps(a.steps), {}};
  run.grid.validate();
  run.basis = parse_basis(a.basis_text);
  if (!a.profile_path.empty()) {
    run.profile =
        pulseloop::load_profile_file(a.profile_path, run.seq.breakpoints, a.overrides);
    const pulseloop::BoundaryCheck bc = pulseloop::check_boundary_conditions(*run.profile);
    if (!bc.ok)
      throw std::invalid_argument(
          "profile rejected: f and g must vanish at t=0 and t=1 (max residual " +
          pulseloop::detail::fmt_g(bc.max_residual()) + ")");
  } else if (a.overrides.any()) {
    throw std::invalid_argument("--f0/--g0/--xi/--eta require --profile");
  }
  return run;
}

int cmd_simulate(const CommonArgs& a, int every) {
  LoadedRun run;
  try {
    run = load_run(a);
    if (every < 1) throw std::invalid_argument("--every must be >= 1");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const pulseloop::HamiltonianSchedule sched =
        run.profile ? pulseloop::make_fluctuated_schedule(run.seq, *run.profile)
                    : pulseloop::make_ideal_schedule(run.seq);
    const pulseloop::Trajectory traj =
        pulseloop::propagate(sched, pulseloop::bloch_to_state(run.basis), run.grid);
    std::ofstream file;
    std::ostream* os = open_output(a.out_path, file);
    if (!os) return 2;
    pulseloop::write_trajectory_csv(*os, traj, every);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_phases(const CommonArgs& a, bool as_json) {
  LoadedRun run;
  try {
    run = load_run(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const pulseloop::HamiltonianSchedule sched =
        run.profile ? pulseloop::make_fluctuated_schedule(run.seq, *run.profile)
                    : pulseloop::make_ideal_schedule(run.seq);

    // The phase split is meaningful for a basis curve the drive never tilts
    // into; verify m(t) . n(t) = 0 along the whole run before decomposing.
    const pulseloop::Trajectory probe =
        pulseloop::propagate(sched, pulseloop::bloch_to_state(run.basis), run.grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < probe.times.size(); ++k)
      worst = std::max(worst,
                       std::abs(pulseloop::dot(sched.at(probe.times[k]).axis, probe.bloch[k])));
    if (worst > 1e-3) {
      std::cerr << "error: basis is not orthogonal to the drive axis along the trajectory "
                << "(max |m . n| = " << pulseloop::detail::fmt_g(worst)
                << "); the drive must satisfy m(t) . n(t) = 0 for a clean phase split\n";
      return 1;
    }

    const pulseloop::GateReport gate =
        pulseloop::gate_from_simulation(run.seq, run.profile, run.basis, run.grid);

    std::ofstream file;
    std::ostream* os = open_output(a.out_path, file);
    if (!os) return 2;

    if (as_json) {
      pulseloop::ordered_json out = {{"sequence", run.seq.text},
                                     {"steps", run.grid.steps_per_unit_time}};
      if (run.profile)
        out["profile"] = {{"kind", run.profile->metadata.kind},
                          {"f0", run.profile->metadata.f0},
                          {"g0", run.profile->metadata.g0},
                          {"xi", run.profile->metadata.xi},
                          {"eta", run.profile->metadata.eta}};
      out["gate"] = pulseloop::gate_report_json(gate);
      *os << out.dump(2) << "\n";
    } else {
      auto line = [&os](const char* name, const pulseloop::PhaseDecomposition& d) {
        *os << name << ": total " << pulseloop::detail::fmt_g(d.gamma_total) << ", dynamical "
            << pulseloop::detail::fmt_g(d.gamma_dynamical) << ", geometric "
            << pulseloop::detail::fmt_g(d.gamma_geometric) << " (fidelity "
            << pulseloop::detail::fmt_g(d.fidelity) << ")\n";
      };
      line("n+", gate.plus);
      line("n-", gate.minus);
      *os << "gate reconstruction error: "
          << pulseloop::detail::fmt_g(gate.reconstruction_error) << "\n";
    }
    return 0;
  } catch (const pulseloop::cyclicity_error& e) {
    std::cerr << "error: trajectory is not cyclic (fidelity "
              << pulseloop::detail::fmt_g(e.fidelity())
              << "); phases are defined for cyclic evolutions only\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_papercheck(const std::optional<int>& steps_flag, bool as_json) {
  int steps = 0;
  try {
    steps = resolve_steps(steps_flag);
    pulseloop::GridSpec{steps, {}}.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::vector<pulseloop::CriterionResult> criteria =
        pulseloop::run_reference_criteria(steps);
    bool all = true;
    for (const pulseloop::CriterionResult& c : criteria)
      all = all && (c.passed || !c.blocking);

    if (as_json) {
      std::cout << pulseloop::criteria_json(criteria, steps).dump(2) << "\n";
    } else {
      for (const pulseloop::CriterionResult& c : criteria) {
        const char* verdict = !c.blocking ? "REPORT" : (c.passed ? "PASS" : "FAIL");
        std::printf("%2d  %-6s  %-42s  %s\n", c.index, verdict, c.name.c_str(),
                    c.detail.c_str());
      }
      std::printf("overall: %s (grid: %d steps per unit time)\n", all ? "PASS" : "FAIL", steps);
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    v.push_back(std::stod(tok, &used));
    if (used != tok.size())
      throw std::invalid_argument(std::string(flag) + ": bad number \"" + tok + "\"");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> v;
  for (double d : parse_double_list(text, flag)) {
    if (d != static_cast<int>(d))
      throw std::invalid_argument(std::string(flag) + ": values must be integers");
    v.push_back(static_cast<int>(d));
  }
  return v;
}

int cmd_sweep(const std::string& family, const std::string& f0s, const std::string& g0s,
              const std::string& xis, const std::string& etas,
              const std::optional<int>& steps_flag, const std::string& out_path) {
  pulseloop::SweepScenario scenario{};
  pulseloop::ParamGrid grid_params;
  pulseloop::GridSpec grid;
  try {
    if (family == "piecewise_sine")
      scenario = pulseloop::SweepScenario::PiecewiseComposite;
    else if (family == "global_sine")
      scenario = pulseloop::SweepScenario::GlobalComposite;
    else
      throw std::invalid_argument("--family must be piecewise_sine or global_sine");
    grid_params = {parse_double_list(f0s, "--f0"), parse_double_list(g0s, "--g0"),
                   parse_int_list(xis, "--xi"), parse_int_list(etas, "--eta")};
    if (grid_params.f0s.empty() || grid_params.g0s.empty() || grid_params.xis.empty() ||
        grid_params.etas.empty())
      throw std::invalid_argument("sweep: every of --f0/--g0/--xi/--eta needs >= 1 value");
    grid = pulseloop::GridSpec{resolve_steps(steps_flag), {}};
    grid.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const std::vector<pulseloop::ScenarioReport> reports =
        pulseloop::sweep(scenario, grid_params, grid);
    std::ofstream file;
    std::ostream* os = open_output(out_path, file);
    if (!os) return 2;
    pulseloop::write_sweep_csv(*os, reports);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pulseloop: composite-pulse qubit dynamics under regular fluctuations,\n"
      "with dynamical/geometric phase decomposition"};
  app.require_subcommand(1);

  CommonArgs sim_args;
  int sim_every = 1;
  CLI::App* sim = app.add_subcommand("simulate", "integrate a sequence, write trajectory CSV");
  sim->add_option("--seq", sim_args.seq_text, "pulse sequence, e.g. \"90x 180y 90x\"");
  sim->add_option("--basis", sim_args.basis_text, "initial Bloch vector nx,ny,nz");
  sim->add_option("--steps", sim_args.steps, "integration steps per unit time (>= 256)");
  sim->add_option("--out", sim_args.out_path, "output CSV path (default stdout)");
  sim->add_option("--every", sim_every, "keep every Nth grid row (last row always kept)");
  add_profile_flags(sim, sim_args);

  CommonArgs ph_args;
  bool ph_json = false;
  CLI::App* ph = app.add_subcommand("phases", "phase decomposition and gate reconstruction");
  ph->add_option("--seq", ph_args.seq_text, "pulse sequence");
  ph->add_option("--basis", ph_args.basis_text, "basis Bloch vector n+ as nx,ny,nz");
  ph->add_option("--steps", ph_args.steps, "integration steps per unit time (>= 256)");
  ph->add_option("--out", ph_args.out_path, "output path (default stdout)");
  ph->add_flag("--json", ph_json, "emit a JSON gate report");
  add_profile_flags(ph, ph_args);

  std::optional<int> pc_steps;
  bool pc_json = false;
  CLI::App* pc = app.add_subcommand("papercheck", "run the reference-criteria battery");
  pc->add_option("--steps", pc_steps, "integration steps per unit time (>= 256)");
  pc->add_flag("--json", pc_json, "emit a JSON report");

  std::string sw_family = "piecewise_sine", sw_f0s, sw_g0s, sw_xis, sw_etas, sw_out;
  std::optional<int> sw_steps;
  CLI::App* sw = app.add_subcommand("sweep", "parameter sweep, write report CSV");
  sw->add_option("--family", sw_family, "profile family: piecewise_sine | global_sine");
  sw->add_option("--f0", sw_f0s, "comma-separated f amplitudes");
  sw->add_option("--g0", sw_g0s, "comma-separated g amplitudes");
  sw->add_option("--xi", sw_xis, "comma-separated f frequency indices");
  sw->add_option("--eta", sw_etas, "comma-separated g frequency indices");
  sw->add_option("--steps", sw_steps, "integration steps per unit time (>= 256)");
  sw->add_option("--out", sw_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sim->parsed()) return cmd_simulate(sim_args, sim_every);
  if (ph->parsed()) return cmd_phases(ph_args, ph_json);
  if (pc->parsed()) return cmd_papercheck(pc_steps, pc_json);
  if (sw->parsed()) return cmd_sweep(sw_family, sw_f0s, sw_g0s, sw_xis, sw_etas, sw_steps, sw_out);
  return 2;
}
