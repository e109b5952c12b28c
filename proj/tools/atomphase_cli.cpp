// Command-line front end: permittivity/response tables, single trajectories,
// phase traces, 2-D figure datasets and the invariant self-check battery.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atomphase/atomphase.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string format;
  std::string out = "-";
  std::string solver;
  std::string phase = "arcsin";
  int workers = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "configuration file (flat key = value lines)");
  cmd->add_option("--preset", opts.preset,
                  "named parameter preset (fig2 ... fig21)");
  cmd->add_option("--format", opts.format, "output format: csv or jsonl");
  cmd->add_option("--out", opts.out, "output path, '-' for stdout");
  cmd->add_option("--solver", opts.solver,
                  "amplitude solver: closed, oracle or volterra");
  cmd->add_option("--phase", opts.phase,
                  "primary phase convention: arcsin or atan2")
      ->check(CLI::IsMember({"arcsin", "atan2"}));
  cmd->add_option("--workers", opts.workers, "worker thread count");
  cmd->add_option("--set", opts.sets,
                  "extra 'key=value' override, may repeat");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw atomphase::IoError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

atomphase::SweepSpec build_spec(const CommonOpts& opts) {
  atomphase::SweepSpec spec;
  if (!opts.preset.empty()) spec = atomphase::apply_preset(spec, opts.preset);
  if (!opts.config_path.empty())
    spec = atomphase::parse_config(read_file(opts.config_path), spec);
  for (const std::string& assignment : opts.sets) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
      throw atomphase::ConfigError("--set expects key=value, got '" +
                                   assignment + "'");
    atomphase::apply_key(spec, assignment.substr(0, eq),
                         assignment.substr(eq + 1));
  }
  if (!opts.format.empty()) spec.format = opts.format;
  if (!opts.solver.empty()) atomphase::apply_key(spec, "solver", opts.solver);
  if (opts.workers > 0) spec.workers = opts.workers;
  return spec;
}

void write_dataset(atomphase::Dataset dataset, const CommonOpts& opts,
                   const atomphase::SweepSpec& spec) {
  dataset.metadata.emplace_back("phase.convention", opts.phase);
  atomphase::emit_to_destination(dataset, spec.format, opts.out, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pumped three-level atom near an absorbing dielectric "
               "half-space: decay rates, line shifts, amplitude dynamics "
               "and geometric phase datasets"};
  app.set_version_flag("--version",
                       std::string("atomphase ") + atomphase::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  bool with_pv = false;

  CLI::App* cmd_perm =
      app.add_subcommand("permittivity", "dielectric function table");
  CLI::App* cmd_resp = app.add_subcommand(
      "response", "decay rate and line shift along omega0, zA or gamma");
  cmd_resp->add_flag("--pv", with_pv,
                     "add the principal-value line-shift cross-check column");
  CLI::App* cmd_evolve =
      app.add_subcommand("evolve", "single amplitude trajectory");
  CLI::App* cmd_berry =
      app.add_subcommand("berry", "overlap components and total phase trace");
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "1-D or 2-D parameter sweep dataset");
  CLI::App* cmd_check =
      app.add_subcommand("check", "run the module invariant battery");
  for (CLI::App* cmd :
       {cmd_perm, cmd_resp, cmd_evolve, cmd_berry, cmd_sweep, cmd_check})
    add_common(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 1;
  }

  try {
    if (cmd_check->parsed()) {
      const std::vector<atomphase::CheckResult> checks =
          atomphase::run_self_checks();
      bool all_ok = true;
      for (const atomphase::CheckResult& check : checks) {
        std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name;
        if (!check.detail.empty()) std::cout << " (" << check.detail << ")";
        std::cout << "\n";
        all_ok = all_ok && check.passed;
      }
      return all_ok ? 0 : 2;
    }

    atomphase::SweepSpec spec = build_spec(opts);
    if (cmd_perm->parsed()) {
      write_dataset(atomphase::run_permittivity_table(spec), opts, spec);
    } else if (cmd_resp->parsed()) {
      write_dataset(atomphase::run_response_table(spec, with_pv), opts, spec);
    } else if (cmd_evolve->parsed()) {
      write_dataset(atomphase::run_evolve_trace(spec), opts, spec);
    } else if (cmd_berry->parsed()) {
      if (spec.axes.empty()) {
        atomphase::AxisSpec axis;
        axis.param = "time";
        axis.min = 0.0;
        axis.max = spec.fixed_time;
        axis.count = 501;
        spec.axes.push_back(axis);
      }
      write_dataset(atomphase::run_sweep(spec), opts, spec);
    } else if (cmd_sweep->parsed()) {
      write_dataset(atomphase::run_sweep(spec), opts, spec);
    }
  } catch (const atomphase::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const atomphase::IoError& err) {
    std::cerr << "i/o error: " << err.what() << "\n";
    return 3;
  } catch (const atomphase::NumericalError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  } catch (const std::domain_error& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
