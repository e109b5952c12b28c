#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "atomphase/berry_phase.hpp"
#include "atomphase/config.hpp"
#include "atomphase/dataset.hpp"
#include "atomphase/dynamics.hpp"
#include "atomphase/surface_response.hpp"
#include "atomphase/version.hpp"

namespace atomphase {

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PointRecord {
  double p1 = kNaN, p2 = kNaN;
  double x = kNaN, y = kNaN;
  double phi_arcsin = kNaN, phi_atan2 = kNaN;
  double gamma_ratio = kNaN, shift_ratio = kNaN;
  int flags = kFlagPointFailed;
};

inline std::string spacing_name(Spacing s) {
  return s == Spacing::linear ? "linear" : "log";
}

inline std::string solver_name(SolverKind s) {
  switch (s) {
    case SolverKind::closed: return "closed";
    case SolverKind::oracle: return "oracle";
    default: return "volterra";
  }
}

inline std::vector<std::pair<std::string, std::string>> resolved_metadata(
    const SweepSpec& spec) {
  std::vector<std::pair<std::string, std::string>> md;
  const auto num = [](double v) { return format_double(v); };
  md.emplace_back("generator", std::string("atomphase ") + kVersion);
  md.emplace_back("units.frequency", "omega_T");
  md.emplace_back("units.length", "lambda_T = 2 pi c / omega_T");
  md.emplace_back("units.time", "1 / Gamma0");
  md.emplace_back("units.phase", "radians");
  if (!spec.preset.empty()) md.emplace_back("preset", spec.preset);
  md.emplace_back("medium.omega_p", num(spec.medium.omega_p));
  md.emplace_back("medium.gamma", num(spec.medium.gamma));
  md.emplace_back("atom.omega0", num(spec.omega0));
  md.emplace_back("atom.zA", num(spec.z_atom));
  md.emplace_back("atom.dz_over_d_sq", num(spec.dz_over_d_sq));
  md.emplace_back("atom.omega0_over_gamma0", num(spec.omega0_over_gamma0));
  md.emplace_back("atom.total_rate", spec.total_rate ? "true" : "false");
  md.emplace_back("drive.rabi_mode", spec.rabi_tracked ? "tracked" : "fixed");
  if (spec.rabi_tracked)
    md.emplace_back("drive.rabi_scale", num(spec.rabi_scale));
  else
    md.emplace_back("drive.rabi", num(spec.rabi));
  md.emplace_back("drive.detuning", num(spec.detuning));
  md.emplace_back("drive.phase", num(spec.pump_phase));
  md.emplace_back("init.c1_re", num(spec.c1_0.real()));
  md.emplace_back("init.c1_im", num(spec.c1_0.imag()));
  md.emplace_back("init.c2_re", num(spec.c2_0.real()));
  md.emplace_back("init.c2_im", num(spec.c2_0.imag()));
  md.emplace_back("dynamics.free_space", spec.free_space ? "true" : "false");
  md.emplace_back("dynamics.include_shift",
                  spec.include_shift ? "true" : "false");
  md.emplace_back("solver", solver_name(spec.solver));
  md.emplace_back("time", num(spec.fixed_time));
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const std::string p = "axis" + std::to_string(i + 1) + ".";
    md.emplace_back(p + "param", spec.axes[i].param);
    md.emplace_back(p + "min", num(spec.axes[i].min));
    md.emplace_back(p + "max", num(spec.axes[i].max));
    md.emplace_back(p + "count", std::to_string(spec.axes[i].count));
    md.emplace_back(p + "spacing", spacing_name(spec.axes[i].spacing));
  }
  return md;
}

struct GroupSolution {
  Trajectory traj;
  double gamma_ratio = 1.0;
  double shift_ratio = 0.0;
  int base_flags = 0;
};

// Solve one setting of all non-time parameters over the given times.
inline GroupSolution solve_group(const SweepSpec& spec, double omega0,
                                 double z_atom, double gamma,
                                 const std::vector<double>& tgrid) {
  GroupSolution sol;
  Complex decay(1.0, 0.0);
  double rabi = spec.rabi;
  AtomSurfaceConfig cfg;
  if (!spec.free_space) {
    cfg = spec.atom_config(omega0, z_atom, gamma);
    const SurfaceResponse response = surface_response(cfg);
    sol.gamma_ratio = response.gamma_ratio;
    sol.shift_ratio = response.shift_ratio;
    decay = Complex(0.5 * sol.gamma_ratio,
                    spec.include_shift ? -sol.shift_ratio : 0.0);
    if (spec.rabi_tracked) rabi = spec.rabi_scale * 0.5 * sol.gamma_ratio;
    if (!cfg.short_distance_ok()) sol.base_flags |= kFlagShortDistance;
  }
  const DriveParams drive{rabi, spec.detuning, spec.pump_phase};
  const InitialState ic{spec.c1_0, spec.c2_0};

  sol.traj.times = tgrid;
  switch (spec.solver) {
    case SolverKind::closed:
      for (double t : tgrid) {
        const AmplitudePair a = evolve_markov(t, ic, decay, drive);
        sol.traj.c1.push_back(a.c1);
        sol.traj.c2.push_back(a.c2);
      }
      break;
    case SolverKind::oracle: {
      std::vector<double> grid = tgrid;
      const bool prepend = grid.empty() || grid.front() != 0.0;
      if (prepend) grid.insert(grid.begin(), 0.0);
      Trajectory full = integrate_markov_ode(ic, -decay, drive, grid);
      const std::size_t skip = prepend ? 1 : 0;
      sol.traj.c1.assign(full.c1.begin() + skip, full.c1.end());
      sol.traj.c2.assign(full.c2.begin() + skip, full.c2.end());
      break;
    }
    case SolverKind::volterra: {
      if (spec.free_space)
        throw ConfigError("volterra solver requires the surface configuration");
      const bool aligned = tgrid.size() > 1 && tgrid.front() == 0.0;
      if (aligned) {
        const UniformGrid grid{tgrid.back(),
                               static_cast<int>(tgrid.size()) - 1};
        sol.traj =
            volterra_solve(ic, surface_spectral_density(cfg), drive, grid);
        sol.traj.times = tgrid;
      } else {
        const double t_end = tgrid.back();
        if (t_end == 0.0) {
          sol.traj.c1.assign(tgrid.size(), ic.c1);
          sol.traj.c2.assign(tgrid.size(), ic.c2);
          break;
        }
        const int steps =
            std::max(200, static_cast<int>(std::ceil(t_end / 0.01)));
        const UniformGrid grid{t_end, steps};
        const Trajectory full =
            volterra_solve(ic, surface_spectral_density(cfg), drive, grid);
        for (double t : tgrid) {
          const auto idx =
              static_cast<std::size_t>(std::llround(t / grid.h()));
          sol.traj.c1.push_back(full.c1[std::min(idx, full.c1.size() - 1)]);
          sol.traj.c2.push_back(full.c2[std::min(idx, full.c2.size() - 1)]);
        }
      }
      break;
    }
  }
  return sol;
}

inline std::vector<PointRecord> group_records(const SweepSpec& spec,
                                              const GroupSolution& sol) {
  const InitialState ic{spec.c1_0, spec.c2_0};
  std::vector<PointRecord> records(sol.traj.times.size());
  for (std::size_t i = 0; i < sol.traj.times.size(); ++i) {
    PointRecord& rec = records[i];
    const double t = sol.traj.times[i];
    const AmplitudePair amps{sol.traj.c1[i], sol.traj.c2[i], t};
    const auto [x, y] = overlap_xy(ic, amps, spec.omega0_over_gamma0 * t);
    const PhasePoint phase = phase_point(x, y);
    rec.p1 = std::norm(amps.c1);
    rec.p2 = std::norm(amps.c2);
    rec.x = x;
    rec.y = y;
    rec.gamma_ratio = sol.gamma_ratio;
    rec.shift_ratio = sol.shift_ratio;
    rec.flags = sol.base_flags;
    if (phase.defined) {
      rec.phi_arcsin = phase.phi_arcsin;
      rec.phi_atan2 = phase.phi_atan2;
    } else {
      rec.flags |= kFlagPhaseUndefined;
    }
  }
  return records;
}

// Producing-module invariants, re-checked on every row before it is
// emitted. A violation marks the row failed rather than aborting the sweep.
inline void revalidate(PointRecord& rec, double initial_norm) {
  if (rec.flags & kFlagPointFailed) return;
  bool ok = std::isfinite(rec.p1) && std::isfinite(rec.p2) &&
            std::isfinite(rec.x) && std::isfinite(rec.y) &&
            rec.p1 >= 0.0 && rec.p2 >= 0.0 &&
            rec.p1 + rec.p2 <= initial_norm + 1e-9 &&
            rec.gamma_ratio >= 0.0;
  if (ok && !(rec.flags & kFlagPhaseUndefined)) {
    const double mag = std::hypot(rec.x, rec.y);
    ok = std::abs(std::sin(rec.phi_arcsin) * mag + rec.y) <=
         1e-10 * std::max(1.0, mag);
  }
  if (!ok) {
    rec.flags |= kFlagPointFailed;
    rec.p1 = rec.p2 = rec.x = rec.y = kNaN;
    rec.phi_arcsin = rec.phi_atan2 = kNaN;
  }
}

}  // namespace detail

/// Run the configured parameter sweep. Points are independent; execution may
/// use spec.workers threads but the dataset layout is fixed by the spec
/// (row-major, axis1 outer), so the result is identical for any worker
/// count. Failing points become flagged NaN rows; only a sweep with no
/// surviving points aborts.
inline Dataset run_sweep(const SweepSpec& spec) {
  spec.validate();
  if (spec.axes.empty())
    throw ConfigError("sweep requires at least one axis");

  std::vector<std::vector<double>> axis_values;
  for (const AxisSpec& ax : spec.axes) axis_values.push_back(ax.values());

  int time_axis = -1;
  for (std::size_t i = 0; i < spec.axes.size(); ++i)
    if (spec.axes[i].param == "time") time_axis = static_cast<int>(i);

  if (spec.solver == SolverKind::volterra && time_axis >= 0) {
    const AxisSpec& ax = spec.axes[static_cast<std::size_t>(time_axis)];
    if (ax.spacing != Spacing::linear || ax.min != 0.0)
      throw ConfigError(
          "volterra solver requires a linear time axis starting at 0");
  }

  const std::vector<double> tgrid =
      time_axis >= 0 ? axis_values[static_cast<std::size_t>(time_axis)]
                     : std::vector<double>{spec.fixed_time};

  std::size_t n_rows = 1;
  for (const auto& v : axis_values) n_rows *= v.size();
  const std::size_t n_groups = n_rows / tgrid.size();

  Dataset dataset;
  for (const AxisSpec& ax : spec.axes) dataset.columns.push_back(ax.param);
  for (const char* c : {"P1", "P2", "X", "Y", "phi_arcsin", "phi_atan2",
                        "gamma_ratio", "shift_ratio", "flags"})
    dataset.columns.emplace_back(c);
  dataset.metadata = detail::resolved_metadata(spec);
  dataset.values.assign(n_rows * dataset.columns.size(), detail::kNaN);

  const double initial_norm = std::norm(spec.c1_0) + std::norm(spec.c2_0);
  std::atomic<std::size_t> next_group{0};
  std::atomic<bool> any_ok{false};
  std::mutex diag_mutex;
  std::string first_diagnostic;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t g = next_group.fetch_add(1);
      if (g >= n_groups) return;

      // group index -> per-axis indices, skipping the time axis
      std::size_t i0 = 0, i1 = 0;
      if (spec.axes.size() == 2) {
        if (time_axis == 0) i1 = g;
        else if (time_axis == 1) i0 = g;
        else {
          i0 = g / axis_values[1].size();
          i1 = g % axis_values[1].size();
        }
      } else if (time_axis < 0) {
        i0 = g;
      }

      double omega0 = spec.omega0, z_atom = spec.z_atom,
             gamma = spec.medium.gamma;
      const auto assign = [&](const std::string& param, double value) {
        if (param == "omega0") omega0 = value;
        else if (param == "zA") z_atom = value;
        else if (param == "gamma") gamma = value;
      };
      if (time_axis != 0) assign(spec.axes[0].param, axis_values[0][i0]);
      if (spec.axes.size() == 2 && time_axis != 1)
        assign(spec.axes[1].param, axis_values[1][i1]);

      std::vector<detail::PointRecord> records;
      try {
        const detail::GroupSolution sol =
            detail::solve_group(spec, omega0, z_atom, gamma, tgrid);
        records = detail::group_records(spec, sol);
      } catch (const std::exception& err) {
        records.assign(tgrid.size(), detail::PointRecord{});
        std::lock_guard<std::mutex> lock(diag_mutex);
        if (first_diagnostic.empty()) first_diagnostic = err.what();
      }

      for (std::size_t ti = 0; ti < tgrid.size(); ++ti) {
        detail::PointRecord& rec = records[ti];
        detail::revalidate(rec, initial_norm);
        if (!(rec.flags & kFlagPointFailed)) any_ok = true;

        std::size_t r0 = i0, r1 = i1;
        if (time_axis == 0) r0 = ti;
        if (time_axis == 1) r1 = ti;
        const std::size_t row =
            spec.axes.size() == 2 ? r0 * axis_values[1].size() + r1 : r0;

        double* out = dataset.values.data() + row * dataset.columns.size();
        std::size_t c = 0;
        out[c++] = axis_values[0][r0];
        if (spec.axes.size() == 2) out[c++] = axis_values[1][r1];
        out[c++] = rec.p1;
        out[c++] = rec.p2;
        out[c++] = rec.x;
        out[c++] = rec.y;
        out[c++] = rec.phi_arcsin;
        out[c++] = rec.phi_atan2;
        out[c++] = rec.gamma_ratio;
        out[c++] = rec.shift_ratio;
        out[c++] = static_cast<double>(rec.flags);
      }
    }
  };

  const int n_threads =
      std::min<int>(spec.workers, static_cast<int>(n_groups));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }

  if (!any_ok)
    throw NumericalError("sweep failed at every point; first diagnostic: " +
                         (first_diagnostic.empty() ? std::string("none")
                                                   : first_diagnostic));
  return dataset;
}

/// Permittivity table: omega, Re eps, Im eps, gap membership.
inline Dataset run_permittivity_table(const SweepSpec& spec) {
  spec.validate();
  AxisSpec axis{"omega0", 0.5, 1.5, 1001, Spacing::linear};
  if (!spec.axes.empty()) axis = spec.axes[0];

  Dataset dataset;
  dataset.columns = {"omega", "eps_re", "eps_im", "in_band_gap"};
  dataset.metadata = detail::resolved_metadata(spec);
  const BandEdges edges = band_edges(spec.medium);
  dataset.metadata.emplace_back("band_edge.lower",
                                detail::format_double(edges.lower));
  dataset.metadata.emplace_back("band_edge.upper",
                                detail::format_double(edges.upper));
  for (double w : axis.values()) {
    const Complex eps = eval_permittivity(spec.medium, w);
    dataset.values.push_back(w);
    dataset.values.push_back(eps.real());
    dataset.values.push_back(eps.imag());
    dataset.values.push_back(in_band_gap(spec.medium, w) ? 1.0 : 0.0);
  }
  return dataset;
}

/// Surface response table along omega0, zA or gamma; optionally cross-checks
/// the line shift by principal-value integration (slow but independent).
inline Dataset run_response_table(const SweepSpec& spec, bool with_pv) {
  spec.validate();
  AxisSpec axis{"omega0", 0.5, 1.5, 201, Spacing::linear};
  if (!spec.axes.empty()) axis = spec.axes[0];
  if (axis.param == "time")
    throw ConfigError("response table axis must be omega0, zA or gamma");

  Dataset dataset;
  dataset.columns = {axis.param, "gamma_ratio", "shift_ratio"};
  if (with_pv) {
    dataset.columns.emplace_back("shift_pv");
    dataset.columns.emplace_back("shift_pv_error");
  }
  dataset.columns.emplace_back("flags");
  dataset.metadata = detail::resolved_metadata(spec);

  for (double v : axis.values()) {
    double omega0 = spec.omega0, z_atom = spec.z_atom,
           gamma = spec.medium.gamma;
    if (axis.param == "omega0") omega0 = v;
    else if (axis.param == "zA") z_atom = v;
    else gamma = v;
    const AtomSurfaceConfig cfg = spec.atom_config(omega0, z_atom, gamma);
    int flags = cfg.short_distance_ok() ? 0 : kFlagShortDistance;
    double gr = detail::kNaN, sr = detail::kNaN;
    double pv = detail::kNaN, pv_err = detail::kNaN;
    try {
      const SurfaceResponse response = surface_response(cfg);
      gr = response.gamma_ratio;
      sr = response.shift_ratio;
      if (with_pv) {
        const quad::Result r = line_shift_pv(cfg);
        pv = r.value;
        pv_err = r.error_estimate;
        if (!r.converged) flags |= kFlagPointFailed;
      }
    } catch (const std::exception&) {
      flags |= kFlagPointFailed;
    }
    dataset.values.push_back(v);
    dataset.values.push_back(gr);
    dataset.values.push_back(sr);
    if (with_pv) {
      dataset.values.push_back(pv);
      dataset.values.push_back(pv_err);
    }
    dataset.values.push_back(static_cast<double>(flags));
  }
  return dataset;
}

/// Single-trajectory table with the complex amplitudes spelled out.
inline Dataset run_evolve_trace(const SweepSpec& spec) {
  spec.validate();
  AxisSpec axis{"time", 0.0, spec.fixed_time, 501, Spacing::linear};
  if (!spec.axes.empty()) {
    if (spec.axes[0].param != "time")
      throw ConfigError("evolve expects a time axis");
    axis = spec.axes[0];
  }
  const std::vector<double> tgrid = axis.values();

  SweepSpec one = spec;
  one.axes = {axis};
  const detail::GroupSolution sol = detail::solve_group(
      one, spec.omega0, spec.z_atom, spec.medium.gamma, tgrid);
  std::vector<detail::PointRecord> records = detail::group_records(one, sol);

  Dataset dataset;
  dataset.columns = {"time",  "c1_re", "c1_im", "c2_re",
                     "c2_im", "P1",    "P2",    "flags"};
  dataset.metadata = detail::resolved_metadata(one);
  const double initial_norm = std::norm(spec.c1_0) + std::norm(spec.c2_0);
  for (std::size_t i = 0; i < tgrid.size(); ++i) {
    detail::revalidate(records[i], initial_norm);
    dataset.values.push_back(tgrid[i]);
    dataset.values.push_back(sol.traj.c1[i].real());
    dataset.values.push_back(sol.traj.c1[i].imag());
    dataset.values.push_back(sol.traj.c2[i].real());
    dataset.values.push_back(sol.traj.c2[i].imag());
    dataset.values.push_back(records[i].p1);
    dataset.values.push_back(records[i].p2);
    dataset.values.push_back(static_cast<double>(records[i].flags));
  }
  return dataset;
}

}  // namespace atomphase
