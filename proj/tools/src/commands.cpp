#include "kerrtrack/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <thread>

#include "kerrtrack/cli/csv.hpp"
#include "kerrtrack/portrait.hpp"
#include "kerrtrack/simulation.hpp"

#ifndef KERRTRACK_VERSION
#define KERRTRACK_VERSION "unknown"
#endif

namespace kerrtrack::cli {

using nlohmann::json;

namespace {

constexpr double kTrackedMatch = 1e-6;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json tolerances(const ScenarioConfig& cfg) {
  return {{"rel_tol", cfg.integrator.rel_tol},
          {"abs_tol", cfg.integrator.abs_tol},
          {"max_step", cfg.integrator.max_step},
          {"pole_guard", kPoleGuard},
          {"norm_tolerance", kNormTolerance},
          {"degenerate_determinant", kDegenerateDeterminant},
          {"crossing_time_resolution_over_tau", 1e-8}};
}

json manifest(const std::string& command, const json& config, const json& derived,
              const json& tol) {
  return {{"manifest_version", kManifestVersion},
          {"tool", "kerrtrack"},
          {"version", KERRTRACK_VERSION},
          {"command", command},
          {"config", config},
          {"derived", derived},
          {"tolerances", tol}};
}

void ensure_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("cannot create " + out.string() + ": " + ec.message());
}

bool is_tracked(const FixedPoint& fp, Sector branch, double target) {
  return fp.kind == kind_of(branch) && std::abs(fp.P - target) <= kTrackedMatch;
}

double clamp_population(double P) {
  // Integrator error can put P a hair outside [0, 1].
  if (P < -1e-8 || P > 1.0 + 1e-8) {
    throw DomainError("final population " + format_double(P) + " outside [0, 1]");
  }
  return std::clamp(P, 0.0, 1.0);
}

void write_crossings(const fs::path& path, const std::vector<CrossingReport>& reports,
                     double tau) {
  CsvWriter csv(path.string(),
                {"s", "s_over_tau", "branch", "kind", "tag", "before", "after", "P"});
  for (const auto& r : reports) {
    csv.cell(r.s).cell(r.s / tau).cell(to_string(r.branch)).cell(to_string(r.kind))
        .cell(to_string(r.tag)).cell(to_string(r.before)).cell(to_string(r.after)).cell(r.P);
    csv.end_row();
  }
}

json crossings_json(const std::vector<CrossingReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"s", r.s},
                   {"branch", to_string(r.branch)},
                   {"kind", to_string(r.kind)},
                   {"tag", to_string(r.tag)},
                   {"before", to_string(r.before)},
                   {"after", to_string(r.after)},
                   {"P", r.P}});
  }
  return arr;
}

const std::vector<std::string> kFixedPointColumns = {
    "s", "s_over_tau", "kind", "P", "alpha", "stability", "energy", "linear_rate", "tracked"};

void fixed_point_rows(CsvWriter& csv, const ScenarioConfig& cfg, const TrackingScenario& sc,
                      double s, const PortraitParams& params,
                      const std::vector<FixedPoint>& points) {
  const double target = sc.target(s);
  for (const auto& fp : points) {
    csv.cell(s).cell(s / cfg.tau).cell(to_string(fp.kind)).cell(fp.P).cell(fp.alpha())
        .cell(to_string(fp.stability)).cell(fp.energy).cell(linear_rate(fp, params))
        .cell(is_tracked(fp, sc.branch, target));
    csv.end_row();
  }
}

FidelityRecord evaluate_cell(const ScenarioConfig& base, double ls, double tau, Sector branch,
                             bool compensate) {
  FidelityRecord rec;
  rec.lambda_s_tilde = ls;
  rec.tau = tau;
  rec.branch = branch;
  rec.compensate_kerr = compensate;
  rec.final_P = std::numeric_limits<double>::quiet_NaN();
  rec.infidelity = rec.final_P;
  try {
    ScenarioConfig cfg = base;
    cfg.kerr_tilde = kerr_from_combinations(ls, base.lambda_a_tilde());
    cfg.tau = tau;
    cfg.branch = branch;
    cfg.compensate_kerr = compensate;
    const TrackingScenario sc = cfg.scenario();
    const TrackedRun run =
        simulate_tracked(sc, cfg.representation, cfg.integrator, cfg.samples, cfg.kerr_tilde);
    rec.final_P = clamp_population(run.final_population());
    rec.infidelity = 1.0 - rec.final_P;
    if (cfg.pulse == PulseShape::sech) {
      rec.n_crossings = count_tracked_crossings(scan_crossings(sc, cfg.crossing_samples));
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = {
      "s",           "s_over_tau",        "P",       "Pi2",     "Pi3",          "alpha_or_nan",
      "omega_tilde", "delta_tilde_track", "P_track", "J_drift", "surface_drift"};
  return cols;
}

json derived_parameters(const ScenarioConfig& cfg) {
  const KerrParams k = cfg.kerr_per_s();
  const TrackingScenario sc = cfg.scenario();
  const double ls = cfg.lambda_s_tilde();
  return {{"lambda_s_tilde", ls},
          {"lambda_a_tilde", cfg.lambda_a_tilde()},
          {"omega0_over_lambda_s", ls == 0.0 ? json("inf") : json(1.0 / ls)},
          {"tau", cfg.tau},
          {"pulse_width_s", cfg.tau / cfg.omega0_per_s},
          {"kerr_per_s",
           {{"lambda11", k.lambda11},
            {"lambda12", k.lambda12},
            {"lambda22", k.lambda22},
            {"lambda_s", k.lambda_s},
            {"lambda_a", k.lambda_a}}},
          {"window", {sc.window_begin(), sc.window_end()}},
          {"edge_policy",
           {{"pulse_over_2_sqrt_target_limit", number_or_null(sc.edge_ratio_limit.value_or(NAN))},
            {"applies_where_P_track_below", kPoleGuard}}}};
}

json run_simulate(const ScenarioConfig& cfg, const fs::path& out) {
  const TrackingScenario sc = cfg.scenario();
  const TrackedRun run =
      simulate_tracked(sc, cfg.representation, cfg.integrator, cfg.samples, cfg.kerr_tilde);
  const Trajectory& tr = run.trajectory;
  // Everything that can fail runs before the first file is written.
  json crossings_status = "ok";
  std::vector<CrossingReport> reports;
  if (cfg.pulse == PulseShape::off) {
    crossings_status = "skipped: no coupling";
  } else {
    reports = scan_crossings(sc, cfg.crossing_samples);
  }
  const double final_P = clamp_population(run.final_population());

  ensure_dir(out);
  {
    CsvWriter csv((out / "trajectory.csv").string(), trajectory_columns());
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const double s = tr.times[i];
      const ReducedState& st = tr.states[i];
      csv.cell(s).cell(s / cfg.tau).cell(st.P).cell(st.Pi2).cell(st.Pi3).cell(tr.alpha[i])
          .cell(run.omega_tilde[i]).cell(run.delta_tilde[i]).cell(run.target[i])
          .cell(tr.j_drift.empty() ? std::numeric_limits<double>::quiet_NaN() : tr.j_drift[i])
          .cell(tr.surface_drift[i]);
      csv.end_row();
    }
  }

  write_crossings(out / "crossings.csv", reports, cfg.tau);

  {
    CsvWriter csv((out / "fixed_points_timeline.csv").string(), kFixedPointColumns);
    for (double s : tr.times) {
      const PortraitParams params = scenario_params_at(sc, s);
      fixed_point_rows(csv, cfg, sc, s, params, fixed_points_at(params));
    }
  }

  json results = {{"final_P", final_P},
                  {"infidelity", 1.0 - final_P},
                  {"n_tracked_crossings", count_tracked_crossings(reports)},
                  {"crossings_status", crossings_status},
                  {"crossings", crossings_json(reports)},
                  {"max_abs_surface_drift", tr.max_abs_surface_drift()}};
  if (!tr.j_drift.empty()) results["max_abs_J_drift"] = tr.max_abs_j_drift();
  if (cfg.pulse == PulseShape::sech) {
    results["tanh_identity_deviation"] = verify_tanh_identity(tr, sc.pulse);
  }

  json m = manifest("simulate", cfg.source, derived_parameters(cfg), tolerances(cfg));
  m["outputs"] = {"trajectory.csv", "crossings.csv", "fixed_points_timeline.csv"};
  m["results"] = std::move(results);
  write_json(out / "manifest.json", m);
  return m;
}

json run_portrait(const ScenarioConfig& cfg, const std::vector<double>& times_s,
                  const fs::path& out) {
  if (times_s.empty()) throw ConfigError("times", "at least one time is required");
  ensure_dir(out);
  const TrackingScenario sc = cfg.scenario();

  std::vector<std::future<PortraitSnapshot>> jobs;
  jobs.reserve(times_s.size());
  for (double s : times_s) {
    jobs.push_back(std::async(std::launch::async, [&sc, &cfg, s] {
      return portrait_at(sc, s, cfg.separatrix_samples);
    }));
  }
  std::vector<PortraitSnapshot> snaps;
  snaps.reserve(jobs.size());
  for (auto& j : jobs) snaps.push_back(j.get());

  json index = json::array();
  json outputs = json::array();
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    const PortraitSnapshot& snap = snaps[k];
    char stem[32];
    std::snprintf(stem, sizeof stem, "portrait_%03zu", k);
    const std::string fp_name = std::string(stem) + "_fixed_points.csv";
    const std::string sep_name = std::string(stem) + "_separatrices.csv";
    {
      CsvWriter csv((out / fp_name).string(), kFixedPointColumns);
      fixed_point_rows(csv, cfg, sc, snap.s, snap.params, snap.fixed_points);
    }
    {
      CsvWriter csv((out / sep_name).string(),
                    {"owner_kind", "owner_P", "piece", "P", "alpha"});
      for (const auto& sep : snap.separatrices) {
        // The second piece (alpha <= 0) starts where P drops back.
        std::size_t piece = 0;
        for (std::size_t i = 0; i < sep.points.size(); ++i) {
          if (i > 0 && sep.points[i].P < sep.points[i - 1].P) piece = 1;
          csv.cell(to_string(sep.owner.kind)).cell(sep.owner.P).cell(piece)
              .cell(sep.points[i].P).cell(sep.points[i].alpha);
          csv.end_row();
        }
      }
    }
    index.push_back({{"s", snap.s},
                     {"s_over_tau", snap.s / cfg.tau},
                     {"omega_tilde", snap.params.omega_tilde},
                     {"delta_tilde", snap.params.delta_tilde},
                     {"lambda_s_tilde", snap.params.lambda_s_tilde},
                     {"P_track", sc.target(snap.s)},
                     {"fixed_points", fp_name},
                     {"separatrices", sep_name}});
    outputs.push_back(fp_name);
    outputs.push_back(sep_name);
  }

  json m = manifest("portrait", cfg.source, derived_parameters(cfg), tolerances(cfg));
  m["request"] = {{"times_s", times_s}};
  m["outputs"] = std::move(outputs);
  m["snapshots"] = std::move(index);
  write_json(out / "portraits.json", m);
  return m;
}

double FidelityRecord::omega0_over_lambda_s() const {
  return lambda_s_tilde == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / lambda_s_tilde;
}

std::vector<FidelityRecord> evaluate_sweep(const SweepConfig& sweep, unsigned threads) {
  struct Cell {
    double ls, tau;
    Sector branch;
    bool compensate;
  };
  std::vector<Cell> cells;
  cells.reserve(sweep.cell_count());
  for (double ls : sweep.lambda_s_tilde) {
    for (double tau : sweep.tau) {
      for (Sector b : sweep.branch) {
        for (bool c : sweep.compensate_kerr) cells.push_back({ls, tau, b, c});
      }
    }
  }

  std::vector<FidelityRecord> records(cells.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      records[i] = evaluate_cell(sweep.base, c.ls, c.tau, c.branch, c.compensate);
    }
  };
  std::vector<std::future<void>> pool;
  for (unsigned t = 0; t < threads; ++t) pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return records;
}

json run_sweep(const SweepConfig& sweep, const fs::path& out, unsigned threads) {
  ensure_dir(out);
  const auto records = evaluate_sweep(sweep, threads);
  std::size_t failed = 0;
  {
    CsvWriter csv((out / "sweep.csv").string(),
                  {"omega0_over_lambda_s", "lambda_s_tilde", "tau", "branch", "compensate_kerr",
                   "final_P", "infidelity", "n_crossings", "status", "error"});
    for (const auto& r : records) {
      csv.cell(r.omega0_over_lambda_s()).cell(r.lambda_s_tilde).cell(r.tau)
          .cell(to_string(r.branch)).cell(r.compensate_kerr).cell(r.final_P).cell(r.infidelity)
          .cell(r.n_crossings).cell(std::string_view(r.ok ? "ok" : "failed")).cell(r.error);
      csv.end_row();
      if (!r.ok) ++failed;
    }
  }
  json m = manifest("sweep", sweep.source, derived_parameters(sweep.base), tolerances(sweep.base));
  m["outputs"] = {"sweep.csv"};
  m["results"] = {{"cells", records.size()}, {"failed", failed}};
  write_json(out / "sweep_manifest.json", m);
  return m;
}

json run_design(const ScenarioConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const TrackingScenario sc = cfg.scenario();
  const Window w = Window::symmetric(cfg.tau, cfg.window_ct, cfg.samples);
  {
    CsvWriter csv((out / "design.csv").string(),
                  {"s", "s_over_tau", "omega_tilde", "P_track", "delta_tilde_track",
                   "edge_limit_used"});
    for (double s : w.grid()) {
      const double target = sc.target(s);
      csv.cell(s).cell(s / cfg.tau).cell(sc.pulse(s)).cell(target)
          .cell(tracking_detuning_at(sc, s)).cell(target < kPoleGuard);
      csv.end_row();
    }
  }
  json m = manifest("design", cfg.source, derived_parameters(cfg), tolerances(cfg));
  m["outputs"] = {"design.csv"};
  write_json(out / "design_manifest.json", m);
  return m;
}

void write_fixed_points(const ScenarioConfig& cfg, double s, std::ostream& os) {
  const TrackingScenario sc = cfg.scenario();
  const PortraitParams params = scenario_params_at(sc, s);
  CsvWriter csv(os, kFixedPointColumns);
  fixed_point_rows(csv, cfg, sc, s, params, fixed_points_at(params));
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << doc.dump(2) << '\n';
}

}  // namespace kerrtrack::cli
