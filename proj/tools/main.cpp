#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kerrtrack/cli/commands.hpp"
#include "kerrtrack/cli/config.hpp"
#include "kerrtrack/cli/csv.hpp"

namespace {

using nlohmann::json;
using namespace kerrtrack;
using namespace kerrtrack::cli;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

const char* const kKerrKeys[] = {
    "kerr_triple_per_s", "kerr_triple_cm3_per_s", "lambda_s_per_s",  "lambda_a_per_s",
    "lambda_s_cm3_per_s", "lambda_a_cm3_per_s",   "lambda_s_tilde",  "lambda_a_tilde",
    "rho_per_cm3"};

// Command-line overrides of scenario keys, applied on top of --config.
struct ScenarioFlags {
  std::string config;
  std::map<std::string, double> numbers;
  std::map<std::string, std::size_t> counts;
  std::map<std::string, std::string> strings;
  std::optional<bool> compensate;
  std::vector<double> triple;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App& app) {
    app.add_option("--config", config, "JSON scenario or run manifest")->check(CLI::ExistingFile);
    for (const char* key : {"branch", "pulse_shape", "representation", "method"}) {
      add_string(app, key);
    }
    for (const char* key :
         {"tau", "pulse_width_s", "window_ct", "omega0_per_s", "lambda_s_tilde", "lambda_a_tilde",
          "lambda_s_per_s", "lambda_a_per_s", "lambda_s_cm3_per_s", "lambda_a_cm3_per_s",
          "rho_per_cm3", "rel_tol", "abs_tol", "max_step"}) {
      opts[key] = app.add_option(flag(key), numbers[key]);
    }
    for (const char* key : {"samples", "crossing_samples", "separatrix_samples"}) {
      opts[key] = app.add_option(flag(key), counts[key]);
    }
    app.add_option_function<bool>(
        "--compensate-kerr", [this](const bool& v) { compensate = v; },
        "include -lambda_s P_track in the designed detuning (true/false)");
    opts["kerr_triple_per_s"] =
        app.add_option("--kerr-triple-per-s", triple, "lambda11 lambda12 lambda22 in s^-1")
            ->expected(3);
  }

  static std::string flag(std::string key) {
    for (char& c : key) {
      if (c == '_') c = '-';
    }
    return "--" + key;
  }

  void add_string(CLI::App& app, const char* key) {
    opts[key] = app.add_option(flag(key), strings[key]);
  }

  bool given(const std::string& key) const {
    const auto it = opts.find(key);
    return it != opts.end() && it->second->count() > 0;
  }

  // The scenario object (the "config" of a manifest) with overrides applied.
  json document(json* whole = nullptr) const {
    json doc = config.empty() ? json::object() : read_json_file(config);
    if (whole) *whole = doc;
    if (doc.is_object() && doc.contains("manifest_version") && doc.contains("config")) {
      doc = doc.at("config");
    }
    if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");

    bool kerr_override = false;
    for (const char* key : kKerrKeys) kerr_override = kerr_override || given(key);
    if (kerr_override) {
      for (const char* key : kKerrKeys) doc.erase(key);
    }
    if (given("tau")) doc.erase("pulse_width_s");
    if (given("pulse_width_s")) doc.erase("tau");

    json integrator = doc.value("integrator", json::object());
    for (const auto& [key, value] : numbers) {
      if (!given(key)) continue;
      if (key == "rel_tol" || key == "abs_tol" || key == "max_step") {
        integrator[key] = value;
      } else {
        doc[key] = value;
      }
    }
    for (const auto& [key, value] : counts) {
      if (given(key)) doc[key] = value;
    }
    for (const auto& [key, value] : strings) {
      if (!given(key)) continue;
      if (key == "method") {
        integrator[key] = value;
      } else {
        doc[key] = value;
      }
    }
    if (!integrator.empty()) doc["integrator"] = integrator;
    if (compensate) doc["compensate_kerr"] = *compensate;
    if (given("kerr_triple_per_s")) {
      doc["kerr_triple_per_s"] = {
          {"lambda11", triple[0]}, {"lambda12", triple[1]}, {"lambda22", triple[2]}};
    }
    return doc;
  }
};

struct TimeFlags {
  std::vector<double> times_s;
  std::vector<double> times_over_tau;
};

std::vector<double> resolve_times(const TimeFlags& t, const ScenarioConfig& cfg,
                                  const json& whole) {
  std::vector<double> out = t.times_s;
  for (double x : t.times_over_tau) out.push_back(x * cfg.tau);
  if (out.empty() && whole.is_object() && whole.contains("request")) {
    const json& req = whole.at("request");
    if (req.contains("times_s")) out = req.at("times_s").get<std::vector<double>>();
  }
  if (out.empty()) out = {-0.5 * cfg.tau, 0.0, 0.5 * cfg.tau};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic tracking in the two-mode atom-molecule model with Kerr terms"};
  app.set_version_flag("--version", KERRTRACK_VERSION);
  app.require_subcommand(1);

  std::string out_dir = "out";
  ScenarioFlags sim_flags, por_flags, des_flags, fp_flags;
  TimeFlags por_times;
  std::string sweep_config;
  unsigned sweep_threads = 0;
  std::optional<double> fp_at_s, fp_at_over_tau;
  std::string fp_out;

  auto* simulate = app.add_subcommand("simulate", "integrate one tracking scenario");
  sim_flags.add(*simulate);
  simulate->add_option("--out", out_dir, "output directory");

  auto* portrait = app.add_subcommand("portrait", "instantaneous phase portraits");
  por_flags.add(*portrait);
  portrait->add_option("--out", out_dir, "output directory");
  portrait->add_option("--times", por_times.times_s, "snapshot times s");
  portrait->add_option("--times-over-tau", por_times.times_over_tau, "snapshot times s/tau");

  auto* sweep = app.add_subcommand("sweep", "fidelity over a parameter grid");
  sweep->add_option("--config", sweep_config, "JSON sweep document or sweep manifest")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--threads", sweep_threads, "worker threads (0: hardware count)");

  auto* design = app.add_subcommand("design", "designed detuning only");
  des_flags.add(*design);
  design->add_option("--out", out_dir, "output directory");

  auto* fixed = app.add_subcommand("fixed-points", "fixed points at one time");
  fp_flags.add(*fixed);
  auto* at_s = fixed->add_option_function<double>("--at", [&](const double& v) { fp_at_s = v; },
                                                  "time s");
  auto* at_tau = fixed->add_option_function<double>(
      "--at-over-tau", [&](const double& v) { fp_at_over_tau = v; }, "time s/tau");
  at_s->excludes(at_tau);
  fixed->add_option("--out", fp_out, "output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*simulate) {
      const json m = run_simulate(parse_scenario(sim_flags.document()), out_dir);
      std::printf("final_P %s  infidelity %s  crossings %zu  -> %s\n",
                  format_double(m["results"]["final_P"].get<double>()).c_str(),
                  format_double(m["results"]["infidelity"].get<double>()).c_str(),
                  m["results"]["n_tracked_crossings"].get<std::size_t>(), out_dir.c_str());
    } else if (*portrait) {
      json whole;
      const ScenarioConfig cfg = parse_scenario(por_flags.document(&whole));
      const json m = run_portrait(cfg, resolve_times(por_times, cfg, whole), out_dir);
      std::printf("%zu snapshots -> %s\n", m["snapshots"].size(), out_dir.c_str());
    } else if (*sweep) {
      const json m = run_sweep(parse_sweep(read_json_file(sweep_config)), out_dir, sweep_threads);
      std::printf("%zu cells, %zu failed -> %s\n", m["results"]["cells"].get<std::size_t>(),
                  m["results"]["failed"].get<std::size_t>(), out_dir.c_str());
    } else if (*design) {
      run_design(parse_scenario(des_flags.document()), out_dir);
      std::printf("design -> %s\n", out_dir.c_str());
    } else if (*fixed) {
      const ScenarioConfig cfg = parse_scenario(fp_flags.document());
      if (!fp_at_s && !fp_at_over_tau) throw ConfigError("at", "give --at or --at-over-tau");
      const double s = fp_at_s ? *fp_at_s : *fp_at_over_tau * cfg.tau;
      if (fp_out.empty()) {
        write_fixed_points(cfg, s, std::cout);
      } else {
        fs::create_directories(fp_out);
        std::ofstream f(fs::path(fp_out) / "fixed_points.csv", std::ios::binary);
        write_fixed_points(cfg, s, f);
        json m = {{"manifest_version", kManifestVersion},
                  {"tool", "kerrtrack"},
                  {"version", KERRTRACK_VERSION},
                  {"command", "fixed-points"},
                  {"config", cfg.source},
                  {"derived", derived_parameters(cfg)},
                  {"request", {{"at_s", s}}},
                  {"outputs", {"fixed_points.csv"}}};
        write_json(fs::path(fp_out) / "fixed_points_manifest.json", m);
      }
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const kerrtrack::Error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
