#include "kerrtrack/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace kerrtrack::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kScenarioKeys = {
    "branch", "compensate_kerr", "pulse_shape", "tau", "pulse_width_s", "window_ct",
    "omega0_per_s", "kerr_triple_per_s", "kerr_triple_cm3_per_s", "lambda_s_per_s",
    "lambda_a_per_s", "lambda_s_cm3_per_s", "lambda_a_cm3_per_s", "lambda_s_tilde",
    "lambda_a_tilde", "rho_per_cm3", "integrator", "representation", "samples",
    "crossing_samples", "separatrix_samples"};

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
  return d;
}

double positive(const json& obj, const std::string& key, const std::string& path) {
  const double d = number(obj, key, path);
  if (!(d > 0.0)) throw ConfigError(join(path, key), "must be positive");
  return d;
}

std::size_t count(const json& obj, const std::string& key, const std::string& path,
                  std::size_t minimum) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(join(path, key), "expected an integer");
  }
  const auto n = v.get<long long>();
  if (n < static_cast<long long>(minimum)) {
    throw ConfigError(join(path, key), "must be at least " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(n);
}

bool boolean(const json& obj, const std::string& key, const std::string& path) {
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
  return v.get<bool>();
}

Sector sector(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected \"alpha0\" or \"alphaPi\"");
  const auto parsed = parse_sector(v.get<std::string>());
  if (!parsed) throw ConfigError(field, "expected \"alpha0\" or \"alphaPi\"");
  return *parsed;
}

KerrParams triple_from(const json& obj, const std::string& key, const std::string& path,
                       double factor) {
  const json& t = obj.at(key);
  const std::string field = join(path, key);
  if (!t.is_object()) throw ConfigError(field, "expected {lambda11, lambda12, lambda22}");
  for (const auto& [k, _] : t.items()) {
    if (k != "lambda11" && k != "lambda12" && k != "lambda22") {
      throw ConfigError(join(field, k), "unknown key");
    }
  }
  for (const char* k : {"lambda11", "lambda12", "lambda22"}) {
    if (!t.contains(k)) throw ConfigError(join(field, k), "missing");
  }
  return derive_kerr_combinations(number(t, "lambda11", field) * factor,
                                  number(t, "lambda12", field) * factor,
                                  number(t, "lambda22", field) * factor);
}

void parse_integrator(const json& obj, const std::string& path, IntegratorConfig& cfg) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [k, _] : obj.items()) {
    if (k != "rel_tol" && k != "abs_tol" && k != "max_step" && k != "method") {
      throw ConfigError(join(path, k), "unknown key");
    }
  }
  if (obj.contains("rel_tol")) cfg.rel_tol = positive(obj, "rel_tol", path);
  if (obj.contains("abs_tol")) cfg.abs_tol = positive(obj, "abs_tol", path);
  if (obj.contains("max_step")) {
    cfg.max_step = number(obj, "max_step", path);
    if (cfg.max_step < 0.0) throw ConfigError(join(path, "max_step"), "must be >= 0");
  }
  if (obj.contains("method")) {
    const json& m = obj.at("method");
    if (m == "rkf78") {
      cfg.method = IntegratorConfig::Method::fehlberg78;
    } else if (m == "dopri5") {
      cfg.method = IntegratorConfig::Method::dopri5;
    } else {
      throw ConfigError(join(path, "method"), "expected \"rkf78\" or \"dopri5\"");
    }
  }
}

json integrator_json(const IntegratorConfig& cfg) {
  return {{"rel_tol", cfg.rel_tol},
          {"abs_tol", cfg.abs_tol},
          {"max_step", cfg.max_step},
          {"method", cfg.method == IntegratorConfig::Method::fehlberg78 ? "rkf78" : "dopri5"}};
}

}  // namespace

TrackingScenario ScenarioConfig::scenario() const {
  TrackingScenario sc =
      TrackingScenario::canonical(branch, lambda_s_tilde(), tau, compensate_kerr, window_ct);
  if (pulse == PulseShape::off) {
    sc.pulse = [](double) { return 0.0; };
    sc.edge_ratio_limit = 0.0;
  }
  return sc;
}

ScenarioConfig parse_scenario(const json& input) {
  const json& doc = (input.is_object() && input.contains("config") &&
                     input.contains("manifest_version"))
                        ? input.at("config")
                        : input;
  if (!doc.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [k, _] : doc.items()) {
    if (!kScenarioKeys.contains(k)) throw ConfigError(k, "unknown key");
  }

  ScenarioConfig cfg;
  json norm = json::object();

  if (doc.contains("branch")) cfg.branch = sector(doc.at("branch"), "branch");
  norm["branch"] = std::string(to_string(cfg.branch));

  if (doc.contains("compensate_kerr")) cfg.compensate_kerr = boolean(doc, "compensate_kerr", "");
  norm["compensate_kerr"] = cfg.compensate_kerr;

  if (doc.contains("pulse_shape")) {
    const json& v = doc.at("pulse_shape");
    if (v == "sech") {
      cfg.pulse = PulseShape::sech;
    } else if (v == "off") {
      cfg.pulse = PulseShape::off;
    } else {
      throw ConfigError("pulse_shape", "expected \"sech\" or \"off\"");
    }
  }
  norm["pulse_shape"] = cfg.pulse == PulseShape::sech ? "sech" : "off";

  if (doc.contains("omega0_per_s")) cfg.omega0_per_s = positive(doc, "omega0_per_s", "");
  norm["omega0_per_s"] = cfg.omega0_per_s;

  const bool has_tau = doc.contains("tau");
  const bool has_width = doc.contains("pulse_width_s");
  if (has_tau && has_width) {
    throw ConfigError("tau", "give either tau or pulse_width_s, not both");
  }
  if (has_tau) {
    cfg.tau = positive(doc, "tau", "");
  } else if (has_width) {
    cfg.tau = positive(doc, "pulse_width_s", "") * cfg.omega0_per_s;
  }
  norm["tau"] = cfg.tau;

  if (doc.contains("window_ct")) cfg.window_ct = positive(doc, "window_ct", "");
  norm["window_ct"] = cfg.window_ct;

  // Kerr terms: exactly one of the triple or the direct combinations.
  const bool has_rho = doc.contains("rho_per_cm3");
  const double rho = has_rho ? positive(doc, "rho_per_cm3", "") : 1.0;
  const bool triple = doc.contains("kerr_triple_per_s");
  const bool triple_rho = doc.contains("kerr_triple_cm3_per_s");
  const bool direct = doc.contains("lambda_s_per_s") || doc.contains("lambda_a_per_s");
  const bool direct_rho = doc.contains("lambda_s_cm3_per_s") || doc.contains("lambda_a_cm3_per_s");
  const bool tilde = doc.contains("lambda_s_tilde") || doc.contains("lambda_a_tilde");
  const int forms = int(triple) + int(triple_rho) + int(direct) + int(direct_rho) + int(tilde);
  if (forms > 1) {
    throw ConfigError("kerr", "give exactly one of the Kerr triple or the direct "
                              "(lambda_s, lambda_a) combinations");
  }
  if ((triple_rho || direct_rho) && !has_rho) {
    throw ConfigError("rho_per_cm3", "required by density-scaled Kerr coefficients");
  }
  if (has_rho && !(triple_rho || direct_rho)) {
    throw ConfigError("rho_per_cm3", "only meaningful with *_cm3_per_s Kerr keys");
  }
  auto optional_number = [&](const char* key) {
    return doc.contains(key) ? number(doc, key, "") : 0.0;
  };
  const double inv = 1.0 / cfg.omega0_per_s;
  if (triple || triple_rho) {
    const char* key = triple ? "kerr_triple_per_s" : "kerr_triple_cm3_per_s";
    cfg.kerr_tilde = triple_from(doc, key, "", (triple ? 1.0 : rho) * inv);
    norm["kerr_triple_per_s"] = {{"lambda11", cfg.kerr_tilde.lambda11 * cfg.omega0_per_s},
                                 {"lambda12", cfg.kerr_tilde.lambda12 * cfg.omega0_per_s},
                                 {"lambda22", cfg.kerr_tilde.lambda22 * cfg.omega0_per_s}};
    if (triple_rho) {
      norm["kerr_triple_cm3_per_s"] = doc.at(key);
      norm["rho_per_cm3"] = rho;
      norm.erase("kerr_triple_per_s");
    }
  } else if (direct || direct_rho) {
    const double f = (direct ? 1.0 : rho) * inv;
    const double ls = optional_number(direct ? "lambda_s_per_s" : "lambda_s_cm3_per_s");
    const double la = optional_number(direct ? "lambda_a_per_s" : "lambda_a_cm3_per_s");
    cfg.kerr_tilde = kerr_from_combinations(ls * f, la * f);
    if (direct) {
      norm["lambda_s_per_s"] = ls;
      norm["lambda_a_per_s"] = la;
    } else {
      norm["lambda_s_cm3_per_s"] = ls;
      norm["lambda_a_cm3_per_s"] = la;
      norm["rho_per_cm3"] = rho;
    }
  } else {
    const double ls = optional_number("lambda_s_tilde");
    const double la = optional_number("lambda_a_tilde");
    cfg.kerr_tilde = kerr_from_combinations(ls, la);
    norm["lambda_s_tilde"] = ls;
    norm["lambda_a_tilde"] = la;
  }

  if (doc.contains("integrator")) parse_integrator(doc.at("integrator"), "integrator", cfg.integrator);
  norm["integrator"] = integrator_json(cfg.integrator);

  if (doc.contains("representation")) {
    const json& v = doc.at("representation");
    const auto r = v.is_string() ? parse_representation(v.get<std::string>()) : std::nullopt;
    if (!r) throw ConfigError("representation", "expected \"amplitude\" or \"reduced\"");
    cfg.representation = *r;
  }
  norm["representation"] = std::string(to_string(cfg.representation));

  if (doc.contains("samples")) cfg.samples = count(doc, "samples", "", 2);
  if (doc.contains("crossing_samples")) cfg.crossing_samples = count(doc, "crossing_samples", "", 3);
  if (doc.contains("separatrix_samples")) {
    cfg.separatrix_samples = count(doc, "separatrix_samples", "", 3);
  }
  norm["samples"] = cfg.samples;
  norm["crossing_samples"] = cfg.crossing_samples;
  norm["separatrix_samples"] = cfg.separatrix_samples;

  cfg.source = std::move(norm);
  return cfg;
}

SweepConfig parse_sweep(const json& input) {
  const json& doc = (input.is_object() && input.contains("config") &&
                     input.contains("manifest_version"))
                        ? input.at("config")
                        : input;
  if (!doc.is_object()) throw ConfigError("sweep", "expected a JSON object");
  for (const auto& [k, _] : doc.items()) {
    if (k != "base" && k != "grid") throw ConfigError(k, "unknown key");
  }
  SweepConfig sw;
  sw.base = parse_scenario(doc.value("base", json::object()));
  if (!doc.contains("grid") || !doc.at("grid").is_object()) {
    throw ConfigError("grid", "missing grid object");
  }
  const json& g = doc.at("grid");
  for (const auto& [k, _] : g.items()) {
    if (k != "omega0_over_lambda_s" && k != "lambda_s_tilde" && k != "tau" && k != "branch" &&
        k != "compensate_kerr") {
      throw ConfigError("grid." + k, "unknown key");
    }
  }
  auto list = [&](const char* key) -> const json& {
    const json& v = g.at(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(std::string("grid.") + key, "expected a non-empty list");
    }
    return v;
  };
  if (g.contains("omega0_over_lambda_s") && g.contains("lambda_s_tilde")) {
    throw ConfigError("grid", "give omega0_over_lambda_s or lambda_s_tilde, not both");
  }
  if (g.contains("omega0_over_lambda_s")) {
    for (const json& v : list("omega0_over_lambda_s")) {
      // "inf" means no Kerr term.
      if (v.is_string() && v == "inf") {
        sw.lambda_s_tilde.push_back(0.0);
      } else if (v.is_number() && v.get<double>() > 0.0) {
        sw.lambda_s_tilde.push_back(1.0 / v.get<double>());
      } else {
        throw ConfigError("grid.omega0_over_lambda_s", "entries must be positive or \"inf\"");
      }
    }
  } else if (g.contains("lambda_s_tilde")) {
    for (const json& v : list("lambda_s_tilde")) {
      if (!v.is_number()) throw ConfigError("grid.lambda_s_tilde", "entries must be numbers");
      sw.lambda_s_tilde.push_back(v.get<double>());
    }
  } else {
    sw.lambda_s_tilde.push_back(sw.base.lambda_s_tilde());
  }
  if (g.contains("tau")) {
    for (const json& v : list("tau")) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) {
        throw ConfigError("grid.tau", "entries must be positive numbers");
      }
      sw.tau.push_back(v.get<double>());
    }
  } else {
    sw.tau.push_back(sw.base.tau);
  }
  if (g.contains("branch")) {
    for (const json& v : list("branch")) sw.branch.push_back(sector(v, "grid.branch"));
  } else {
    sw.branch.push_back(sw.base.branch);
  }
  if (g.contains("compensate_kerr")) {
    for (const json& v : list("compensate_kerr")) {
      if (!v.is_boolean()) throw ConfigError("grid.compensate_kerr", "entries must be booleans");
      sw.compensate_kerr.push_back(v.get<bool>());
    }
  } else {
    sw.compensate_kerr.push_back(sw.base.compensate_kerr);
  }
  sw.source = {{"base", sw.base.source}, {"grid", g}};
  return sw;
}

KerrParams kerr_from_combinations(double lambda_s, double lambda_a) {
  return derive_kerr_combinations(0.5 * lambda_a, 0.0, 2.0 * (lambda_s - lambda_a));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace kerrtrack::cli
