#include "stokes/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "stokes/errors.hpp"

namespace stokes {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Depth depth_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return Depth::parse(j.get<std::string>());
    if (j.is_number()) return Depth::finite(j.get<double>());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  throw ConfigError(where + ": depth must be a positive number or \"inf\"");
}

json depth_to_json(const Depth& d) {
  if (d.is_infinite()) return "inf";
  return d.value();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("tolerance '") + name + "' must be positive");
}

}  // namespace

int RunConfig::max_wavenumber() const {
  int m = std::abs(j_star);
  if (partner) m = std::max(m, std::abs(*partner));
  if (j) m = std::max(m, std::abs(*j));
  return m;
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
  if (j_star == 0) throw ConfigError("j_star must be nonzero");
  if (partner && *partner == 0) throw ConfigError("partner must be nonzero");
  if (j && *j == 0) throw ConfigError("j must be nonzero");
  if (j_max < std::abs(j_star)) throw ConfigError("j_max must be at least |j_star|");
  require_positive(tol.resonance, "resonance");
  require_positive(tol.newton, "newton");
  require_positive(tol.residual, "residual");
  require_positive(tol.distinct, "distinct");
  if (grid.n_modes < 4 * max_wavenumber()) throw ConfigError("grid.N must be at least 4 max|j|");
  if (grid.dealias < 3) throw ConfigError("grid.dealias must be at least 3");
  if (grid.dno_order < 1) throw ConfigError("grid.dno_order must be positive");
  if (multistart < 1) throw ConfigError("multistart must be positive");
  if (threads < 1) throw ConfigError("threads must be positive");
  for (double e : epsilons) {
    if (!std::isfinite(e)) throw ConfigError("epsilons must be finite");
  }
  for (double a : a_values) {
    if (!std::isfinite(a)) throw ConfigError("a_values must be finite");
  }
  for (double c : c_values) {
    if (!std::isfinite(c)) throw ConfigError("c_values must be finite");
  }
}

DriverOptions RunConfig::driver_options() const {
  DriverOptions o;
  o.tol = tol.residual;
  o.distinct_tol = tol.distinct;
  o.seed = seed;
  o.threads = threads;
  o.reduction.newton_tol = tol.newton;
  return o;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  reject_unknown(j,
                 {"params", "grid", "tolerances", "j_star", "partner", "j", "j_max", "epsilons", "a_values",
                  "c_values", "multistart", "seed", "atlas", "output_dir", "threads"},
                 "config");
  if (j.contains("params")) {
    const json& p = j.at("params");
    reject_unknown(p, {"g", "depth", "kappa", "gamma"}, "params");
    read(p, "g", c.params.g, "params");
    read(p, "kappa", c.params.kappa, "params");
    read(p, "gamma", c.params.gamma, "params");
    if (p.contains("depth")) c.params.depth = depth_from_json(p.at("depth"), "params.depth");
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, {"N", "dealias", "dno_order"}, "grid");
    read(g, "N", c.grid.n_modes, "grid");
    read(g, "dealias", c.grid.dealias, "grid");
    read(g, "dno_order", c.grid.dno_order, "grid");
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    reject_unknown(t, {"resonance", "newton", "residual", "distinct"}, "tolerances");
    read(t, "resonance", c.tol.resonance, "tolerances");
    read(t, "newton", c.tol.newton, "tolerances");
    read(t, "residual", c.tol.residual, "tolerances");
    read(t, "distinct", c.tol.distinct, "tolerances");
  }
  read(j, "j_star", c.j_star, "config");
  if (j.contains("partner") && !j.at("partner").is_null()) {
    int v = 0;
    read(j, "partner", v, "config");
    c.partner = v;
  }
  if (j.contains("j") && !j.at("j").is_null()) {
    int v = 0;
    read(j, "j", v, "config");
    c.j = v;
  }
  read(j, "j_max", c.j_max, "config");
  read(j, "epsilons", c.epsilons, "config");
  read(j, "a_values", c.a_values, "config");
  read(j, "c_values", c.c_values, "config");
  read(j, "multistart", c.multistart, "config");
  read(j, "seed", c.seed, "config");
  read(j, "output_dir", c.output_dir, "config");
  read(j, "threads", c.threads, "config");
  if (j.contains("atlas")) {
    const json& a = j.at("atlas");
    reject_unknown(a, {"g", "depth", "kappa", "gamma"}, "atlas");
    read(a, "g", c.atlas.g, "atlas");
    read(a, "kappa", c.atlas.kappa, "atlas");
    read(a, "gamma", c.atlas.gamma, "atlas");
    if (a.contains("depth")) {
      if (!a.at("depth").is_array()) throw ConfigError("atlas.depth: expected a list");
      c.atlas.depth.clear();
      for (const auto& d : a.at("depth")) c.atlas.depth.push_back(depth_from_json(d, "atlas.depth"));
    }
  }
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

json to_json(const RunConfig& c) {
  json depths = json::array();
  for (const auto& d : c.atlas.depth) depths.push_back(depth_to_json(d));
  json out = {
      {"params", {{"g", c.params.g}, {"depth", depth_to_json(c.params.depth)}, {"kappa", c.params.kappa},
                  {"gamma", c.params.gamma}}},
      {"grid", {{"N", c.grid.n_modes}, {"dealias", c.grid.dealias}, {"dno_order", c.grid.dno_order}}},
      {"tolerances", {{"resonance", c.tol.resonance}, {"newton", c.tol.newton}, {"residual", c.tol.residual},
                      {"distinct", c.tol.distinct}}},
      {"j_star", c.j_star},
      {"partner", c.partner ? json(*c.partner) : json(nullptr)},
      {"j", c.j ? json(*c.j) : json(nullptr)},
      {"j_max", c.j_max},
      {"epsilons", c.epsilons},
      {"a_values", c.a_values},
      {"c_values", c.c_values},
      {"multistart", c.multistart},
      {"seed", c.seed},
      {"atlas", {{"g", c.atlas.g}, {"depth", depths}, {"kappa", c.atlas.kappa}, {"gamma", c.atlas.gamma}}},
      {"output_dir", c.output_dir},
      {"threads", c.threads}};
  return out;
}

std::string serialize_config(const RunConfig& c) { return to_json(c).dump(2) + "\n"; }

}  // namespace stokes
