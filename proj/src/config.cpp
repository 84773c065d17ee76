#include "optomech/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <array>

#include "optomech/constants.hpp"
#include "optomech/error.hpp"

namespace optomech {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Observable, std::string_view>, 10> observable_names{{
    {Observable::E3, "E3"},
    {Observable::Mmax, "Mmax"},
    {Observable::E12, "E12"},
    {Observable::E23, "E23"},
    {Observable::E13, "E13"},
    {Observable::E1_23, "E1_23"},
    {Observable::E2_13, "E2_13"},
    {Observable::E3_12, "E3_12"},
    {Observable::chi_eff, "chi_eff"},
    {Observable::Nw, "Nw"},
}};

enum class Quantity {
  mass, omega_m, gamma_m, temperature, power, wavelength, length, kappa, gamma_a, Delta_a,
  Delta_c, Delta_c_eff, g_N, finesse
};

// Unit factor to SI; `per_omega_m` keys are multiplied by ω_m instead.
struct KeyInfo {
  Quantity quantity;
  double factor;
  bool per_omega_m = false;
};

const std::map<std::string, KeyInfo, std::less<>>& key_table() {
  static const std::map<std::string, KeyInfo, std::less<>> table{
      {"mass_si", {Quantity::mass, 1.0}},
      {"mass_ng", {Quantity::mass, 1e-12}},
      {"omega_m_si", {Quantity::omega_m, 1.0}},
      {"omega_m_over_2pi_hz", {Quantity::omega_m, constants::two_pi}},
      {"gamma_m_si", {Quantity::gamma_m, 1.0}},
      {"gamma_m_over_2pi_hz", {Quantity::gamma_m, constants::two_pi}},
      {"temperature_si", {Quantity::temperature, 1.0}},
      {"temperature_k", {Quantity::temperature, 1.0}},
      {"temperature_mk", {Quantity::temperature, 1e-3}},
      {"power_si", {Quantity::power, 1.0}},
      {"power_mw", {Quantity::power, 1e-3}},
      {"wavelength_si", {Quantity::wavelength, 1.0}},
      {"wavelength_nm", {Quantity::wavelength, 1e-9}},
      {"length_si", {Quantity::length, 1.0}},
      {"length_mm", {Quantity::length, 1e-3}},
      {"kappa_si", {Quantity::kappa, 1.0}},
      {"kappa_over_2pi_hz", {Quantity::kappa, constants::two_pi}},
      {"finesse", {Quantity::finesse, 1.0}},
      {"gamma_a_si", {Quantity::gamma_a, 1.0}},
      {"gamma_a_over_2pi_hz", {Quantity::gamma_a, constants::two_pi}},
      {"Delta_a_si", {Quantity::Delta_a, 1.0}},
      {"Delta_a_over_2pi_hz", {Quantity::Delta_a, constants::two_pi}},
      {"Delta_a_over_omega_m", {Quantity::Delta_a, 1.0, true}},
      {"Delta_c_si", {Quantity::Delta_c, 1.0}},
      {"Delta_c_over_omega_m", {Quantity::Delta_c, 1.0, true}},
      {"Delta_c_eff_si", {Quantity::Delta_c_eff, 1.0}},
      {"Delta_c_eff_over_omega_m", {Quantity::Delta_c_eff, 1.0, true}},
      {"g_N_si", {Quantity::g_N, 1.0}},
      {"g_N_over_2pi_hz", {Quantity::g_N, constants::two_pi}},
  };
  return table;
}

// Keys that compete for the same physical quantity.
int group_of(Quantity q) {
  switch (q) {
    case Quantity::finesse: return static_cast<int>(Quantity::kappa);
    case Quantity::Delta_c_eff: return static_cast<int>(Quantity::Delta_c);
    default: return static_cast<int>(q);
  }
}

const KeyInfo& lookup(std::string_view key) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown physical key '" + std::string(key) + "'");
  return it->second;
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
  return x;
}

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
}

}  // namespace

std::string_view to_string(Observable o) {
  for (const auto& [obs, name] : observable_names)
    if (obs == o) return name;
  return "?";
}

Observable parse_observable(std::string_view name) {
  for (const auto& [obs, n] : observable_names)
    if (n == name) return obs;
  throw ConfigError("unknown observable '" + std::string(name) + "'");
}

const std::vector<Observable>& all_observables() {
  static const std::vector<Observable> all = [] {
    std::vector<Observable> v;
    for (const auto& [obs, _] : observable_names) v.push_back(obs);
    return v;
  }();
  return all;
}

const std::vector<std::string>& physical_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : key_table()) v.push_back(k);
    return v;
  }();
  return keys;
}

void SweepSpec::validate() const {
  lookup(parameter);
  if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("sweep bounds must be finite");
  if (!(from < to)) throw ConfigError("sweep needs from < to");
  if (points < 2) throw ConfigError("sweep needs at least 2 points");
  if (scale == SweepScale::log && !(from > 0)) throw ConfigError("log sweep needs positive bounds");
}

std::vector<double> SweepSpec::values() const {
  validate();
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double n = points - 1;
    v[i] = scale == SweepScale::linear
               ? (from * (n - i) + to * i) / n
               : std::exp((std::log(from) * (n - i) + std::log(to) * i) / n);
  }
  v.front() = from;
  v.back() = to;
  return v;
}

PhysicalParams ScenarioConfig::params() const {
  if (!physical.is_object()) throw ConfigError("\"physical\" must be an object");
  std::map<Quantity, std::pair<std::string, double>> given;
  std::map<int, std::string> seen_group;
  for (const auto& [key, value] : physical.items()) {
    const auto& info = lookup(key);
    const double x = number(value, key);
    const int g = group_of(info.quantity);
    if (auto it = seen_group.find(g); it != seen_group.end()) {
      // finesse overrides κ; other duplicates are ambiguous.
      const bool finesse_pair = g == static_cast<int>(Quantity::kappa) &&
                                (info.quantity == Quantity::finesse ||
                                 lookup(it->second).quantity == Quantity::finesse);
      if (!finesse_pair)
        throw ConfigError("keys '" + it->second + "' and '" + key + "' give the same quantity");
    }
    seen_group[g] = key;
    given[info.quantity] = {key, x};
  }

  auto require = [&](Quantity q, const char* name) {
    const auto it = given.find(q);
    if (it == given.end()) throw ConfigError(std::string("missing physical parameter: ") + name);
    return it->second;
  };
  auto si = [&](const std::pair<std::string, double>& entry, double omega_m) {
    const auto& info = lookup(entry.first);
    return entry.second * (info.per_omega_m ? omega_m : info.factor);
  };

  PhysicalParams p;
  p.omega_m = si(require(Quantity::omega_m, "omega_m"), 0.0);
  p.mass = si(require(Quantity::mass, "mass"), p.omega_m);
  p.gamma_m = si(require(Quantity::gamma_m, "gamma_m"), p.omega_m);
  p.temperature = si(require(Quantity::temperature, "temperature"), p.omega_m);
  p.power = si(require(Quantity::power, "power"), p.omega_m);
  p.wavelength = si(require(Quantity::wavelength, "wavelength"), p.omega_m);
  p.length = si(require(Quantity::length, "length"), p.omega_m);
  if (given.count(Quantity::finesse))
    p.kappa = kappa_from_finesse(p.length, given[Quantity::finesse].second);
  else
    p.kappa = si(require(Quantity::kappa, "kappa or finesse"), p.omega_m);

  if (kappa_equals_gamma_a) {
    if (given.count(Quantity::gamma_a))
      throw ConfigError("gamma_a is fixed by the kappa_equals_gamma_a constraint");
    p.gamma_a = p.kappa;
  } else {
    p.gamma_a = si(require(Quantity::gamma_a, "gamma_a"), p.omega_m);
  }
  p.Delta_a = si(require(Quantity::Delta_a, "Delta_a"), p.omega_m);

  if (given.count(Quantity::Delta_c_eff))
    p.detuning = EffectiveDetuning{si(given[Quantity::Delta_c_eff], p.omega_m)};
  else
    p.detuning = RawDetuning{si(require(Quantity::Delta_c, "Delta_c or Delta_c_eff"), p.omega_m)};

  if (g_N_equals_chi_eff) {
    if (given.count(Quantity::g_N))
      throw ConfigError("g_N is fixed by the g_N_equals_chi_eff constraint");
    p.coupling = MatchOptomechanicalCoupling{};
  } else {
    p.coupling = RawCoupling{given.count(Quantity::g_N) ? si(given[Quantity::g_N], p.omega_m) : 0.0};
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void ScenarioConfig::set(std::string_view key, double value) {
  const int g = group_of(lookup(key).quantity);
  for (auto it = physical.begin(); it != physical.end();) {
    if (group_of(lookup(it.key()).quantity) == g)
      it = physical.erase(it);
    else
      ++it;
  }
  physical[std::string(key)] = value;
}

ScenarioConfig ScenarioConfig::with(std::string_view key, double value) const {
  ScenarioConfig copy = *this;
  copy.set(key, value);
  return copy;
}

ScenarioConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"name", "description", "physical", "constraints", "sweep", "observables", "mk",
              "wigner", "output"});
  ScenarioConfig c;
  if (!j.contains("physical")) throw ConfigError("config needs a \"physical\" block");
  c.physical = j.at("physical");
  if (!c.physical.is_object()) throw ConfigError("\"physical\" must be an object");
  for (const auto& [key, value] : c.physical.items()) {
    lookup(key);
    number(value, key);
  }

  if (j.contains("constraints")) {
    const auto& k = j.at("constraints");
    check_keys(k, "constraints", {"kappa_equals_gamma_a", "g_N_equals_chi_eff"});
    for (const auto& [key, value] : k.items())
      if (!value.is_boolean()) throw ConfigError("constraint '" + key + "' must be true or false");
    c.kappa_equals_gamma_a = k.value("kappa_equals_gamma_a", false);
    c.g_N_equals_chi_eff = k.value("g_N_equals_chi_eff", false);
  }

  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"parameter", "from", "to", "points", "scale"});
    SweepSpec spec;
    if (!s.contains("parameter") || !s.at("parameter").is_string())
      throw ConfigError("sweep needs a \"parameter\" name");
    spec.parameter = s.at("parameter").get<std::string>();
    if (!s.contains("from") || !s.contains("to")) throw ConfigError("sweep needs \"from\" and \"to\"");
    spec.from = number(s.at("from"), "sweep.from");
    spec.to = number(s.at("to"), "sweep.to");
    if (s.contains("points")) {
      if (!s.at("points").is_number_integer()) throw ConfigError("sweep.points must be an integer");
      spec.points = s.at("points").get<int>();
    }
    const std::string scale = s.value("scale", "linear");
    if (scale == "linear")
      spec.scale = SweepScale::linear;
    else if (scale == "log")
      spec.scale = SweepScale::log;
    else
      throw ConfigError("sweep.scale must be \"linear\" or \"log\"");
    spec.validate();
    c.sweep = spec;
  }

  if (j.contains("observables")) {
    if (!j.at("observables").is_array()) throw ConfigError("\"observables\" must be an array");
    for (const auto& o : j.at("observables")) {
      if (!o.is_string()) throw ConfigError("observable names must be strings");
      const auto obs = parse_observable(o.get<std::string>());
      if (std::find(c.observables.begin(), c.observables.end(), obs) != c.observables.end())
        throw ConfigError("observable '" + o.get<std::string>() + "' listed twice");
      c.observables.push_back(obs);
    }
  } else {
    c.observables = {Observable::E3, Observable::Mmax};
  }

  if (j.contains("mk")) {
    const auto& m = j.at("mk");
    check_keys(m, "mk", {"starts", "seed", "tolerance", "max_evaluations", "box_sigmas"});
    if (m.contains("starts")) {
      if (!m.at("starts").is_number_integer() || m.at("starts").get<int>() < 1)
        throw ConfigError("mk.starts must be a positive integer");
      c.mk.starts = m.at("starts").get<int>();
    }
    if (m.contains("seed")) {
      const auto& seed = m.at("seed");
      if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
        throw ConfigError("mk.seed must be a nonnegative integer");
      c.mk.seed = m.at("seed").get<std::uint64_t>();
    }
    if (m.contains("tolerance")) c.mk.tolerance = number(m.at("tolerance"), "mk.tolerance");
    if (m.contains("max_evaluations")) {
      if (!m.at("max_evaluations").is_number_integer() || m.at("max_evaluations").get<int>() < 13)
        throw ConfigError("mk.max_evaluations must be an integer ≥ 13");
      c.mk.max_evaluations = m.at("max_evaluations").get<int>();
    }
    if (m.contains("box_sigmas")) c.mk.box_sigmas = number(m.at("box_sigmas"), "mk.box_sigmas");
  }

  if (j.contains("wigner")) {
    const auto& w = j.at("wigner");
    check_keys(w, "wigner", {"detect", "grid"});
    if (w.contains("detect")) {
      if (!w.at("detect").is_string()) throw ConfigError("wigner.detect must be a string");
      try {
        c.detect = parse_detection(w.at("detect").get<std::string>());
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
    }
    if (w.contains("grid")) {
      const auto& g = w.at("grid");
      check_keys(g, "wigner.grid",
                 {"center_q", "center_p", "half_width", "half_width_q", "half_width_p", "points",
                  "points_q", "points_p"});
      PhaseSpaceGrid grid;
      grid.center_q = g.contains("center_q") ? number(g.at("center_q"), "center_q") : 0.0;
      grid.center_p = g.contains("center_p") ? number(g.at("center_p"), "center_p") : 0.0;
      if (g.contains("half_width"))
        grid.half_width_q = grid.half_width_p = number(g.at("half_width"), "half_width");
      if (g.contains("half_width_q")) grid.half_width_q = number(g.at("half_width_q"), "half_width_q");
      if (g.contains("half_width_p")) grid.half_width_p = number(g.at("half_width_p"), "half_width_p");
      auto int_of = [&](const char* key) {
        if (!g.at(key).is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
        return g.at(key).get<int>();
      };
      if (g.contains("points")) grid.points_q = grid.points_p = int_of("points");
      if (g.contains("points_q")) grid.points_q = int_of("points_q");
      if (g.contains("points_p")) grid.points_p = int_of("points_p");
      try {
        grid.validate();
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      c.grid = grid;
    }
  }

  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("\"output\" must be a string");
    c.output = j.at("output").get<std::string>();
  }
  c.params();  // surfaces missing or inconsistent physical keys now
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["physical"] = c.physical;
  j["constraints"] = {{"kappa_equals_gamma_a", c.kappa_equals_gamma_a},
                      {"g_N_equals_chi_eff", c.g_N_equals_chi_eff}};
  if (c.sweep)
    j["sweep"] = {{"parameter", c.sweep->parameter},
                  {"from", c.sweep->from},
                  {"to", c.sweep->to},
                  {"points", c.sweep->points},
                  {"scale", c.sweep->scale == SweepScale::log ? "log" : "linear"}};
  j["observables"] = json::array();
  for (auto o : c.observables) j["observables"].push_back(std::string(to_string(o)));
  j["mk"] = {{"starts", c.mk.starts},
             {"seed", c.mk.seed},
             {"tolerance", c.mk.tolerance},
             {"max_evaluations", c.mk.max_evaluations},
             {"box_sigmas", c.mk.box_sigmas}};
  j["wigner"] = {{"detect", std::string(to_string(c.detect))}};
  if (c.grid)
    j["wigner"]["grid"] = {{"center_q", c.grid->center_q},     {"center_p", c.grid->center_p},
                           {"half_width_q", c.grid->half_width_q}, {"half_width_p", c.grid->half_width_p},
                           {"points_q", c.grid->points_q},     {"points_p", c.grid->points_p}};
  j["output"] = c.output;
  return j;
}

}  // namespace optomech
