#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/nonclassicality.hpp"
#include "optomech/nonlocality.hpp"

namespace optomech {

/// Output columns. Indices 1, 2, 3 are mirror, cavity and atoms.
enum class Observable { E3, Mmax, E12, E23, E13, E1_23, E2_13, E3_12, chi_eff, Nw };

std::string_view to_string(Observable o);
Observable parse_observable(std::string_view name);
const std::vector<Observable>& all_observables();

enum class SweepScale { linear, log };

struct SweepSpec {
  std::string parameter;  // any physical key, e.g. "kappa_over_2pi_hz"
  double from = 0.0;
  double to = 0.0;
  int points = 2;
  SweepScale scale = SweepScale::linear;

  void validate() const;
  std::vector<double> values() const;
};

/// A scenario as read from JSON. Physical parameters are kept as the raw
/// key/value object so sweeps and overrides go through the same parser.
///
///   {
///     "physical": {"mass_ng": 10, "omega_m_over_2pi_hz": 1e7, "finesse": 3e4, ...},
///     "constraints": {"kappa_equals_gamma_a": true, "g_N_equals_chi_eff": true},
///     "sweep": {"parameter": "kappa_over_2pi_hz", "from": 2e5, "to": 5e6,
///               "points": 21, "scale": "log"},
///     "observables": ["E3", "Mmax"],
///     "mk": {"starts": 64, "seed": 0},
///     "wigner": {"detect": "atoms", "grid": {"half_width": 3, "points": 201}},
///     "output": "out/run"
///   }
struct ScenarioConfig {
  nlohmann::json physical = nlohmann::json::object();
  bool kappa_equals_gamma_a = false;
  bool g_N_equals_chi_eff = false;
  std::optional<SweepSpec> sweep;
  std::vector<Observable> observables;
  MKConfig mk;
  Detection detect = Detection::atoms;
  std::optional<PhaseSpaceGrid> grid;
  std::string output = "out";

  /// Resolves the physical block; throws ConfigError on missing or unknown keys.
  PhysicalParams params() const;
  /// Sets one physical key, dropping any key that specifies the same quantity
  /// (so "kappa_over_2pi_hz" replaces "finesse").
  void set(std::string_view key, double value);
  ScenarioConfig with(std::string_view key, double value) const;
};

/// Physical keys accepted in the "physical" block and as sweep parameters.
const std::vector<std::string>& physical_keys();

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ScenarioConfig& config);

}  // namespace optomech
