#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optomech/config.hpp"

namespace optomech {

enum class Figure { fig1a, fig1b, fig1c, fig1d, fig2, fig3 };

std::string_view to_string(Figure f);
Figure parse_figure(std::string_view name);

/// Base parameters shared by every figure: m = 10 ng, ω_m/2π = 10 MHz,
/// γ_m/2π = 100 Hz, T = 0.1 mK, P = 35 mW, λ = 1064 nm, L = 1 mm,
/// Δ̃_c = ω_m, Δ_a = −ω_m, κ = γ_a and g_N = χ_eff.
ScenarioConfig base_scenario();

/// Named scenarios making up a figure; `suffix` is appended to the output
/// prefix ("" for single-output figures).
struct FigureScenario {
  std::string suffix;
  ScenarioConfig config;
  bool field = false;  // Wigner field rather than a sweep
};
std::vector<FigureScenario> figure_scenarios(Figure f);

struct ReproduceOptions {
  std::string prefix;  // default "out/<figure>"
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<Detection> detect;
  std::vector<std::pair<std::string, double>> overrides;
  bool strict = false;
  unsigned threads = 0;
};

/// Runs every scenario of the figure and writes <prefix><suffix>.csv/.json
/// plus the metadata sidecar. Returns the process exit code.
int reproduce(Figure f, const ReproduceOptions& options);

}  // namespace optomech
