#include "optomech/figures.hpp"

#include <iostream>
#include <string>

#include "optomech/error.hpp"
#include "optomech/output.hpp"
#include "optomech/scenario.hpp"

namespace optomech {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Figure, std::string_view>, 6> figure_names{{
    {Figure::fig1a, "fig1a"},
    {Figure::fig1b, "fig1b"},
    {Figure::fig1c, "fig1c"},
    {Figure::fig1d, "fig1d"},
    {Figure::fig2, "fig2"},
    {Figure::fig3, "fig3"},
}};

ScenarioConfig kappa_sweep(double length_mm, double from, double to, int points, SweepScale scale,
                           std::vector<Observable> observables) {
  auto c = base_scenario();
  c.set("length_mm", length_mm);
  c.set("kappa_over_2pi_hz", from);
  c.sweep = SweepSpec{"kappa_over_2pi_hz", from, to, points, scale};
  c.observables = std::move(observables);
  return c;
}

}  // namespace

std::string_view to_string(Figure f) {
  for (const auto& [fig, name] : figure_names)
    if (fig == f) return name;
  return "?";
}

Figure parse_figure(std::string_view name) {
  for (const auto& [fig, n] : figure_names)
    if (n == name) return fig;
  throw ConfigError("unknown figure '" + std::string(name) +
                    "' (fig1a|fig1b|fig1c|fig1d|fig2|fig3)");
}

ScenarioConfig base_scenario() {
  ScenarioConfig c;
  c.physical = {{"mass_ng", 10.0},
                {"omega_m_over_2pi_hz", 1e7},
                {"gamma_m_over_2pi_hz", 100.0},
                {"temperature_k", 1e-4},
                {"power_mw", 35.0},
                {"wavelength_nm", 1064.0},
                {"length_mm", 1.0},
                {"kappa_over_2pi_hz", 1e6},
                {"Delta_c_eff_over_omega_m", 1.0},
                {"Delta_a_over_omega_m", -1.0}};
  c.kappa_equals_gamma_a = true;
  c.g_N_equals_chi_eff = true;
  c.observables = {Observable::E3, Observable::Mmax};
  return c;
}

std::vector<FigureScenario> figure_scenarios(Figure f) {
  using O = Observable;
  switch (f) {
    case Figure::fig1a:
      return {{"", kappa_sweep(1.0, 2e5, 5e6, 21, SweepScale::log, {O::E3, O::Mmax})}};
    case Figure::fig1b:
      return {{"", kappa_sweep(5.0, 1e4, 2e6, 24, SweepScale::log, {O::E3, O::Mmax})}};
    case Figure::fig1c: {
      std::vector<FigureScenario> out;
      for (auto [suffix, kappa] : {std::pair{"_kappa_1e6", 1e6}, std::pair{"_kappa_5e5", 5e5}}) {
        auto c = base_scenario();
        c.set("length_mm", 5.0);
        c.set("kappa_over_2pi_hz", kappa);
        c.sweep = SweepSpec{"Delta_a_over_omega_m", -2.0, 2.0, 41, SweepScale::linear};
        out.push_back({suffix, c});
      }
      return out;
    }
    case Figure::fig1d:
      return {{"", kappa_sweep(5.0, 1e5, 1e6, 11, SweepScale::log,
                               {O::E12, O::E23, O::E13, O::E1_23, O::E2_13, O::E3_12})}};
    case Figure::fig2: {
      std::vector<FigureScenario> out;
      for (auto d : {Detection::cavity, Detection::atoms, Detection::both}) {
        auto c = base_scenario();
        c.set("kappa_over_2pi_hz", 2.5e6);
        c.observables = {O::Nw};
        c.detect = d;
        out.push_back({"_" + std::string(to_string(d)), c, true});
      }
      return out;
    }
    case Figure::fig3: {
      auto c = kappa_sweep(1.0, 1.5e6, 4e6, 11, SweepScale::linear, {O::chi_eff, O::Nw});
      c.detect = Detection::atoms;
      return {{"", c}};
    }
  }
  throw ConfigError("unknown figure");
}

int reproduce(Figure f, const ReproduceOptions& options) {
  const std::string prefix =
      options.prefix.empty() ? "out/" + std::string(to_string(f)) : options.prefix;
  int exit_code = 0;
  for (auto& [suffix, config, field] : figure_scenarios(f)) {
    for (const auto& [key, value] : options.overrides) config.set(key, value);
    if (options.seed) config.mk.seed = *options.seed;
    if (options.starts) config.mk.starts = *options.starts;
    if (options.detect && !field) config.detect = *options.detect;
    config.params();
    config.output = prefix + suffix;

    if (field) {
      try {
        const auto run = run_wigner(config);
        json j = field_to_json(run.field);
        j["config"] = to_json(config);
        j["detect"] = std::string(to_string(config.detect));
        j["click_probability"] = run.mixture.normalization;
        j["operating_point"] = operating_point_to_json(run.op);
        write_text(config.output + ".csv", field_csv(run.field));
        write_json(config.output + ".json", j);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        std::cerr << config.output << ": " << e.what() << "\n";
        exit_code = 1;
        continue;
      }
    } else {
      const auto record = run_sweep(config, options.threads);
      write_text(config.output + ".csv", sweep_csv(record));
      write_json(config.output + ".json", sweep_to_json(record, config));
      for (const auto& row : record.rows)
        if (!row.status.error.empty())
          std::cerr << config.output << ": point " << format_double(row.swept) << ": "
                    << row.status.error << "\n";
      exit_code = std::max(exit_code, sweep_exit_code(record, options.strict));
    }
    write_metadata(config.output, "reproduce " + std::string(to_string(f)));
    std::cout << config.output << ".csv\n";
  }
  return exit_code;
}

}  // namespace optomech
