#include "optomech/scenario.hpp"

#include <cmath>
#include <limits>

#include "optomech/dynamics.hpp"
#include "optomech/error.hpp"
#include "optomech/output.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

using nlohmann::json;

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double entanglement(const GaussianStated& s, Observable o) {
  switch (o) {
    case Observable::E3: return tripartite_negativity(s);
    case Observable::E12: return pairwise_log_negativity(s, 0, 1);
    case Observable::E23: return pairwise_log_negativity(s, 1, 2);
    case Observable::E13: return pairwise_log_negativity(s, 0, 2);
    case Observable::E1_23: return one_vs_two_log_negativity(s, 0);
    case Observable::E2_13: return one_vs_two_log_negativity(s, 1);
    case Observable::E3_12: return one_vs_two_log_negativity(s, 2);
    default: return nan;
  }
}

GaussianStated steady_state(const OperatingPoint& op) {
  return steady_cm_lyapunov(build_model(op));
}

}  // namespace

PointResult evaluate_point(const ScenarioConfig& config, unsigned mk_threads) {
  PointResult r;
  for (auto o : config.observables) r.values[o] = nan;
  try {
    const auto op = solve_operating_point(config.params());
    r.op = op;
    r.status.multistable = op.multistable;
    r.status.stable = stability(build_model(op)).stable;
    if (r.values.count(Observable::chi_eff)) r.values[Observable::chi_eff] = op.chi_eff;

    const auto state = steady_state(op);
    r.state = state;
    r.status.physical = physicality(state).physical;
    if (!r.status.physical) return r;

    for (auto o : config.observables) {
      if (o == Observable::chi_eff) continue;
      if (o == Observable::Mmax) {
        MKConfig mk = config.mk;
        mk.threads = mk_threads;
        r.mk = mk_maximize(state, mk);
        r.values[o] = r.mk->value;
        r.status.mk_converged = r.mk->converged;
      } else if (o == Observable::Nw) {
        const auto mix = conditioned_mirror_state(state, config.detect);
        r.click_probability = mix.normalization;
        const auto grid = config.grid ? *config.grid : PhaseSpaceGrid::auto_grid(mix);
        r.values[o] = negativity_volume(mix, grid);
      } else {
        r.values[o] = entanglement(state, o);
      }
    }
  } catch (const StabilityError& e) {
    r.status.stable = false;
    r.status.error = e.what();
  } catch (const Error& e) {
    r.status.error = e.what();
  }
  return r;
}

SweepRecord run_sweep(const ScenarioConfig& config, unsigned threads) {
  SweepRecord record;
  record.observables = config.observables;
  std::vector<double> values{nan};
  if (config.sweep) {
    record.parameter = config.sweep->parameter;
    values = config.sweep->values();
  }
  record.rows.resize(values.size());
  // Points run in parallel with serial MK inside; a single point gets the threads.
  const unsigned mk_threads = values.size() > 1 ? 1u : threads;
  parallel_for(values.size(), values.size() > 1 ? threads : 1u, [&](std::size_t i) {
    auto point = config.sweep ? config.with(config.sweep->parameter, values[i]) : config;
    record.rows[i] = evaluate_point(point, mk_threads);
    record.rows[i].swept = values[i];
  });
  return record;
}

std::string sweep_csv(const SweepRecord& record) {
  std::string out;
  if (!record.parameter.empty()) out += record.parameter + ",";
  for (auto o : record.observables) out += std::string(to_string(o)) + ",";
  out += "stable,physical,multistable,mk_converged\n";
  for (const auto& row : record.rows) {
    if (!record.parameter.empty()) out += format_double(row.swept) + ",";
    for (auto o : record.observables) out += format_double(row.values.at(o)) + ",";
    const auto& s = row.status;
    out += std::string(s.stable ? "1" : "0") + "," + (s.physical ? "1" : "0") + "," +
           (s.multistable ? "1" : "0") + "," + (s.mk_converged ? "1" : "0") + "\n";
  }
  return out;
}

json sweep_to_json(const SweepRecord& record, const ScenarioConfig& config) {
  json rows = json::array();
  for (const auto& row : record.rows) {
    json j;
    if (!record.parameter.empty()) j["swept"] = row.swept;
    for (auto o : record.observables) j["observables"][std::string(to_string(o))] = row.values.at(o);
    j["status"] = {{"stable", row.status.stable},
                   {"physical", row.status.physical},
                   {"multistable", row.status.multistable},
                   {"mk_converged", row.status.mk_converged},
                   {"computed", row.status.error.empty()},
                   {"error", row.status.error}};
    if (row.op) j["operating_point"] = operating_point_to_json(*row.op);
    if (row.state) j["state"] = state_to_json(*row.state);
    if (row.mk) {
      json settings = json::array();
      for (double x : row.mk->settings.to_vector()) settings.push_back(x);
      j["mk"] = {{"value", row.mk->value},
                 {"settings", settings},
                 {"starts", row.mk->starts_used},
                 {"converged", row.mk->converged}};
    }
    if (row.click_probability > 0) j["click_probability"] = row.click_probability;
    rows.push_back(std::move(j));
  }
  return {{"config", to_json(config)},
          {"parameter", record.parameter},
          {"rows", std::move(rows)},
          {"status", {{"all_computed", sweep_exit_code(record, false) == 0},
                      {"all_physical", sweep_exit_code(record, true) == 0}}}};
}

int sweep_exit_code(const SweepRecord& record, bool strict) {
  for (const auto& row : record.rows) {
    if (!row.status.error.empty()) return 1;
    if (strict && !row.status.physical) return 1;
  }
  return 0;
}

WignerRun run_wigner(const ScenarioConfig& config) {
  const auto op = solve_operating_point(config.params());
  const auto state = steady_state(op);
  auto mix = conditioned_mirror_state(state, config.detect);
  const auto grid = config.grid ? *config.grid : PhaseSpaceGrid::auto_grid(mix);
  auto field = evaluate_field(mix, grid);
  return {op, std::move(mix), std::move(field)};
}

}  // namespace optomech
