// optomech: steady state, sweeps, MK nonlocality and conditioned Wigner fields
// of the linearized atom-cavity-mirror system.
//
//   optomech steady    --config c.json [--out PREFIX]
//   optomech sweep     --config c.json [--out PREFIX] [--seed N] [--starts N] [--strict]
//   optomech mk        --config c.json [--seed N] [--starts N]
//   optomech wigner    --config c.json [--detect atoms]
//   optomech reproduce fig1a|fig1b|fig1c|fig1d|fig2|fig3 [--out PREFIX] [--set KEY=VALUE]
//
// Exit codes: 0 success, 1 computational failure, 2 usage or config error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/error.hpp"
#include "optomech/figures.hpp"
#include "optomech/output.hpp"
#include "optomech/scenario.hpp"

using namespace optomech;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<std::string> detect;
  std::vector<std::string> sets;
  bool strict = false;
  unsigned threads = 0;
  std::string figure;
};

std::vector<std::pair<std::string, double>> parse_sets(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(s.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw ConfigError("--set value is not a number: '" + s + "'");
    }
    if (used != s.size() - eq - 1) throw ConfigError("--set value is not a number: '" + s + "'");
    out.emplace_back(s.substr(0, eq), value);
  }
  return out;
}

ScenarioConfig load(const Options& o) {
  auto c = load_config(o.config);
  for (const auto& [key, value] : parse_sets(o.sets)) c.set(key, value);
  if (o.seed) c.mk.seed = *o.seed;
  if (o.starts) {
    if (*o.starts < 1) throw ConfigError("--starts must be positive");
    c.mk.starts = *o.starts;
  }
  if (o.detect) {
    try {
      c.detect = parse_detection(*o.detect);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (!o.out.empty()) c.output = o.out;
  c.params();
  return c;
}

int write_record(const ScenarioConfig& c, const SweepRecord& record, bool strict,
                 const std::string& verb) {
  write_text(c.output + ".csv", sweep_csv(record));
  write_json(c.output + ".json", sweep_to_json(record, c));
  write_metadata(c.output, verb);
  for (const auto& row : record.rows)
    if (!row.status.error.empty()) std::cerr << "error: " << row.status.error << "\n";
  return sweep_exit_code(record, strict);
}

int run_steady(const Options& o) {
  auto c = load(o);
  c.sweep.reset();
  if (c.observables.empty()) c.observables = all_observables();
  const auto record = run_sweep(c, o.threads);
  const auto& row = record.rows.front();
  if (row.op)
    std::cout << "chi_eff/omega_m = " << format_double(row.op->chi_eff / row.op->params.omega_m)
              << "  stable = " << row.status.stable << "  physical = " << row.status.physical
              << "\n";
  return write_record(c, record, o.strict, "steady");
}

int run_sweep_verb(const Options& o) {
  const auto c = load(o);
  if (!c.sweep) throw ConfigError("config has no \"sweep\" block");
  return write_record(c, run_sweep(c, o.threads), o.strict, "sweep");
}

int run_mk(const Options& o) {
  auto c = load(o);
  c.sweep.reset();
  c.observables = {Observable::Mmax};
  const auto record = run_sweep(c, o.threads);
  const auto& row = record.rows.front();
  if (row.mk) std::cout << "Mmax = " << format_double(row.mk->value) << "\n";
  return write_record(c, record, o.strict, "mk");
}

int run_wigner_verb(const Options& o) {
  const auto c = load(o);
  const auto run = run_wigner(c);
  auto j = field_to_json(run.field);
  j["config"] = to_json(c);
  j["detect"] = std::string(to_string(c.detect));
  j["click_probability"] = run.mixture.normalization;
  j["operating_point"] = operating_point_to_json(run.op);
  write_text(c.output + ".csv", field_csv(run.field));
  write_json(c.output + ".json", j);
  write_metadata(c.output, "wigner");
  std::cout << "Nw = " << format_double(run.field.negativity_volume())
            << "  integral = " << format_double(run.field.integral()) << "\n";
  return 0;
}

int run_reproduce(const Options& o) {
  ReproduceOptions r;
  r.prefix = o.out;
  r.seed = o.seed;
  r.starts = o.starts;
  if (o.starts && *o.starts < 1) throw ConfigError("--starts must be positive");
  if (o.detect) {
    try {
      r.detect = parse_detection(*o.detect);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  r.overrides = parse_sets(o.sets);
  r.strict = o.strict;
  r.threads = o.threads;
  return reproduce(parse_figure(o.figure), r);
}

void add_common(CLI::App* cmd, Options& o, bool needs_config) {
  if (needs_config) cmd->add_option("--config", o.config, "scenario JSON")->required();
  cmd->add_option("--out", o.out, "output prefix");
  cmd->add_option("--seed", o.seed, "MK multistart seed");
  cmd->add_option("--starts", o.starts, "MK multistart count");
  cmd->add_option("--detect", o.detect, "none|cavity|atoms|both");
  cmd->add_option("--set", o.sets, "override a physical key, KEY=VALUE");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_flag("--strict", o.strict, "treat unphysical points as failures");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized atom-cavity-mirror simulator"};
  app.require_subcommand(1);
  Options o;
  auto* steady = app.add_subcommand("steady", "operating point, covariance and entanglement");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep from a config");
  auto* mk = app.add_subcommand("mk", "maximal MK function at one point");
  auto* wigner = app.add_subcommand("wigner", "conditioned mirror Wigner field");
  auto* repro = app.add_subcommand("reproduce", "built-in figure scenarios");
  for (auto* cmd : {steady, sweep, mk, wigner}) add_common(cmd, o, true);
  add_common(repro, o, false);
  repro->add_option("figure", o.figure, "fig1a|fig1b|fig1c|fig1d|fig2|fig3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*steady) return run_steady(o);
    if (*sweep) return run_sweep_verb(o);
    if (*mk) return run_mk(o);
    if (*wigner) return run_wigner_verb(o);
    return run_reproduce(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
