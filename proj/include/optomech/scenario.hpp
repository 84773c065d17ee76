#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/model.hpp"
#include "optomech/nonclassicality.hpp"
#include "optomech/nonlocality.hpp"

namespace optomech {

struct PointStatus {
  bool stable = false;
  bool physical = false;
  bool multistable = false;
  bool mk_converged = true;
  std::string error;  // empty when the point was computed
};

/// Everything computed at one parameter point.
struct PointResult {
  double swept = 0.0;
  PointStatus status;
  std::optional<OperatingPoint> op;
  std::optional<GaussianStated> state;
  std::map<Observable, double> values;  // NaN when unavailable
  std::optional<MKResult> mk;
  double click_probability = 0.0;
};

struct SweepRecord {
  std::string parameter;  // empty for a single point
  std::vector<Observable> observables;
  std::vector<PointResult> rows;  // ordered by swept value
};

/// Solves, builds the Markovian model, computes σ by Lyapunov, checks
/// stability and physicality, then evaluates the requested observables.
/// Failures are recorded in the status, never thrown.
PointResult evaluate_point(const ScenarioConfig& config, unsigned mk_threads = 0);

/// One row per sweep value (or a single row without a sweep). Points run in
/// parallel and are merged by index.
SweepRecord run_sweep(const ScenarioConfig& config, unsigned threads = 0);

/// Header: <parameter>, observables..., stable, physical, multistable, mk_converged.
std::string sweep_csv(const SweepRecord& record);
nlohmann::json sweep_to_json(const SweepRecord& record, const ScenarioConfig& config);

/// 0 when every point was computed; 1 when any point failed, or (strict) any
/// point was unphysical.
int sweep_exit_code(const SweepRecord& record, bool strict);

/// Conditioned mirror field for config.detect, on config.grid or the auto grid.
struct WignerRun {
  OperatingPoint op;
  WignerMixture mixture;
  WignerField field;
};
WignerRun run_wigner(const ScenarioConfig& config);

}  // namespace optomech
