// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// numbers. Exit status is nonzero if any criterion fails.
//
//   acceptance [path/to/optomech]
//
// The optional CLI path enables the end-to-end determinism check; without it
// the same check runs in-process.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/error.hpp"
#include "optomech/figures.hpp"
#include "optomech/fock_oracle.hpp"
#include "optomech/nonclassicality.hpp"
#include "optomech/nonlocality.hpp"
#include "optomech/output.hpp"
#include "optomech/scenario.hpp"
#include "support.hpp"

using namespace optomech;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> column(const SweepRecord& r, Observable o) {
  std::vector<double> v;
  for (const auto& row : r.rows) v.push_back(row.values.at(o));
  return v;
}

std::vector<double> swept(const SweepRecord& r) {
  std::vector<double> v;
  for (const auto& row : r.rows) v.push_back(row.swept);
  return v;
}

SweepRecord run_figure(Figure f, std::size_t index = 0,
                       const std::vector<std::pair<std::string, double>>& overrides = {}) {
  auto c = figure_scenarios(f).at(index).config;
  for (const auto& [k, v] : overrides) c.set(k, v);
  auto rec = run_sweep(c);
  for (const auto& row : rec.rows)
    if (!row.status.error.empty()) throw Error("sweep point failed: " + row.status.error);
  return rec;
}

GaussianStated steady(const ScenarioConfig& c) {
  return steady_cm_lyapunov(build_model(solve_operating_point(c.params())));
}

double atoms_negativity(ScenarioConfig c) {
  c.observables = {Observable::Nw};
  const auto p = evaluate_point(c);
  if (!p.status.error.empty()) throw Error(p.status.error);
  return p.values.at(Observable::Nw);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Criteria ----------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  double worst = 0;
  int models = 0;
  for (; models < 50; ++models) {
    const auto m = test::random_stable_model(rng);
    const auto a = steady_cm_lyapunov(m).sigma;
    const auto b = steady_cm_spectral(m).sigma;
    worst = std::max(worst, (a - b).norm() / a.norm());
  }
  const double secs = elapsed_since(t0);
  return {worst <= 1e-6 && secs < 30,
          std::to_string(models) + " random models, max rel. Frobenius error " + fmt(worst) +
              " (≤ 1e-6), " + fmt(secs) + " s (< 30 s)"};
}

Outcome physics_fixtures() {
  const auto t0 = std::chrono::steady_clock::now();
  // Decoupled mirror at the reference operating parameters.
  OperatingPoint op;
  op.params = test::reference_params(1.0, 1e6);
  op.nbar = thermal_occupation(op.params.temperature, op.params.omega_m);
  const auto s = steady_cm_lyapunov(build_model(op));
  const Eigen::MatrixXd mirror = s.sigma.topLeftCorner(2, 2);
  const double thermal_err =
      (mirror - (op.nbar + 0.5) * Eigen::MatrixXd::Identity(2, 2)).norm() / (op.nbar + 0.5);

  double tmsv_err = 0;
  for (double r : {0.05, 0.3, 0.8, 1.5})
    tmsv_err = std::max(tmsv_err, std::abs(pairwise_log_negativity(two_mode_squeezed_vacuum(r), 0, 1) - 2 * r));

  // Fock |1⟩ as a second difference of Gaussians, h = 1e-3.
  const double h = 1e-3;
  WignerMixture one;
  auto iso = [](double v) { return GaussianStated{v * Eigen::MatrixXd::Identity(2, 2), {Mode::mirror}}; };
  one.components = {{1 - 3 / (2 * h), iso(0.5)}, {2 / h, iso(0.5 + h)}, {-1 / (2 * h), iso(0.5 + 2 * h)}};
  const double nw = negativity_volume(one, PhaseSpaceGrid::auto_grid(one, 401));
  const double fock_err = std::abs(nw - (2 * std::exp(-0.5) - 1));
  const double secs = elapsed_since(t0);

  return {thermal_err <= 1e-9 && tmsv_err <= 1e-9 && fock_err <= 1e-4 && secs < 10,
          "thermal CM rel. err " + fmt(thermal_err) + ", TMSV |E-2r| " + fmt(tmsv_err) +
              ", Fock-|1> N_w err " + fmt(fock_err) + " (401x401 Simpson)"};
}

Outcome fig1a_trends() {
  const auto rec = run_figure(Figure::fig1a);
  const auto e3 = column(rec, Observable::E3), m = column(rec, Observable::Mmax);
  std::size_t peak = 0;
  for (std::size_t i = 1; i < e3.size(); ++i)
    if (e3[i] > e3[peak]) peak = i;
  bool rising = true, falling = true;
  for (std::size_t i = 0; i + 1 <= peak; ++i) rising &= e3[i + 1] >= e3[i] * (1 - 0.01);
  for (std::size_t i = 0; i + 1 < m.size(); ++i) falling &= m[i + 1] <= m[i] * (1 + 0.01);
  const double mmax = *std::max_element(m.begin(), m.end());
  const auto x = swept(rec);
  return {rising && falling && mmax < 2,
          "E3 nondecreasing to its peak " + fmt(e3[peak]) + " at kappa/2pi=" + fmt(x[peak]) +
              " Hz: " + (rising ? "yes" : "no") + " (falls to " + fmt(e3.back()) + " at " +
              fmt(x.back()) + " Hz); Mmax nonincreasing: " + (falling ? "yes" : "no") +
              "; max Mmax " + fmt(mmax) + " (< 2)"};
}

// Most negative MK value over the sweep; |M| > 2 counts either sign.
double mk_floor(const SweepRecord& rec, const MKConfig& mk) {
  double lo = INFINITY;
  for (const auto& row : rec.rows)
    if (row.state && row.status.physical) lo = std::min(lo, mk_minimize(*row.state, mk).value);
  return lo;
}

Outcome fig1b_regime() {
  const auto mk = figure_scenarios(Figure::fig1b).front().config.mk;
  const auto rec = run_figure(Figure::fig1b);
  const auto e3 = column(rec, Observable::E3), m = column(rec, Observable::Mmax);
  const double mmax = *std::max_element(m.begin(), m.end()), mmin = mk_floor(rec, mk);
  const double e3max = *std::max_element(e3.begin(), e3.end());
  const auto hot = run_figure(Figure::fig1b, 0, {{"temperature_k", 1e-3}});
  const auto mh = column(hot, Observable::Mmax);
  const double hot_max = *std::max_element(mh.begin(), mh.end()), hot_min = mk_floor(hot, mk);
  const bool violation = mmax > 2 || mmin < -2, e3_ok = std::abs(e3max - 0.05) <= 0.025;
  const bool hot_ok = hot_max < 2 && hot_min > -2;
  return {violation && e3_ok && hot_ok,
          std::string("violation interval exists: ") + (violation ? "yes" : "no") + " (max M " +
              fmt(mmax) + ", min M " + fmt(mmin) + "); max E3 " + fmt(e3max) +
              " in 0.05±0.025: " + (e3_ok ? "yes" : "no") + "; T=1 mK M in [" + fmt(hot_min) + ", " +
              fmt(hot_max) + "] (|M| < 2): " + (hot_ok ? "yes" : "no")};
}

Outcome fig1c_shape() {
  const auto scenarios = figure_scenarios(Figure::fig1c);
  std::size_t idx = 0;
  while (scenarios.at(idx).suffix != "_kappa_5e5") ++idx;
  const auto rec = run_figure(Figure::fig1c, idx);
  const auto x = swept(rec);
  const auto e3 = column(rec, Observable::E3), m = column(rec, Observable::Mmax);
  const double step = x[1] - x[0];
  const auto arg = std::max_element(e3.begin(), e3.end()) - e3.begin();
  const bool e3_ok = std::abs(x[arg] + 1) <= step + 1e-12;
  auto local_min_near = [&](double target, double& where) {
    for (std::size_t i = 1; i + 1 < m.size(); ++i)
      if (m[i] < m[i - 1] && m[i] < m[i + 1] && std::abs(x[i] - target) <= step + 1e-12) {
        where = x[i];
        return true;
      }
    return false;
  };
  double at_minus = NAN, at_plus = NAN;
  const bool lo = local_min_near(-1, at_minus), hi = local_min_near(1, at_plus);
  return {e3_ok && lo && hi,
          "argmax E3 at Delta_a/omega_m=" + fmt(x[arg]) + "; Mmax local minima near -1: " +
              (lo ? fmt(at_minus) : "none") + ", near +1: " + (hi ? fmt(at_plus) : "none") +
              " (grid step " + fmt(step) + ")"};
}

Outcome fig1d_minimal() {
  const auto rec = run_figure(Figure::fig1d);
  const auto e23 = column(rec, Observable::E23);
  bool minimal = true, decreasing = true;
  for (auto o : {Observable::E12, Observable::E13, Observable::E1_23, Observable::E2_13, Observable::E3_12}) {
    const auto other = column(rec, o);
    for (std::size_t i = 0; i < e23.size(); ++i) minimal &= e23[i] < other[i];
  }
  for (std::size_t i = 0; i + 1 < e23.size(); ++i) decreasing &= e23[i + 1] < e23[i];
  const auto x = swept(rec);
  return {minimal && decreasing,
          "kappa/2pi in [" + fmt(x.front()) + ", " + fmt(x.back()) + "] Hz: E23 pointwise minimal: " +
              (minimal ? "yes" : "no") + ", strictly decreasing: " + (decreasing ? "yes" : "no") +
              " (" + fmt(e23.front()) + " -> " + fmt(e23.back()) + ")"};
}

Outcome entanglement_robustness() {
  auto c = base_scenario();
  c.physical.erase("kappa_over_2pi_hz");
  c.set("finesse", 3e4);
  c.set("temperature_k", 15.0);
  const auto s = steady(c);
  const double e3 = tripartite_negativity(s);
  std::string parts;
  for (Index i = 0; i < 3; ++i) parts += " " + fmt(one_vs_two_log_negativity(s, i));
  return {e3 > 0, "E3 at T=15 K, F=3e4, L=1 mm: " + fmt(e3) + " (one-vs-two:" + parts + ")"};
}

Outcome fig2_conditioning() {
  auto c = base_scenario();
  c.set("kappa_over_2pi_hz", 2.5e6);
  double nw[3];
  const Detection d[3] = {Detection::atoms, Detection::cavity, Detection::both};
  for (int k = 0; k < 3; ++k) {
    c.detect = d[k];
    nw[k] = atoms_negativity(c);
  }
  c.detect = Detection::atoms;
  const double base_t = c.params().temperature, base_g = c.params().gamma_m;
  const double hot = atoms_negativity(c.with("temperature_k", base_t * 1e3));
  const double damped = atoms_negativity(c.with("gamma_m_si", base_g * 1e3));
  std::string flag;
  for (int k = 1; k < 3; ++k)
    if (nw[k] >= 1e-6 && nw[k] < 1e-4) flag += " [flag: " + std::string(to_string(d[k])) + " in (1e-6, 1e-4)]";
  return {nw[0] > 0 && nw[1] < 1e-6 && nw[2] < 1e-6 && hot > 0 && damped > 0,
          "N_w atoms " + fmt(nw[0]) + ", cavity " + fmt(nw[1]) + ", both " + fmt(nw[2]) +
              "; atoms at T x1e3 " + fmt(hot) + ", gamma_m x1e3 " + fmt(damped) + flag};
}

Outcome fig3_trend() {
  const auto rec = run_figure(Figure::fig3);
  auto chi = column(rec, Observable::chi_eff);
  auto nw = column(rec, Observable::Nw);
  std::vector<std::size_t> order(chi.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return chi[a] < chi[b]; });
  bool increasing = true;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) increasing &= nw[order[i + 1]] > nw[order[i]];
  const double wm = figure_scenarios(Figure::fig3).front().config.params().omega_m;
  return {increasing,
          "chi_eff/omega_m " + fmt(chi[order.front()] / wm) + " -> " + fmt(chi[order.back()] / wm) +
              ", N_w " + fmt(nw[order.front()]) + " -> " + fmt(nw[order.back()]) +
              ", strictly increasing: " + (increasing ? "yes" : "no")};
}

Outcome conditioning_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  TwoModeSqueezedThermal at{};
  int states = 0;
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double na : {0.0, 1.0, 2.0})
      for (double nb : {0.0, 1.0, 2.0}) {
        if (r == 0 && nb == 0) continue;  // mode b never clicks
        const TwoModeSqueezedThermal t{r, na, nb};
        const auto fock = fock_oracle(t, 40);
        const auto pair = t.covariance();
        Eigen::MatrixXd s = 0.5 * Eigen::MatrixXd::Identity(6, 6);
        const int idx[4] = {0, 1, 4, 5};
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) s(idx[i], idx[j]) = pair.sigma(i, j);
        const auto mix = conditioned_mirror_state({s, {Mode::mirror, Mode::cavity, Mode::atoms}}, Detection::atoms);
        const double half = 5 * mix.max_marginal_sd();
        for (int i = 0; i <= 60; ++i)
          for (int j = 0; j <= 60; ++j) {
            const double q = -half + 2 * half * i / 60, p = -half + 2 * half * j / 60;
            const double err = std::abs(fock(q, p) - mix(q, p));
            if (err > worst) {
              worst = err;
              at = t;
            }
          }
        ++states;
      }
  const double secs = elapsed_since(t0);
  return {worst <= 1e-4 && secs < 60,
          std::to_string(states) + " states, sup-norm " + fmt(worst) + " (≤ 1e-4) worst at r=" +
              fmt(at.r) + ", nbar_a=" + fmt(at.nbar_a) + ", nbar_b=" + fmt(at.nbar_b) +
              ", cutoff 40; " + fmt(secs) + " s"};
}

Outcome determinism(const std::string& cli) {
  const auto dir = std::filesystem::temp_directory_path() / "optomech_acceptance";
  std::filesystem::remove_all(dir);
  const std::string a = (dir / "a" / "fig1b").string(), b = (dir / "b" / "fig1b").string();
  if (!cli.empty()) {
    for (const auto& prefix : {a, b}) {
      const std::string cmd = "\"" + cli + "\" reproduce fig1b --seed 7 --out \"" + prefix + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
    }
  } else {
    ReproduceOptions o;
    o.seed = 7;
    for (const auto& prefix : {a, b}) {
      o.prefix = prefix;
      reproduce(Figure::fig1b, o);
    }
  }
  const bool csv = read_file(a + ".csv") == read_file(b + ".csv") && !read_file(a + ".csv").empty();
  // The JSON echoes the output prefix, which differs by construction.
  auto load = [](const std::string& prefix) {
    auto j = nlohmann::json::parse(read_file(prefix + ".json"));
    j["config"].erase("output");
    return j;
  };
  const bool json = load(a) == load(b);
  return {csv && json, std::string(cli.empty() ? "in-process" : "CLI") +
                           " reproduce fig1b --seed 7 twice: CSV identical: " + (csv ? "yes" : "no") +
                           ", JSON identical: " + (json ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  report("Oracle equivalence (Lyapunov vs spectral)", oracle_equivalence);
  report("Physics fixtures", physics_fixtures);
  report("Fig. 1(a) trends", fig1a_trends);
  report("Fig. 1(b) regime", fig1b_regime);
  report("Fig. 1(c) shape", fig1c_shape);
  report("Fig. 1(d) E23 minimal and decreasing", fig1d_minimal);
  report("Entanglement robustness at 15 K", entanglement_robustness);
  report("Fig. 2 conditioning", fig2_conditioning);
  report("Fig. 3 trend", fig3_trend);
  report("Conditioning oracle (Gaussian vs Fock)", conditioning_oracle);
  report("Determinism", [&] { return determinism(cli); });
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
