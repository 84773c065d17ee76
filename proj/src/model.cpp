#include "optomech/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/error.hpp"

namespace optomech {

namespace {

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// K = κ + g_N²/(γ_a + iΔ_a): the cavity response dressed by the atoms.
std::complex<double> dressed_decay(const PhysicalParams& params, double g_N) {
  const std::complex<double> atomic(params.gamma_a, params.Delta_a);
  if (g_N == 0.0) return {params.kappa, 0.0};
  if (std::abs(atomic) == 0.0)
    throw ModelError("atoms coupled at zero linewidth and zero detuning");
  return params.kappa + g_N * g_N / atomic;
}

struct RootChoice {
  double intensity = 0.0;
  bool multistable = false;
};

}  // namespace

void PhysicalParams::validate() const {
  if (!finite_all({mass, omega_m, gamma_m, temperature, power, wavelength, length, kappa, gamma_a,
                   Delta_a}))
    throw DomainError("physical parameters must be finite");
  if (!(mass > 0) || !(omega_m > 0) || !(length > 0) || !(wavelength > 0) || !(power > 0))
    throw DomainError("mass, omega_m, length, wavelength and power must be positive");
  if (kappa < 0 || gamma_m < 0 || gamma_a < 0)
    throw DomainError("decay rates must be nonnegative");
  if (temperature < 0) throw DomainError("temperature must be nonnegative");
  if (const auto* raw = std::get_if<RawDetuning>(&detuning); raw && !std::isfinite(raw->value))
    throw DomainError("detuning must be finite");
  if (const auto* eff = std::get_if<EffectiveDetuning>(&detuning); eff && !std::isfinite(eff->target))
    throw DomainError("detuning must be finite");
  if (const auto* raw = std::get_if<RawCoupling>(&coupling);
      raw && (!std::isfinite(raw->value) || raw->value < 0))
    throw DomainError("g_N must be finite and nonnegative");
}

double PhysicalParams::laser_frequency() const {
  return constants::two_pi * constants::speed_of_light / wavelength;
}

double PhysicalParams::single_photon_coupling() const {
  return laser_frequency() / length * std::sqrt(constants::hbar / (mass * omega_m));
}

double PhysicalParams::drive_amplitude() const {
  return std::sqrt(2.0 * power * kappa / (constants::hbar * laser_frequency()));
}

double kappa_from_finesse(double length, double finesse) {
  if (!(length > 0) || !(finesse > 0)) throw DomainError("length and finesse must be positive");
  return constants::pi * constants::speed_of_light / (2.0 * length * finesse);
}

double thermal_occupation(double temperature, double omega) {
  if (temperature < 0 || !(omega > 0)) throw DomainError("thermal_occupation: T ≥ 0 and ω > 0 required");
  if (temperature == 0.0) return 0.0;
  const double x = constants::hbar * omega / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

std::vector<double> steady_state_intensities(const PhysicalParams& params, double Delta_c,
                                             double g_N) {
  const double eps = params.drive_amplitude();
  const auto k = dressed_decay(params, g_N);
  const double chi = params.single_photon_coupling();
  const double a = chi * chi / params.omega_m;
  const double b = k.imag() + Delta_c;
  const double kr2 = k.real() * k.real();
  const double eps2 = eps * eps;

  if (eps == 0.0) return {0.0};

  // f(n) = a² n³ − 2ab n² + (K_r² + b²) n − ε²
  auto f = [&](double n) { return n * (kr2 + (b - a * n) * (b - a * n)) - eps2; };
  auto df = [&](double n) { return kr2 + b * b - 4.0 * a * b * n + 3.0 * a * a * n * n; };

  if (a == 0.0) {
    const double denom = kr2 + b * b;
    if (denom == 0.0) throw ModelError("undamped resonant cavity has no steady state");
    return {eps2 / denom};
  }

  // Companion matrix of the monic cubic in x = n / s with s = (ε/a)^{2/3},
  // which brings the constant term to −1.
  const double s = std::cbrt(eps2 / (a * a));
  const double c2 = -2.0 * b / (a * s);
  const double c1 = (kr2 + b * b) / (a * a * s * s);
  const double c0 = -1.0;
  Eigen::Matrix3d companion;
  companion << -c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
  const Eigen::Vector3cd lambda = companion.eigenvalues();

  std::vector<double> roots;
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto z = lambda(i);
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double n = z.real() * s;
    if (n < 0) continue;
    for (int it = 0; it < 50; ++it) {
      const double d = df(n);
      if (d == 0.0) break;
      const double step = f(n) / d;
      n -= step;
      if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(n)) break;
    }
    if (n < 0) continue;
    if (std::abs(f(n)) > 1e-8 * eps2) continue;
    roots.push_back(n);
  }
  std::sort(roots.begin(), roots.end());
  // Merge roots that coincide after polishing (double roots).
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || std::abs(r - unique.back()) > 1e-9 * std::max(r, 1.0)) unique.push_back(r);
  return unique;
}

double steady_state_residual(const PhysicalParams& params, double Delta_c, double g_N,
                             double alpha_s) {
  const double eps = params.drive_amplitude();
  const auto k = dressed_decay(params, g_N);
  const double chi = params.single_photon_coupling();
  const std::complex<double> denom =
      k + std::complex<double>(0.0, Delta_c - chi * chi * alpha_s * alpha_s / params.omega_m);
  return std::abs(alpha_s * std::abs(denom) - eps) / eps;
}

namespace {

OperatingPoint assemble(const PhysicalParams& params, double Delta_c, double g_N, double intensity,
                        bool multistable) {
  OperatingPoint op;
  op.params = params;
  op.chi = params.single_photon_coupling();
  op.epsilon = params.drive_amplitude();
  op.nbar = thermal_occupation(params.temperature, params.omega_m);
  op.alpha_s = std::sqrt(intensity);
  op.chi_eff = std::sqrt(2.0) * op.chi * op.alpha_s;
  op.g_N = g_N;
  op.Delta_c = Delta_c;
  op.Delta_c_eff = Delta_c - op.chi_eff * op.chi_eff / (2.0 * params.omega_m);
  op.multistable = multistable;
  const auto denom = dressed_decay(params, g_N) +
                     std::complex<double>(0.0, Delta_c - op.chi * op.chi * intensity / params.omega_m);
  op.alpha = op.epsilon / denom;
  op.residual = steady_state_residual(params, Delta_c, g_N, op.alpha_s);
  return op;
}

// Smallest admissible intensity whose linearization is stable. With
// `require_stable` false, falls back to the smallest root.
RootChoice choose_root(const PhysicalParams& params, double Delta_c, double g_N, bool match_g,
                       bool require_stable) {
  const auto roots = steady_state_intensities(params, Delta_c, g_N);
  if (roots.empty()) throw ModelError("no real nonnegative steady-state amplitude");
  RootChoice choice{roots.front(), roots.size() > 1};
  if (roots.size() == 1 && !require_stable) return choice;
  for (double n : roots) {
    auto op = assemble(params, Delta_c, g_N, n, roots.size() > 1);
    if (match_g) op.g_N = op.chi_eff;
    if (stability(build_model(op)).stable) {
      choice.intensity = n;
      return choice;
    }
  }
  if (require_stable) throw StabilityError("every steady-state branch is dynamically unstable");
  return choice;
}

}  // namespace

OperatingPoint solve_operating_point(const PhysicalParams& params,
                                     const OperatingPointOptions& options) {
  params.validate();
  const bool match_g = std::holds_alternative<MatchOptomechanicalCoupling>(params.coupling);
  const auto* effective = std::get_if<EffectiveDetuning>(&params.detuning);

  double Delta_c = effective ? effective->target : std::get<RawDetuning>(params.detuning).value;
  double g_N = match_g ? 0.0 : std::get<RawCoupling>(params.coupling).value;

  int iterations = 0;
  if (match_g || effective) {
    const double chi = params.single_photon_coupling();
    bool damped = false;
    double last_dg = 0.0, last_dd = 0.0;
    bool converged = false;
    for (iterations = 1; iterations <= options.max_iterations; ++iterations) {
      const auto choice = choose_root(params, Delta_c, g_N, match_g, false);
      const double chi_eff = std::sqrt(2.0) * chi * std::sqrt(choice.intensity);
      const double next_g = match_g ? chi_eff : g_N;
      const double next_d =
          effective ? effective->target + chi_eff * chi_eff / (2.0 * params.omega_m) : Delta_c;
      const double dg = next_g - g_N;
      const double dd = next_d - Delta_c;
      const double change = std::max(std::abs(dg) / std::max(std::abs(next_g), 1e-300),
                                     std::abs(dd) / std::max(std::abs(next_d), 1e-300));
      if (iterations > 1 && (dg * last_dg < 0 || dd * last_dd < 0)) damped = true;
      const double w = damped ? options.damping : 1.0;
      g_N += w * dg;
      Delta_c += w * dd;
      last_dg = dg;
      last_dd = dd;
      if (change < options.tolerance) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ConvergenceError("operating point did not converge in " +
                             std::to_string(options.max_iterations) + " iterations");
  }

  const auto choice = choose_root(params, Delta_c, g_N, match_g, true);
  auto op = assemble(params, Delta_c, g_N, choice.intensity, choice.multistable);
  op.iterations = iterations;
  if (op.residual > 1e-9)
    throw NumericalError("steady-state residual " + std::to_string(op.residual) + " exceeds 1e-9");
  return op;
}

}  // namespace optomech
