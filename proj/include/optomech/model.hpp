#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace optomech {

/// Cavity detuning given directly as Δ_c = ω_c − ω_l (rad/s).
struct RawDetuning {
  double value = 0.0;
};

/// Target for the effective detuning Δ̃_c = Δ_c − χ_eff²/(2ω_m) (rad/s).
/// The raw detuning then floats with the operating point.
struct EffectiveDetuning {
  double target = 0.0;
};

using DetuningSpec = std::variant<RawDetuning, EffectiveDetuning>;

/// Collective atom-cavity coupling given directly (rad/s).
struct RawCoupling {
  double value = 0.0;
};

/// Constrain g_N to equal the effective optomechanical coupling χ_eff.
struct MatchOptomechanicalCoupling {};

using CouplingSpec = std::variant<RawCoupling, MatchOptomechanicalCoupling>;

/// Experimental inputs in SI units; all frequencies and rates are angular.
struct PhysicalParams {
  double mass = 0.0;         // kg
  double omega_m = 0.0;      // rad/s
  double gamma_m = 0.0;      // rad/s
  double temperature = 0.0;  // K
  double power = 0.0;        // W
  double wavelength = 0.0;   // m
  double length = 0.0;       // m
  double kappa = 0.0;        // cavity amplitude decay, rad/s
  double gamma_a = 0.0;      // rad/s
  double Delta_a = 0.0;      // ω_a − ω_l, rad/s
  DetuningSpec detuning = EffectiveDetuning{};
  CouplingSpec coupling = MatchOptomechanicalCoupling{};

  /// Throws DomainError when an invariant is violated.
  void validate() const;

  /// ω_l = 2πc/λ_l, also used in place of ω_c.
  double laser_frequency() const;
  /// χ = (ω_c/L)·√(ħ/(m ω_m)).
  double single_photon_coupling() const;
  /// ε = √(2Pκ/(ħω_l)).
  double drive_amplitude() const;
};

/// Classical steady state about which the dynamics is linearized.
struct OperatingPoint {
  PhysicalParams params;
  std::complex<double> alpha{};  // ε/(κ + iΔ_c − iχ²|α|²/ω_m + g_N²/(γ_a + iΔ_a)) for real ε
  double alpha_s = 0.0;          // |α|, the real amplitude after the phase choice
  double chi = 0.0;
  double chi_eff = 0.0;
  double g_N = 0.0;
  double Delta_c = 0.0;
  double Delta_c_eff = 0.0;
  double epsilon = 0.0;
  double nbar = 0.0;
  bool multistable = false;
  int iterations = 0;
  double residual = 0.0;  // |‖α‖·|denominator| − ε|/ε
};

struct OperatingPointOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
  double damping = 0.5;  // applied once an oscillation is detected
};

/// κ = πc/(2LF) for a cavity of length L and finesse F.
double kappa_from_finesse(double length, double finesse);

/// Bose occupation 1/(exp(ħω/k_B T) − 1); exactly zero at T = 0.
double thermal_occupation(double temperature, double omega);

/// Nonnegative real roots n = |α_s|² of
///   n·[(Re K)² + (Im K + Δ_c − χ² n/ω_m)²] = ε²,   K = κ + g_N²/(γ_a + iΔ_a),
/// ascending.
std::vector<double> steady_state_intensities(const PhysicalParams& params, double Delta_c,
                                             double g_N);

/// Solves for a self-consistent operating point, iterating on Δ_c and g_N when
/// the effective detuning or the χ_eff = g_N constraint is requested. Among
/// admissible roots the smallest one with a Hurwitz drift matrix is taken.
OperatingPoint solve_operating_point(const PhysicalParams& params,
                                     const OperatingPointOptions& options = {});

/// Relative residual |n^{1/2}·|K + iΔ_c − iχ²n/ω_m| − ε|/ε.
double steady_state_residual(const PhysicalParams& params, double Delta_c, double g_N,
                             double alpha_s);

}  // namespace optomech
