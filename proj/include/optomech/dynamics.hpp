#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

#include "optomech/gaussian.hpp"
#include "optomech/model.hpp"
#include "optomech/quadrature.hpp"

namespace optomech {

/// White noise, the high-Q δ-correlated limit of the Brownian force.
struct Markovian {};

/// Ohmic quantum Brownian force with symmetrized spectrum
/// (γ_m ω/ω_m)·coth(ħω/2k_BT), kept only for |ω| ≤ cutoff because the momentum
/// variance diverges logarithmically without one. cutoff ≤ 0 selects 200·ω_m.
struct ColoredBrownian {
  double cutoff = 0.0;
};

using NoiseModel = std::variant<Markovian, ColoredBrownian>;

/// Linearized fluctuation dynamics  dv/dt = A v + noise  over the quadratures
/// (δq, δp, δX, δY, δx, δy). `diffusion` is the white-noise matrix; for the
/// colored model its (p, p) entry is replaced inside the spectral integral.
struct LinearModel {
  Eigen::MatrixXd drift;
  Eigen::MatrixXd diffusion;
  NoiseModel noise = Markovian{};
  OperatingPoint op;
  std::vector<Mode> modes{Mode::mirror, Mode::cavity, Mode::atoms};
};

LinearModel build_model(const OperatingPoint& op, NoiseModel noise = Markovian{});

struct StabilityReport {
  bool stable = false;
  double abscissa = 0.0;  // max Re eig(A)
};

/// Stable iff every eigenvalue has real part < −tolerance.
StabilityReport stability(const Eigen::MatrixXd& drift, double tolerance = 0.0);
StabilityReport stability(const LinearModel& model, double tolerance = 0.0);

/// σ from A σ + σ Aᵀ + D = 0. Markovian models only.
GaussianStated steady_cm_lyapunov(const LinearModel& model);

struct SpectralOptions {
  QuadratureOptions quadrature{};
  double band_factor = 100.0;  // Ω_max = band_factor × largest model frequency
};

/// σ = (1/2π) ∫ M(ω) D(ω) M(ω)† dω with M(ω) = −(A + iω)⁻¹. The band
/// [−Ω_max, Ω_max] is integrated adaptively with breakpoints at the drift
/// resonances; the tails are mapped onto [0, 1] by ω = Ω_max/t.
GaussianStated steady_cm_spectral(const LinearModel& model, const SpectralOptions& options = {},
                                  QuadratureReport* report = nullptr);

/// Symmetrized Brownian-force spectrum (γ_m ω/ω_m)·coth(ħω/2k_BT), with the
/// ω → 0 limit 2k_BTγ_m/(ħω_m) and γ_m|ω|/ω_m at T = 0.
double brownian_spectrum(double omega, const PhysicalParams& params);

double effective_cutoff(const LinearModel& model);

}  // namespace optomech
