#include "optomech/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/error.hpp"
#include "optomech/lyapunov.hpp"

namespace optomech {

LinearModel build_model(const OperatingPoint& op, NoiseModel noise) {
  const auto& p = op.params;
  const double wm = p.omega_m, gm = p.gamma_m, ce = op.chi_eff, dc = op.Delta_c_eff;
  const double k = p.kappa, g = op.g_N, ga = p.gamma_a, da = p.Delta_a;

  LinearModel model;
  model.drift.resize(6, 6);
  // clang-format off
  model.drift <<
      0,   wm,  0,   0,   0,   0,
      -wm, -gm, ce,  0,   0,   0,
      0,   0,   -k,  dc,  0,   g,
      ce,  0,   -dc, -k,  -g,  0,
      0,   0,   0,   g,   -ga, da,
      0,   0,   -g,  0,   -da, -ga;
  // clang-format on
  model.diffusion = Eigen::MatrixXd::Zero(6, 6);
  model.diffusion.diagonal() << 0, gm * (2 * op.nbar + 1), k, k, ga, ga;
  model.noise = noise;
  model.op = op;
  return model;
}

StabilityReport stability(const Eigen::MatrixXd& drift, double tolerance) {
  if (drift.rows() != drift.cols() || drift.rows() == 0)
    throw DomainError("drift matrix must be square and nonempty");
  const Eigen::VectorXcd lambda = drift.eigenvalues();
  StabilityReport report;
  report.abscissa = lambda.real().maxCoeff();
  report.stable = report.abscissa < -tolerance;
  return report;
}

StabilityReport stability(const LinearModel& model, double tolerance) {
  return stability(model.drift, tolerance);
}

namespace {

void require_stable(const LinearModel& model) {
  const auto report = stability(model);
  if (!report.stable)
    throw StabilityError("drift matrix is not Hurwitz (max Re λ = " +
                         std::to_string(report.abscissa) + ")");
}

}  // namespace

GaussianStated steady_cm_lyapunov(const LinearModel& model) {
  if (!std::holds_alternative<Markovian>(model.noise))
    throw DomainError("the Lyapunov route needs Markovian noise; use the spectral route");
  require_stable(model);
  Eigen::MatrixXd sigma = solve_continuous_lyapunov(model.drift, model.diffusion);
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  const double scale = model.diffusion.norm();
  const double residual =
      (model.drift * sigma + sigma * model.drift.transpose() + model.diffusion).norm();
  if (residual > 1e-10 * std::max(scale, 1e-300) && residual > 0)
    throw NumericalError("Lyapunov residual " + std::to_string(residual) + " too large");
  return {sigma, model.modes};
}

double brownian_spectrum(double omega, const PhysicalParams& params) {
  const double gm = params.gamma_m, wm = params.omega_m, T = params.temperature;
  if (T == 0.0) return gm * std::abs(omega) / wm;
  const double x = constants::hbar * omega / (2.0 * constants::boltzmann * T);
  if (std::abs(x) < 1e-8) return 2.0 * constants::boltzmann * T * gm / (constants::hbar * wm);
  return gm * omega / wm / std::tanh(x);
}

double effective_cutoff(const LinearModel& model) {
  const auto* colored = std::get_if<ColoredBrownian>(&model.noise);
  if (!colored) return 0.0;
  return colored->cutoff > 0 ? colored->cutoff : 200.0 * model.op.params.omega_m;
}

GaussianStated steady_cm_spectral(const LinearModel& model, const SpectralOptions& options,
                                  QuadratureReport* report) {
  require_stable(model);
  const Index n = model.drift.rows();
  const Eigen::VectorXcd lambda = model.drift.eigenvalues();
  const bool colored = std::holds_alternative<ColoredBrownian>(model.noise);
  const double cutoff = effective_cutoff(model);
  const auto& p = model.op.params;

  double largest = lambda.cwiseAbs().maxCoeff();
  for (double f : {p.omega_m, model.op.Delta_c_eff, p.Delta_a, p.kappa, p.gamma_a})
    largest = std::max(largest, std::abs(f));
  const double band = std::max(options.band_factor * largest, colored ? cutoff : 0.0);

  const Eigen::MatrixXcd a = model.drift.cast<std::complex<double>>();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  auto integrand = [&](double omega) -> Eigen::MatrixXd {
    Eigen::MatrixXcd d = model.diffusion.cast<std::complex<double>>();
    if (colored) d(1, 1) = std::abs(omega) <= cutoff ? brownian_spectrum(omega, p) : 0.0;
    const Eigen::MatrixXcd m = (a + std::complex<double>(0.0, omega) * eye).partialPivLu().inverse();
    return (m * d * m.adjoint()).real();
  };

  std::vector<double> breaks{-band, 0.0, band};
  for (Index i = 0; i < lambda.size(); ++i) {
    const double centre = lambda(i).imag(), width = std::abs(lambda(i).real());
    for (double k : {0.0, 1.0, 4.0, 16.0})
      for (double s : {-1.0, 1.0}) breaks.push_back(centre + s * k * width);
  }
  if (colored) {
    breaks.push_back(-cutoff);
    breaks.push_back(cutoff);
  }
  std::erase_if(breaks, [&](double b) { return !(std::abs(b) <= band); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  QuadratureReport inner, outer;
  const Eigen::MatrixXd central =
      integrate_adaptive<Eigen::MatrixXd>(integrand, breaks, options.quadrature, &inner);

  // |ω| > band, with ω = band/t.
  auto tail = [&](double t) -> Eigen::MatrixXd {
    const double w = band / t;
    return (integrand(w) + integrand(-w)) * (band / (t * t));
  };
  const std::array<double, 2> unit{0.0, 1.0};
  const Eigen::MatrixXd tails =
      integrate_adaptive<Eigen::MatrixXd>(tail, unit, options.quadrature, &outer);

  if (report) {
    report->intervals = inner.intervals + outer.intervals;
    report->evaluations = inner.evaluations + outer.evaluations;
    report->error_estimate = (inner.error_estimate + outer.error_estimate) / constants::two_pi;
    report->converged = inner.converged && outer.converged;
  }
  if (!inner.converged || !outer.converged)
    throw NumericalError("spectral integral did not converge (error estimate " +
                         std::to_string((inner.error_estimate + outer.error_estimate) /
                                        constants::two_pi) +
                         ")");

  Eigen::MatrixXd sigma = (central + tails) / constants::two_pi;
  sigma = 0.5 * (sigma + sigma.transpose()).eval();
  return {sigma, model.modes};
}

}  // namespace optomech
