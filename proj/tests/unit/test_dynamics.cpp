#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "optomech/constants.hpp"
#include "optomech/dynamics.hpp"
#include "optomech/error.hpp"
#include "optomech/quadrature.hpp"
#include "support.hpp"

using namespace optomech;

namespace {

OperatingPoint decoupled(double temperature) {
  OperatingPoint op;
  op.params = test::reference_params(1.0, 1e6);
  op.params.temperature = temperature;
  op.nbar = thermal_occupation(temperature, op.params.omega_m);
  op.Delta_c_eff = op.params.omega_m;
  return op;
}

}  // namespace

TEST_CASE("Gauss-Kronrod integrates polynomials exactly") {
  // The 21-point Kronrod rule is exact to degree 31.
  auto f = [](double x) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = std::pow(x, 30) - 3 * std::pow(x, 7) + 2;
    return m;
  };
  const std::array<double, 2> ab{-1.0, 2.0};
  QuadratureReport rep;
  const auto v = integrate_adaptive<Eigen::MatrixXd>(f, ab, {}, &rep);
  const double exact = (std::pow(2.0, 31) + 1) / 31 - 3 * (std::pow(2.0, 8) - 1) / 8 + 6;
  CHECK(v(0, 0) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature resolves a narrow Lorentzian") {
  const double w = 1e-4;
  auto f = [&](double x) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = w / (x * x + w * w);
    return m;
  };
  const std::array<double, 3> ab{-1.0, 0.3, 1.0};
  QuadratureReport rep;
  const auto v = integrate_adaptive<Eigen::MatrixXd>(f, ab, {}, &rep);
  CHECK(rep.converged);
  CHECK(v(0, 0) == doctest::Approx(2 * std::atan(1 / w)).epsilon(1e-11));
}

TEST_CASE("decoupled mirror relaxes to the thermal state") {
  for (double t : {0.0, 1e-4, 1.0}) {
    const auto op = decoupled(t);
    const auto s = steady_cm_lyapunov(build_model(op));
    const Eigen::MatrixXd mirror = s.sigma.topLeftCorner(2, 2);
    CHECK((mirror - (op.nbar + 0.5) * Eigen::MatrixXd::Identity(2, 2)).norm() <=
          1e-9 * (op.nbar + 0.5));
    const Eigen::MatrixXd rest = s.sigma.bottomRightCorner(4, 4);
    CHECK((rest - 0.5 * Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);
  }
}

TEST_CASE("spectral integral reproduces the Lyapunov solution") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 8; ++k) {
    const auto m = test::random_stable_model(rng);
    const auto a = steady_cm_lyapunov(m).sigma;
    const auto b = steady_cm_spectral(m).sigma;
    CHECK((a - b).norm() / a.norm() <= 1e-6);
  }
  for (double kappa : {2e5, 2.5e6}) {
    const auto m = build_model(solve_operating_point(test::reference_params(1.0, kappa)));
    const auto a = steady_cm_lyapunov(m).sigma;
    const auto b = steady_cm_spectral(m).sigma;
    CHECK((a - b).norm() / a.norm() <= 1e-6);
  }
}

TEST_CASE("colored Brownian noise approaches the white limit at high Q") {
  const auto op = solve_operating_point(test::reference_params(1.0, 1e6));
  const auto white = steady_cm_lyapunov(build_model(op)).sigma;
  const auto colored = steady_cm_spectral(build_model(op, ColoredBrownian{})).sigma;
  // Position variances agree; momentum picks up a small cutoff-dependent term.
  CHECK(colored(0, 0) == doctest::Approx(white(0, 0)).epsilon(1e-3));
  CHECK(colored(2, 2) == doctest::Approx(white(2, 2)).epsilon(1e-3));
}

TEST_CASE("Brownian spectrum limits") {
  auto p = test::reference_params(1.0, 1e6);
  const double kt = constants::boltzmann * p.temperature / constants::hbar;
  CHECK(brownian_spectrum(0.0, p) == doctest::Approx(2 * kt * p.gamma_m / p.omega_m));
  CHECK(brownian_spectrum(1e-3, p) == doctest::Approx(2 * kt * p.gamma_m / p.omega_m));
  p.temperature = 0;
  CHECK(brownian_spectrum(-p.omega_m, p) == doctest::Approx(p.gamma_m));
}

TEST_CASE("unstable drift is refused") {
  auto m = build_model(decoupled(1e-4));
  m.drift(1, 1) = +1.0;
  CHECK_FALSE(stability(m).stable);
  CHECK_THROWS_AS(steady_cm_lyapunov(m), StabilityError);
  CHECK_THROWS_AS(steady_cm_spectral(m), StabilityError);
  auto colored = build_model(decoupled(1e-4), ColoredBrownian{});
  CHECK_THROWS_AS(steady_cm_lyapunov(colored), DomainError);
}
