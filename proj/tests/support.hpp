#pragma once

#include <Eigen/Dense>

#include <random>

#include "optomech/dynamics.hpp"
#include "optomech/figures.hpp"
#include "optomech/model.hpp"

namespace test {

inline optomech::PhysicalParams reference_params(double length_mm, double kappa_over_2pi_hz) {
  auto c = optomech::base_scenario();
  c.set("length_mm", length_mm);
  c.set("kappa_over_2pi_hz", kappa_over_2pi_hz);
  return c.params();
}

// Random Hurwitz drift with positive semidefinite diffusion, 3 modes.
inline optomech::LinearModel random_stable_model(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const int n = 6;
  optomech::LinearModel m;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  const double shift = a.eigenvalues().real().maxCoeff() + u(rng);
  a.diagonal().array() -= shift;
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = g(rng);
  m.drift = a;
  m.diffusion = b * b.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
  m.op.params.omega_m = 1.0;
  return m;
}

}  // namespace test
