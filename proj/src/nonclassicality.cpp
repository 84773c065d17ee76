#include "optomech/nonclassicality.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

std::string_view to_string(Detection d) {
  switch (d) {
    case Detection::none: return "none";
    case Detection::cavity: return "cavity";
    case Detection::atoms: return "atoms";
    case Detection::both: return "both";
  }
  return "none";
}

Detection parse_detection(std::string_view name) {
  for (auto d : {Detection::none, Detection::cavity, Detection::atoms, Detection::both})
    if (name == to_string(d)) return d;
  throw DomainError("unknown detection '" + std::string(name) + "' (none|cavity|atoms|both)");
}

namespace {

// Zero-mean single-mode Gaussian Wigner function in closed form.
struct Gaussian2 {
  double a = 0, b = 0, c = 0, norm = 0;  // exp(−(a q² + 2b qp + c p²))·norm

  explicit Gaussian2(const Eigen::MatrixXd& s) {
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    if (!(s(0, 0) > 0) || !(det > 0)) throw DomainError("single-mode covariance is not positive definite");
    a = s(1, 1) / det;
    b = -s(0, 1) / det;
    c = s(0, 0) / det;
    norm = 1.0 / (constants::pi * std::sqrt(det));
  }
  double operator()(double q, double p) const {
    return norm * std::exp(-(a * q * q + 2 * b * q * p + c * p * p));
  }
};

Index find_mode(const GaussianStated& state, Mode mode, Index fallback) {
  for (std::size_t i = 0; i < state.modes.size(); ++i)
    if (state.modes[i] == mode) return static_cast<Index>(i);
  return fallback;
}

}  // namespace

double WignerMixture::operator()(double q, double p) const {
  double w = 0.0;
  for (const auto& c : components) w += c.coefficient * Gaussian2(c.state.sigma)(q, p);
  return w;
}

double WignerMixture::max_marginal_sd() const {
  double sd = 0.0;
  for (const auto& c : components)
    sd = std::max(sd, std::sqrt(c.state.sigma.diagonal().maxCoeff()));
  return sd;
}

WignerMixture conditioned_mirror_state(const GaussianStated& state, Detection detect,
                                       double click_threshold) {
  if (state.mode_count() != 3) throw DomainError("conditioning needs the three-mode state");
  const Index m = find_mode(state, Mode::mirror, 0);
  const Index c = find_mode(state, Mode::cavity, 1);
  const Index a = find_mode(state, Mode::atoms, 2);

  WignerMixture mix;
  mix.components.push_back({1.0, reduce(state, {m})});
  auto subtract_vacuum_of = [&](Index other) {
    const auto p = vacuum_project(reduce(state, {m, other}), {1});
    mix.components.push_back({-p.weight, p.conditional});
  };
  switch (detect) {
    case Detection::none: break;
    case Detection::cavity: subtract_vacuum_of(c); break;
    case Detection::atoms: subtract_vacuum_of(a); break;
    case Detection::both: {
      subtract_vacuum_of(c);
      subtract_vacuum_of(a);
      const auto both = vacuum_project(reduce(state, {m, c, a}), {1, 2});
      mix.components.push_back({both.weight, both.conditional});
      break;
    }
  }

  double z = 0.0;
  for (const auto& comp : mix.components) z += comp.coefficient;
  if (!(z > click_threshold))
    throw DegenerateConditioningError("click probability " + std::to_string(z) +
                                      " is at or below the threshold");
  for (auto& comp : mix.components) comp.coefficient /= z;
  mix.normalization = z;
  return mix;
}

void PhaseSpaceGrid::validate() const {
  if (points_q < 3 || points_p < 3 || points_q % 2 == 0 || points_p % 2 == 0)
    throw DomainError("grid point counts must be odd and at least 3");
  if (!(half_width_q > 0) || !(half_width_p > 0) || !std::isfinite(half_width_q) ||
      !std::isfinite(half_width_p) || !std::isfinite(center_q) || !std::isfinite(center_p))
    throw DomainError("grid extent must be finite and positive");
}

double PhaseSpaceGrid::q(int i) const {
  return center_q - half_width_q + 2.0 * half_width_q * i / (points_q - 1);
}

double PhaseSpaceGrid::p(int j) const {
  return center_p - half_width_p + 2.0 * half_width_p * j / (points_p - 1);
}

double PhaseSpaceGrid::cell_area() const {
  return (2.0 * half_width_q / (points_q - 1)) * (2.0 * half_width_p / (points_p - 1));
}

PhaseSpaceGrid PhaseSpaceGrid::auto_grid(const WignerMixture& mix, int points, double sigmas) {
  PhaseSpaceGrid g;
  g.half_width_q = g.half_width_p = sigmas * mix.max_marginal_sd();
  g.points_q = g.points_p = points;
  g.validate();
  return g;
}

Eigen::VectorXd simpson_weights(int points, double h) {
  if (points < 3 || points % 2 == 0) throw DomainError("Simpson rule needs an odd point count ≥ 3");
  Eigen::VectorXd w(points);
  for (int i = 0; i < points; ++i) w(i) = (i == 0 || i == points - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
  return w * (h / 3.0);
}

namespace {

Eigen::MatrixXd simpson_tensor(const PhaseSpaceGrid& g) {
  const Eigen::VectorXd wq = simpson_weights(g.points_q, 2.0 * g.half_width_q / (g.points_q - 1));
  const Eigen::VectorXd wp = simpson_weights(g.points_p, 2.0 * g.half_width_p / (g.points_p - 1));
  return wq * wp.transpose();
}

}  // namespace

double WignerField::integral() const {
  return (simpson_tensor(grid).array() * values.array()).sum();
}

double WignerField::negativity_volume() const {
  return 0.0 - (simpson_tensor(grid).array() * values.array().min(0.0)).sum();
}

WignerField evaluate_field(const WignerMixture& mix, const PhaseSpaceGrid& grid) {
  grid.validate();
  std::vector<std::pair<double, Gaussian2>> parts;
  for (const auto& c : mix.components) parts.emplace_back(c.coefficient, Gaussian2(c.state.sigma));

  WignerField field;
  field.grid = grid;
  field.values.resize(grid.points_q, grid.points_p);
  parallel_for(static_cast<std::size_t>(grid.points_q), 0, [&](std::size_t row) {
    const int i = static_cast<int>(row);
    const double q = grid.q(i);
    for (int j = 0; j < grid.points_p; ++j) {
      const double p = grid.p(j);
      double w = 0.0;
      for (const auto& [coef, g] : parts) w += coef * g(q, p);
      field.values(i, j) = w;
    }
  });
  return field;
}

double negativity_volume(const WignerMixture& mix, const PhaseSpaceGrid& grid) {
  return evaluate_field(mix, grid).negativity_volume();
}

}  // namespace optomech
