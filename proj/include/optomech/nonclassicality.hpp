#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "optomech/gaussian.hpp"

namespace optomech {

/// Which modes receive a Geiger (click / no-click) measurement that clicked.
enum class Detection { none, cavity, atoms, both };

std::string_view to_string(Detection d);
Detection parse_detection(std::string_view name);

struct WignerComponent {
  double coefficient = 0.0;
  GaussianStated state;  // single mode
};

/// Signed combination of zero-mean Gaussian Wigner functions. Coefficients are
/// normalized to sum to one; `normalization` is the click probability that
/// was divided out (1 for Detection::none).
struct WignerMixture {
  std::vector<WignerComponent> components;
  double normalization = 1.0;

  double operator()(double q, double p) const;
  double max_marginal_sd() const;
};

/// Mirror state conditioned on Geiger clicks, using 1 − |0⟩⟨0| per detected
/// mode and Gaussian vacuum projections of the three-mode state (mirror,
/// cavity, atoms). Throws DegenerateConditioningError when the click
/// probability is ≤ click_threshold.
WignerMixture conditioned_mirror_state(const GaussianStated& state, Detection detect,
                                       double click_threshold = 1e-12);

/// Rectangular phase-space lattice; both point counts must be odd (≥ 3) for
/// composite Simpson weights.
struct PhaseSpaceGrid {
  double center_q = 0.0;
  double center_p = 0.0;
  double half_width_q = 1.0;
  double half_width_p = 1.0;
  int points_q = 201;
  int points_p = 201;

  void validate() const;
  double q(int i) const;
  double p(int j) const;
  double cell_area() const;
  /// 201×201 points over ±6 of the largest marginal standard deviation.
  static PhaseSpaceGrid auto_grid(const WignerMixture& mix, int points = 201, double sigmas = 6.0);
};

/// Composite Simpson weights for `points` nodes with spacing h.
Eigen::VectorXd simpson_weights(int points, double h);

struct WignerField {
  PhaseSpaceGrid grid;
  Eigen::MatrixXd values;  // values(i, j) at (q(i), p(j))

  double integral() const;
  double negativity_volume() const;
  double min_value() const { return values.minCoeff(); }
};

WignerField evaluate_field(const WignerMixture& mix, const PhaseSpaceGrid& grid);

/// N_w = −∫ over the region where W < 0, Simpson-weighted on the grid.
double negativity_volume(const WignerMixture& mix, const PhaseSpaceGrid& grid);

}  // namespace optomech
