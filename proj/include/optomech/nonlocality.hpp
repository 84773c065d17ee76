#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "optomech/gaussian.hpp"

namespace optomech {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Phase-space arguments of the four Wigner terms: O = (O₁, O₂, O₃) for
/// mirror, cavity and atoms, and the primed alternatives O′.
struct MKSettings {
  Vector6d unprimed = Vector6d::Zero();
  Vector6d primed = Vector6d::Zero();

  Eigen::VectorXd to_vector() const;
  static MKSettings from_vector(const Eigen::Ref<const Eigen::VectorXd>& x);
};

struct MKConfig {
  int starts = 64;
  std::uint64_t seed = 0;
  double tolerance = 1e-10;
  int max_evaluations = 2000;   // per start
  double box_sigmas = 3.0;      // start box half-width in marginal standard deviations
  int polish_rounds = 20;       // fresh-simplex restarts from the best point
  unsigned threads = 0;         // 0 = hardware concurrency
};

struct MKResult {
  double value = 0.0;
  MKSettings settings;
  int starts_used = 0;
  bool converged = false;
};

/// M₃ = (π³/8)[W(O′₁,O₂,O₃) + W(O₁,O′₂,O₃) + W(O₁,O₂,O′₃) − W(O′₁,O′₂,O′₃)]
/// for a fixed three-mode state.
class MKFunction {
 public:
  /// Throws DomainError for a state that is not three-mode, physical and
  /// positive definite.
  explicit MKFunction(const GaussianStated& state);

  double operator()(const MKSettings& s) const;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// (π³/8)·W(0), the value of each term at zero displacement.
  double scaled_peak() const { return scaled_peak_; }
  const Vector6d& marginal_sd() const { return marginal_sd_; }

 private:
  double term(const Vector6d& o) const;

  Matrix6d precision_;
  Vector6d marginal_sd_;
  double scaled_peak_ = 0.0;
};

double mk_value(const GaussianStated& state, const MKSettings& settings);

/// Multistart Nelder–Mead over the 12 settings. Start 0 is the origin; the
/// others are uniform in ±box_sigmas marginal standard deviations, drawn from a
/// stream seeded by (seed, start index). The winner is then restarted with a
/// fresh simplex, each round on the same per-start budget, until a round gains
/// less than the tolerance; the 12-dimensional simplex otherwise tends to
/// stall on the flat ridges of M₃.
MKResult mk_maximize(const GaussianStated& state, const MKConfig& config = {});

/// Same search for the minimum of M₃, for the |M₃| > 2 test on the negative side.
MKResult mk_minimize(const GaussianStated& state, const MKConfig& config = {});

}  // namespace optomech
