#pragma once

#include <vector>

#include "optomech/gaussian.hpp"

namespace optomech {

/// S(r)(ρ_th(n̄_a) ⊗ ρ_th(n̄_b))S(r)†, S(r) = exp[r(a†b† − ab)].
struct TwoModeSqueezedThermal {
  double r = 0.0;
  double nbar_a = 0.0;
  double nbar_b = 0.0;

  GaussianStated covariance() const;
  /// Recovers (r, n̄_a, n̄_b) from a covariance matrix in that standard form;
  /// throws DomainError for any other two-mode state.
  static TwoModeSqueezedThermal from_covariance(const GaussianStated& state);
};

/// Mirror (mode a) state after a Geiger click on mode b, built in the Fock
/// basis. Two-mode squeezing conserves n_a − n_b, so the conditioned state is
/// diagonal and its Wigner function is Σ_n P_n W_|n⟩.
struct FockConditionedMirror {
  std::vector<double> populations;  // normalized P_n, n < cutoff
  double click_probability = 0.0;
  double truncated_mass = 0.0;  // joint probability outside the cutoff box

  double operator()(double q, double p) const;
  /// Throws TruncationError when the probability lost to the cutoff exceeds
  /// `tolerance` relative to the click probability.
  void require_accuracy(double tolerance) const;
};

/// Builds the joint number distribution P(m, n) for m, n < cutoff from
/// closed-form matrix elements of S(r) (disentangled SU(1,1) form), applies
/// 1 − |0⟩⟨0| on mode b and traces it out. Requires cutoff ≥ 20.
FockConditionedMirror fock_oracle(const GaussianStated& two_mode, int cutoff = 40);
FockConditionedMirror fock_oracle(const TwoModeSqueezedThermal& state, int cutoff = 40);

/// Wigner function of |n⟩: (2/π)(−1)ⁿ Lₙ(4|λ|²) e^{−2|λ|²}, λ = q + ip.
double fock_wigner(int n, double q, double p);

}  // namespace optomech
