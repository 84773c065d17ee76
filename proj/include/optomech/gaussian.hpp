#pragma once

// Covariance-matrix algebra for zero-mean Gaussian states.
//
// Convention: quadratures are ordered (q, p) per mode, σ_ij = ⟨{δv_i, δv_j}⟩/2,
// so the vacuum is I/2, physical states satisfy σ + iΩ/2 ≥ 0, and the Wigner
// function is W(O) = exp(−O σ⁻¹ Oᵀ)/(πⁿ √det σ), equal to (2/π)ⁿ at the
// origin for the vacuum. The displaced-parity expectation is (π/2)ⁿ W.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/error.hpp"

namespace optomech {

enum class Mode { mirror, cavity, atoms };

constexpr std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::mirror:
      return "mirror";
    case Mode::cavity:
      return "cavity";
    case Mode::atoms:
      return "atoms";
  }
  return "unknown";
}

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

template <typename Scalar>
struct GaussianState {
  DenseMatrix<Scalar> sigma;
  std::vector<Mode> modes;

  Index mode_count() const { return sigma.rows() / 2; }
};

using GaussianStated = GaussianState<double>;

/// Direct sum of n copies of [[0, 1], [−1, 0]].
template <typename Scalar>
DenseMatrix<Scalar> symplectic_form(Index n) {
  DenseMatrix<Scalar> omega = DenseMatrix<Scalar>::Zero(2 * n, 2 * n);
  for (Index k = 0; k < n; ++k) {
    omega(2 * k, 2 * k + 1) = Scalar(1);
    omega(2 * k + 1, 2 * k) = Scalar(-1);
  }
  return omega;
}

namespace detail {

inline std::vector<Index> quadrature_indices(std::span<const Index> modes) {
  std::vector<Index> idx;
  idx.reserve(2 * modes.size());
  for (Index m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return idx;
}

inline void check_mode_subset(std::span<const Index> modes, Index mode_count) {
  if (modes.empty()) throw DomainError("mode subset is empty");
  std::vector<Index> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("mode subset contains duplicates");
  if (sorted.front() < 0 || sorted.back() >= mode_count)
    throw DomainError("mode index out of range");
}

inline std::vector<Index> complement(std::span<const Index> modes, Index mode_count) {
  std::vector<Index> rest;
  for (Index m = 0; m < mode_count; ++m)
    if (std::find(modes.begin(), modes.end(), m) == modes.end()) rest.push_back(m);
  return rest;
}

template <typename Derived>
void check_covariance_shape(const Eigen::MatrixBase<Derived>& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0 || sigma.rows() % 2 != 0)
    throw DomainError("covariance matrix must be square with even dimension");
}

template <typename Derived>
void check_symmetric(const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  const Scalar scale = std::max(Scalar(1), sigma.cwiseAbs().maxCoeff());
  const Scalar asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= Scalar(1e-12) * scale)) throw DomainError("covariance matrix is not symmetric");
}

}  // namespace detail

/// Keeps the listed modes (in the listed order). Gaussian partial trace.
template <typename Scalar>
GaussianState<Scalar> reduce(const GaussianState<Scalar>& state, std::span<const Index> modes) {
  detail::check_mode_subset(modes, state.mode_count());
  const auto idx = detail::quadrature_indices(modes);
  GaussianState<Scalar> out;
  out.sigma = state.sigma(idx, idx);
  for (Index m : modes)
    out.modes.push_back(static_cast<std::size_t>(m) < state.modes.size()
                            ? state.modes[static_cast<std::size_t>(m)]
                            : Mode::mirror);
  return out;
}

template <typename Scalar>
GaussianState<Scalar> reduce(const GaussianState<Scalar>& state,
                             std::initializer_list<Index> modes) {
  return reduce(state, std::span<const Index>(modes.begin(), modes.size()));
}

template <typename Scalar>
struct PhysicalityReport {
  bool physical = false;
  Scalar min_eigenvalue = Scalar(0);
};

/// Uncertainty-principle check: smallest eigenvalue of the Hermitian matrix
/// σ + iΩ/2 must be ≥ −tolerance.
template <typename Derived>
PhysicalityReport<typename Derived::Scalar> physicality(
    const Eigen::MatrixBase<Derived>& sigma,
    typename Derived::Scalar tolerance = typename Derived::Scalar(1e-10)) {
  using Scalar = typename Derived::Scalar;
  using Complex = std::complex<Scalar>;
  detail::check_covariance_shape(sigma);
  const Index n = sigma.rows() / 2;
  DenseMatrix<Complex> h = sigma.template cast<Complex>();
  h += Complex(0, Scalar(0.5)) * symplectic_form<Scalar>(n).template cast<Complex>();
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Complex>> eig(h, Eigen::EigenvaluesOnly);
  const Scalar min_ev = eig.eigenvalues().minCoeff();
  return {min_ev >= -tolerance, min_ev};
}

template <typename Scalar>
PhysicalityReport<Scalar> physicality(const GaussianState<Scalar>& state,
                                      Scalar tolerance = Scalar(1e-10)) {
  return physicality(state.sigma, tolerance);
}

/// Absolute values of the eigenvalues of iΩσ, one per mode, ascending.
template <typename Derived>
DenseVector<typename Derived::Scalar> symplectic_eigenvalues(
    const Eigen::MatrixBase<Derived>& sigma) {
  using Scalar = typename Derived::Scalar;
  detail::check_covariance_shape(sigma);
  detail::check_symmetric(sigma);
  const Index n = sigma.rows() / 2;
  const DenseMatrix<Scalar> m = symplectic_form<Scalar>(n) * sigma;
  Eigen::EigenSolver<DenseMatrix<Scalar>> eig(m, false);
  std::vector<Scalar> mags(static_cast<std::size_t>(2 * n));
  for (Index k = 0; k < 2 * n; ++k) mags[static_cast<std::size_t>(k)] = std::abs(eig.eigenvalues()(k));
  std::sort(mags.begin(), mags.end());
  // Eigenvalues come in ±iν pairs.
  DenseVector<Scalar> nu(n);
  for (Index k = 0; k < n; ++k)
    nu(k) = (mags[static_cast<std::size_t>(2 * k)] + mags[static_cast<std::size_t>(2 * k + 1)]) / Scalar(2);
  return nu;
}

template <typename Scalar>
DenseVector<Scalar> symplectic_eigenvalues(const GaussianState<Scalar>& state) {
  return symplectic_eigenvalues(state.sigma);
}

/// Bipartition of a state's modes, by position.
struct Partition {
  std::vector<Index> side_a;
  std::vector<Index> side_b;

  static Partition one_vs_rest(Index mode, Index mode_count) {
    Partition p;
    p.side_a = {mode};
    p.side_b = detail::complement(p.side_a, mode_count);
    return p;
  }

  void validate(Index mode_count) const {
    if (side_a.empty() || side_b.empty()) throw DomainError("partition side is empty");
    std::vector<Index> all(side_a);
    all.insert(all.end(), side_b.begin(), side_b.end());
    detail::check_mode_subset(all, mode_count);
    if (static_cast<Index>(all.size()) != mode_count)
      throw DomainError("partition does not cover every mode");
  }
};

/// PσP with P flipping the momentum of every mode in `modes`.
template <typename Scalar>
DenseMatrix<Scalar> partial_transpose(const DenseMatrix<Scalar>& sigma,
                                      std::span<const Index> modes) {
  DenseVector<Scalar> flip = DenseVector<Scalar>::Ones(sigma.rows());
  for (Index m : modes) flip(2 * m + 1) = Scalar(-1);
  return flip.asDiagonal() * sigma * flip.asDiagonal();
}

/// max(0, −ln 2ν̃₋) with ν̃₋ the smallest symplectic eigenvalue of the
/// partially transposed covariance matrix.
template <typename Scalar>
Scalar log_negativity(const GaussianState<Scalar>& state, const Partition& partition) {
  partition.validate(state.mode_count());
  if (!physicality(state).physical) throw DomainError("log_negativity: unphysical state");
  const DenseMatrix<Scalar> pt = partial_transpose(state.sigma, std::span<const Index>(partition.side_a));
  const Scalar nu_min = symplectic_eigenvalues(pt).minCoeff();
  return std::max(Scalar(0), -std::log(Scalar(2) * nu_min));
}

/// E_ij: trace out everything but modes i and j, then take the log-negativity.
template <typename Scalar>
Scalar pairwise_log_negativity(const GaussianState<Scalar>& state, Index i, Index j) {
  const auto pair = reduce(state, {i, j});
  return log_negativity(pair, Partition{{0}, {1}});
}

/// E_{i|jk} on a three-mode state.
template <typename Scalar>
Scalar one_vs_two_log_negativity(const GaussianState<Scalar>& state, Index i) {
  if (state.mode_count() != 3) throw DomainError("one-vs-two negativity needs three modes");
  return log_negativity(state, Partition::one_vs_rest(i, 3));
}

/// Geometric mean (E_{1|23} E_{2|13} E_{3|12})^{1/3}.
template <typename Scalar>
Scalar tripartite_negativity(const GaussianState<Scalar>& state) {
  if (state.mode_count() != 3) throw DomainError("tripartite negativity needs three modes");
  Scalar product(1);
  for (Index i = 0; i < 3; ++i) product *= one_vs_two_log_negativity(state, i);
  if (product <= Scalar(0)) return Scalar(0);
  return std::cbrt(product);
}

/// Zero-mean Gaussian Wigner function with the factorization cached.
template <typename Scalar>
class GaussianWigner {
 public:
  explicit GaussianWigner(const DenseMatrix<Scalar>& sigma) : llt_(sigma) {
    detail::check_covariance_shape(sigma);
    const auto& diag = llt_.matrixLLT().diagonal();
    if (llt_.info() != Eigen::Success || !(diag.minCoeff() > Scalar(0)) ||
        diag.minCoeff() <= std::numeric_limits<Scalar>::epsilon() * diag.maxCoeff())
      throw DomainError("Wigner function of a singular covariance matrix");
    const Index n = sigma.rows() / 2;
    // √det σ = Π L_kk
    const Scalar log_sqrt_det = diag.array().log().sum();
    peak_ = std::exp(-log_sqrt_det - Scalar(n) * std::log(std::numbers::pi_v<Scalar>));
  }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& point) const {
    if (point.size() != llt_.rows()) throw DomainError("phase-space point has wrong dimension");
    const DenseVector<Scalar> y = llt_.matrixL().solve(point.template cast<Scalar>());
    return peak_ * std::exp(-y.squaredNorm());
  }

  /// Value at the origin, 1/(πⁿ √det σ).
  Scalar peak() const { return peak_; }

 private:
  Eigen::LLT<DenseMatrix<Scalar>> llt_;
  Scalar peak_{};
};

template <typename Scalar, typename Derived>
Scalar wigner(const GaussianState<Scalar>& state, const Eigen::MatrixBase<Derived>& point) {
  return GaussianWigner<Scalar>(state.sigma)(point);
}

template <typename Scalar>
struct ProjectionResult {
  Scalar weight{};  // probability that the measured modes are found in vacuum
  GaussianState<Scalar> conditional;
};

/// Projects the measured modes onto |0⟩⟨0|. With M = σ_B + I/2 the vacuum
/// probability is 1/√det M and the unmeasured modes are left with the Schur
/// complement σ_A − σ_AB M⁻¹ σ_ABᵀ.
template <typename Scalar>
ProjectionResult<Scalar> vacuum_project(const GaussianState<Scalar>& state,
                                        std::span<const Index> measured) {
  const Index n = state.mode_count();
  detail::check_mode_subset(measured, n);
  if (static_cast<Index>(measured.size()) >= n)
    throw DomainError("vacuum_project needs at least one unmeasured mode");
  if (!physicality(state).physical) throw DomainError("vacuum_project: unphysical state");

  const auto kept = detail::complement(measured, n);
  const auto ia = detail::quadrature_indices(kept);
  const auto ib = detail::quadrature_indices(measured);

  const DenseMatrix<Scalar> sa = state.sigma(ia, ia);
  const DenseMatrix<Scalar> sab = state.sigma(ia, ib);
  DenseMatrix<Scalar> m = state.sigma(ib, ib);
  m.diagonal().array() += Scalar(0.5);

  Eigen::LLT<DenseMatrix<Scalar>> llt(m);
  // Physical σ_B is positive definite, hence so is σ_B + I/2.
  if (llt.info() != Eigen::Success) throw NumericalError("vacuum_project: σ_B + I/2 not positive definite");

  ProjectionResult<Scalar> out;
  out.weight = std::exp(-llt.matrixLLT().diagonal().array().log().sum());
  out.conditional.sigma = sa - sab * llt.solve(sab.transpose());
  out.conditional.sigma = (out.conditional.sigma + out.conditional.sigma.transpose()) / Scalar(2);
  for (Index k : kept)
    out.conditional.modes.push_back(static_cast<std::size_t>(k) < state.modes.size()
                                        ? state.modes[static_cast<std::size_t>(k)]
                                        : Mode::mirror);
  return out;
}

template <typename Scalar>
ProjectionResult<Scalar> vacuum_project(const GaussianState<Scalar>& state,
                                        std::initializer_list<Index> measured) {
  return vacuum_project(state, std::span<const Index>(measured.begin(), measured.size()));
}

// Standard states.

template <typename Scalar>
GaussianState<Scalar> thermal_state(Scalar nbar, Mode mode = Mode::mirror) {
  return {DenseMatrix<Scalar>::Identity(2, 2) * (nbar + Scalar(0.5)), {mode}};
}

template <typename Scalar>
GaussianState<Scalar> vacuum_state(Index mode_count) {
  GaussianState<Scalar> s{DenseMatrix<Scalar>::Identity(2 * mode_count, 2 * mode_count) / Scalar(2), {}};
  for (Index k = 0; k < mode_count; ++k) s.modes.push_back(static_cast<Mode>(std::min<Index>(k, 2)));
  return s;
}

/// S(r)|00⟩ with blocks diag(cosh 2r)/2 and off-diagonal diag(sinh 2r, −sinh 2r)/2.
template <typename Scalar>
GaussianState<Scalar> two_mode_squeezed_vacuum(Scalar r) {
  GaussianState<Scalar> s{DenseMatrix<Scalar>::Zero(4, 4), {Mode::mirror, Mode::cavity}};
  const Scalar c = std::cosh(Scalar(2) * r) / Scalar(2);
  const Scalar sh = std::sinh(Scalar(2) * r) / Scalar(2);
  s.sigma.diagonal().setConstant(c);
  s.sigma(0, 2) = s.sigma(2, 0) = sh;
  s.sigma(1, 3) = s.sigma(3, 1) = -sh;
  return s;
}

template <typename Scalar>
GaussianState<Scalar> direct_sum(const GaussianState<Scalar>& a, const GaussianState<Scalar>& b) {
  GaussianState<Scalar> s;
  const Index na = a.sigma.rows(), nb = b.sigma.rows();
  s.sigma = DenseMatrix<Scalar>::Zero(na + nb, na + nb);
  s.sigma.topLeftCorner(na, na) = a.sigma;
  s.sigma.bottomRightCorner(nb, nb) = b.sigma;
  s.modes = a.modes;
  s.modes.insert(s.modes.end(), b.modes.begin(), b.modes.end());
  return s;
}

/// Block-diagonal product of per-mode phase-space rotations.
template <typename Scalar>
DenseMatrix<Scalar> local_rotation(std::span<const Scalar> angles) {
  const Index n = static_cast<Index>(angles.size());
  DenseMatrix<Scalar> r = DenseMatrix<Scalar>::Zero(2 * n, 2 * n);
  for (Index k = 0; k < n; ++k) {
    const Scalar c = std::cos(angles[static_cast<std::size_t>(k)]);
    const Scalar s = std::sin(angles[static_cast<std::size_t>(k)]);
    r.template block<2, 2>(2 * k, 2 * k) << c, -s, s, c;
  }
  return r;
}

}  // namespace optomech
