#include "optomech/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optomech/constants.hpp"
#include "optomech/error.hpp"

namespace optomech {

GaussianStated TwoModeSqueezedThermal::covariance() const {
  const double ch2 = std::cosh(r) * std::cosh(r), sh2 = std::sinh(r) * std::sinh(r);
  const double a = (nbar_a + 0.5) * ch2 + (nbar_b + 0.5) * sh2;
  const double b = (nbar_b + 0.5) * ch2 + (nbar_a + 0.5) * sh2;
  const double c = (nbar_a + nbar_b + 1.0) * std::sinh(r) * std::cosh(r);
  Eigen::MatrixXd s(4, 4);
  s << a, 0, c, 0,
       0, a, 0, -c,
       c, 0, b, 0,
       0, -c, 0, b;
  return {s, {Mode::mirror, Mode::cavity}};
}

TwoModeSqueezedThermal TwoModeSqueezedThermal::from_covariance(const GaussianStated& state) {
  const auto& s = state.sigma;
  if (s.rows() != 4 || s.cols() != 4) throw DomainError("Fock oracle needs a two-mode state");
  const double a = s(0, 0), b = s(2, 2), c = s(0, 2);
  const double scale = s.cwiseAbs().maxCoeff();
  Eigen::MatrixXd expected(4, 4);
  expected << a, 0, c, 0, 0, a, 0, -c, c, 0, b, 0, 0, -c, 0, b;
  if ((s - expected).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw DomainError("state is not a two-mode squeezed thermal state in standard form");
  if (!(2.0 * std::abs(c) < a + b)) throw DomainError("covariance is not positive definite");

  TwoModeSqueezedThermal out;
  out.r = 0.5 * std::atanh(2.0 * c / (a + b));
  const double sum = (a + b) / std::cosh(2.0 * out.r) - 1.0;  // n̄_a + n̄_b
  out.nbar_a = 0.5 * (sum + (a - b));
  out.nbar_b = 0.5 * (sum - (a - b));
  if (out.nbar_a < -1e-9 || out.nbar_b < -1e-9) throw DomainError("state is below the vacuum");
  out.nbar_a = std::max(out.nbar_a, 0.0);
  out.nbar_b = std::max(out.nbar_b, 0.0);
  return out;
}

namespace {

using Real = long double;

struct LogFactorials {
  std::vector<Real> table;
  explicit LogFactorials(int n) : table(static_cast<std::size_t>(n) + 1, 0.0L) {
    for (int k = 1; k <= n; ++k) table[k] = table[k - 1] + std::log(static_cast<Real>(k));
  }
  Real operator()(int k) const { return table[static_cast<std::size_t>(k)]; }
};

// ⟨m,n|S(r)|k,l⟩ from S = e^{t a†b†} (cosh r)^{−(a†a+b†b+1)} e^{−t ab}, t = tanh r.
Real squeeze_element(int m, int n, int k, int l, Real t, Real log_c, const LogFactorials& lf) {
  if (m - n != k - l) return 0.0L;
  const Real log_t = t == 0 ? 0.0L : std::log(std::abs(t));
  const Real base = 0.5L * (lf(k) + lf(l) + lf(m) + lf(n));
  Real sum = 0.0L;
  for (int j = std::max(0, k - m); j <= std::min(k, l); ++j) {
    const int i = m - k + j;
    if (t == 0 && i + j > 0) continue;
    const Real mag = (i + j) * log_t - lf(j) - lf(i) + base - lf(k - j) - lf(l - j) -
                     (k + l - 2 * j + 1) * log_c;
    Real term = std::exp(mag);
    if (j % 2) term = -term;
    if (t < 0 && (i + j) % 2) term = -term;
    sum += term;
  }
  return sum;
}

Real thermal_probability(Real nbar, int k) {
  if (nbar == 0) return k == 0 ? 1.0L : 0.0L;
  return std::exp(k * std::log(nbar / (nbar + 1)) - std::log1p(nbar));
}

}  // namespace

FockConditionedMirror fock_oracle(const TwoModeSqueezedThermal& state, int cutoff) {
  if (cutoff < 20) throw DomainError("Fock cutoff must be at least 20");
  if (!(state.nbar_a >= 0) || !(state.nbar_b >= 0) || !std::isfinite(state.r))
    throw DomainError("invalid two-mode squeezed thermal parameters");

  // Thermal weights below ~1e-17 are dropped.
  auto extent = [](double nbar) {
    return nbar == 0 ? 0 : static_cast<int>(std::ceil(40.0 / std::log((nbar + 1) / nbar)));
  };
  const int kmax = cutoff + std::max(extent(state.nbar_a), extent(state.nbar_b)) + 1;
  const LogFactorials lf(2 * kmax + 2);
  const Real t = std::tanh(static_cast<Real>(state.r));
  const Real log_c = std::log(std::cosh(static_cast<Real>(state.r)));

  std::vector<Real> pa(static_cast<std::size_t>(kmax) + 1), pb(pa.size());
  for (int k = 0; k <= kmax; ++k) {
    pa[k] = thermal_probability(state.nbar_a, k);
    pb[k] = thermal_probability(state.nbar_b, k);
  }

  // joint(m, n) = Σ_k p_a(k) p_b(l) |⟨m,n|S|k,l⟩|², l = k − m + n.
  std::vector<Real> joint(static_cast<std::size_t>(cutoff * cutoff), 0.0L);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      Real acc = 0.0L;
      for (int k = std::max(0, m - n); k <= kmax; ++k) {
        const int l = k - m + n;
        if (l > kmax) break;
        const Real w = pa[k] * pb[l];
        if (w == 0) continue;
        const Real s = squeeze_element(m, n, k, l, t, log_c, lf);
        acc += w * s * s;
      }
      joint[static_cast<std::size_t>(m * cutoff + n)] = acc;
    }

  Real total = 0.0L, no_click = 0.0L;
  std::vector<Real> clicked(static_cast<std::size_t>(cutoff), 0.0L);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      const Real p = joint[static_cast<std::size_t>(m * cutoff + n)];
      total += p;
      if (n == 0)
        no_click += p;
      else
        clicked[m] += p;
    }

  FockConditionedMirror out;
  out.click_probability = static_cast<double>(1.0L - no_click);
  out.truncated_mass = static_cast<double>(std::max(0.0L, 1.0L - total));
  if (!(out.click_probability > 0))
    throw DegenerateConditioningError("click probability vanishes in the Fock basis");
  out.populations.resize(static_cast<std::size_t>(cutoff));
  for (int m = 0; m < cutoff; ++m)
    out.populations[m] = static_cast<double>(clicked[m] / (1.0L - no_click));
  return out;
}

FockConditionedMirror fock_oracle(const GaussianStated& two_mode, int cutoff) {
  return fock_oracle(TwoModeSqueezedThermal::from_covariance(two_mode), cutoff);
}

double FockConditionedMirror::operator()(double q, double p) const {
  const double x = 4.0 * (q * q + p * p);
  const double envelope = (2.0 / constants::pi) * std::exp(-0.5 * x);
  double l_prev = 1.0, l = 1.0 - x;  // Laguerre L₀, L₁
  double w = 0.0;
  for (std::size_t n = 0; n < populations.size(); ++n) {
    const double ln = n == 0 ? 1.0 : l;
    w += populations[n] * (n % 2 ? -ln : ln);
    if (n >= 1) {
      const double k = static_cast<double>(n);
      const double next = ((2 * k + 1 - x) * l - k * l_prev) / (k + 1);
      l_prev = l;
      l = next;
    }
  }
  return envelope * w;
}

void FockConditionedMirror::require_accuracy(double tolerance) const {
  const double bound = truncated_mass / click_probability;
  if (bound > tolerance)
    throw TruncationError("Fock truncation loses " + std::to_string(bound) +
                          " of the conditioned probability");
}

double fock_wigner(int n, double q, double p) {
  if (n < 0) throw DomainError("Fock index must be nonnegative");
  FockConditionedMirror single;
  single.populations.assign(static_cast<std::size_t>(n) + 1, 0.0);
  single.populations.back() = 1.0;
  return single(q, p);
}

}  // namespace optomech
