#include "optomech/nonlocality.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "optomech/error.hpp"
#include "optomech/nelder_mead.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

Eigen::VectorXd MKSettings::to_vector() const {
  Eigen::VectorXd x(12);
  x << unprimed, primed;
  return x;
}

MKSettings MKSettings::from_vector(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != 12) throw DomainError("MK settings need 12 coordinates");
  MKSettings s;
  s.unprimed = x.head<6>();
  s.primed = x.tail<6>();
  return s;
}

MKFunction::MKFunction(const GaussianStated& state) {
  if (state.sigma.rows() != 6 || state.sigma.cols() != 6)
    throw DomainError("MK function needs a three-mode state");
  if (!physicality(state).physical) throw DomainError("MK function needs a physical state");
  const Matrix6d sigma = state.sigma;
  Eigen::LLT<Matrix6d> llt(sigma);
  if (llt.info() != Eigen::Success) throw DomainError("covariance is not positive definite");
  precision_ = llt.solve(Matrix6d::Identity());
  const double det = std::pow(llt.matrixL().toDenseMatrix().diagonal().prod(), 2);
  // (π³/8)·W(0) with W(0) = 1/(π³√det σ).
  scaled_peak_ = 1.0 / (8.0 * std::sqrt(det));
  marginal_sd_ = sigma.diagonal().cwiseSqrt();
}

double MKFunction::term(const Vector6d& o) const {
  return std::exp(-o.dot(precision_ * o));
}

double MKFunction::operator()(const MKSettings& s) const {
  Vector6d t1 = s.unprimed, t2 = s.unprimed, t3 = s.unprimed;
  t1.segment<2>(0) = s.primed.segment<2>(0);
  t2.segment<2>(2) = s.primed.segment<2>(2);
  t3.segment<2>(4) = s.primed.segment<2>(4);
  return scaled_peak_ * (term(t1) + term(t2) + term(t3) - term(s.primed));
}

double MKFunction::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return (*this)(MKSettings::from_vector(x));
}

double mk_value(const GaussianStated& state, const MKSettings& settings) {
  return MKFunction(state)(settings);
}

namespace {

MKResult mk_search(const GaussianStated& state, const MKConfig& config, double sign) {
  if (config.starts < 1) throw DomainError("MK search needs at least one start");
  const MKFunction mk(state);
  Eigen::VectorXd sd(12);
  sd << mk.marginal_sd(), mk.marginal_sd();

  std::vector<NelderMeadResult<double>> results(static_cast<std::size_t>(config.starts));
  parallel_for(results.size(), config.threads, [&](std::size_t k) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(12);
    if (k > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                        static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(k)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (Eigen::Index i = 0; i < 12; ++i) x0(i) = config.box_sigmas * sd(i) * u(rng);
    }
    NelderMeadOptions<double> nm{config.tolerance, config.max_evaluations};
    results[k] = nelder_mead<double>(
        [&](const Eigen::VectorXd& x) { return sign * mk(x); }, x0, 0.5 * sd, nm);
  });

  // Lowest index wins ties, so the choice is independent of scheduling.
  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k)
    if (results[k].value < results[best].value) best = k;

  auto winner = results[best];
  const NelderMeadOptions<double> nm{config.tolerance, config.max_evaluations};
  const auto objective = [&](const Eigen::VectorXd& x) { return sign * mk(x); };
  for (int round = 0; round < config.polish_rounds; ++round) {
    auto next = nelder_mead<double>(objective, winner.x, 0.1 * sd, nm);
    const double gain = winner.value - next.value;
    if (gain > 0) winner = std::move(next);
    if (!(gain > config.tolerance)) {
      winner.converged = true;
      break;
    }
  }

  MKResult out;
  out.settings = MKSettings::from_vector(winner.x);
  out.value = mk(out.settings);
  out.starts_used = config.starts;
  out.converged = winner.converged;
  return out;
}

}  // namespace

MKResult mk_maximize(const GaussianStated& state, const MKConfig& config) {
  return mk_search(state, config, -1.0);
}

MKResult mk_minimize(const GaussianStated& state, const MKConfig& config) {
  return mk_search(state, config, 1.0);
}

}  // namespace optomech
