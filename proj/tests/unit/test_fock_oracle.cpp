#include <doctest.h>

#include <cmath>

#include "optomech/constants.hpp"
#include "optomech/error.hpp"
#include "optomech/fock_oracle.hpp"
#include "optomech/nonclassicality.hpp"

using namespace optomech;

namespace {

// Three-mode embedding (mirror, cavity, atoms) with the pair on mirror and atoms.
GaussianStated embed(const GaussianStated& pair) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(6, 6) * 0.5;
  const int idx[4] = {0, 1, 4, 5};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(idx[i], idx[j]) = pair.sigma(i, j);
  return {s, {Mode::mirror, Mode::cavity, Mode::atoms}};
}

}  // namespace

TEST_CASE("Fock Wigner functions") {
  CHECK(fock_wigner(0, 0, 0) == doctest::Approx(2 / constants::pi));
  CHECK(fock_wigner(1, 0, 0) == doctest::Approx(-2 / constants::pi));
  CHECK(fock_wigner(2, 0, 0) == doctest::Approx(2 / constants::pi));
  // L₂(x) = 1 − 2x + x²/2 at x = 4(q² + p²).
  const double q = 0.3, p = 0.4, x = 4 * (q * q + p * p);
  CHECK(fock_wigner(2, q, p) ==
        doctest::Approx(2 / constants::pi * (1 - 2 * x + x * x / 2) * std::exp(-x / 2)));
}

TEST_CASE("standard form round trip") {
  const TwoModeSqueezedThermal t{0.7, 0.4, 1.3};
  const auto back = TwoModeSqueezedThermal::from_covariance(t.covariance());
  CHECK(back.r == doctest::Approx(t.r).epsilon(1e-12));
  CHECK(back.nbar_a == doctest::Approx(t.nbar_a).epsilon(1e-12));
  CHECK(back.nbar_b == doctest::Approx(t.nbar_b).epsilon(1e-12));
  GaussianStated rotated = t.covariance();
  rotated.sigma(0, 1) = rotated.sigma(1, 0) = 0.1;
  CHECK_THROWS_AS(TwoModeSqueezedThermal::from_covariance(rotated), DomainError);
}

TEST_CASE("click probability matches the Gaussian vacuum weight") {
  for (const TwoModeSqueezedThermal t : {TwoModeSqueezedThermal{0.5, 0, 0}, {1.0, 1.0, 0.5}, {0.2, 2.0, 2.0}}) {
    // Cutoff large enough that truncation sits below the comparison tolerance.
    const auto fock = fock_oracle(t, 90);
    const auto gauss = conditioned_mirror_state(embed(t.covariance()), Detection::atoms);
    CHECK(fock.click_probability == doctest::Approx(gauss.normalization).epsilon(1e-12));
  }
}

TEST_CASE("oracle agrees with the Gaussian calculus for pure squeezing") {
  const TwoModeSqueezedThermal t{0.5, 0, 0};
  const auto fock = fock_oracle(t);
  fock.require_accuracy(1e-10);
  const auto gauss = conditioned_mirror_state(embed(t.covariance()), Detection::atoms);
  double err = 0;
  for (double q = -3; q <= 3; q += 0.25)
    for (double p = -3; p <= 3; p += 0.25) err = std::max(err, std::abs(fock(q, p) - gauss(q, p)));
  CHECK(err <= 1e-12);
}

TEST_CASE("cutoff requirements") {
  CHECK_THROWS_AS(fock_oracle(TwoModeSqueezedThermal{0.5, 0, 0}, 10), DomainError);
  const auto hot = fock_oracle(TwoModeSqueezedThermal{1.0, 2.0, 2.0}, 20);
  CHECK_THROWS_AS(hot.require_accuracy(1e-6), TruncationError);
}
