#include <doctest.h>

#include <array>
#include <cmath>

#include "optomech/error.hpp"
#include "optomech/gaussian.hpp"
#include "optomech/nonlocality.hpp"

using namespace optomech;

namespace {

GaussianStated tmsv_with_vacuum(double r) {
  auto s = direct_sum(two_mode_squeezed_vacuum(r), vacuum_state<double>(1));
  s.modes = {Mode::mirror, Mode::cavity, Mode::atoms};
  return s;
}

}  // namespace

TEST_CASE("MK function at the origin") {
  const auto vac = vacuum_state<double>(3);
  MKFunction mk(vac);
  CHECK(mk.scaled_peak() == doctest::Approx(1.0));
  CHECK(mk(MKSettings{}) == doctest::Approx(2.0));
}

TEST_CASE("product states respect the local bound") {
  // For a product state each term factorizes into marginals in [0, 1] after
  // scaling, so M₃ ≤ max over a, b, c, a', b', c' of a'bc + ab'c + abc' − a'b'c'.
  // Check the optimizer against a brute-force grid of that multilinear form.
  double grid_max = -1;
  const int n = 11;
  for (int i = 0; i < n * n * n * n * n * n; ++i) {
    int k = i;
    double v[6];
    for (double& x : v) {
      x = (k % n) / double(n - 1);
      k /= n;
    }
    const auto [a, b, c, ap, bp, cp] = std::array{v[0], v[1], v[2], v[3], v[4], v[5]};
    grid_max = std::max(grid_max, ap * b * c + a * bp * c + a * b * cp - ap * bp * cp);
  }
  CHECK(grid_max == doctest::Approx(2.0));

  const auto s = direct_sum(direct_sum(thermal_state(0.3), thermal_state(0.0)), thermal_state(1.0));
  MKConfig cfg;
  cfg.starts = 16;
  const auto best = mk_maximize(s, cfg);
  CHECK(best.value <= 2.0 + 1e-9);
  CHECK(best.value >= 2.0 * MKFunction(s).scaled_peak() - 1e-12);
}

TEST_CASE("weakly squeezed states violate the bound") {
  MKConfig cfg;
  cfg.starts = 16;
  CHECK(mk_maximize(tmsv_with_vacuum(0.2), cfg).value > 2.05);
  CHECK(mk_maximize(tmsv_with_vacuum(0.5), cfg).value > 2.2);
}

TEST_CASE("result is reproducible and schedule independent") {
  const auto s = tmsv_with_vacuum(0.3);
  MKConfig cfg;
  cfg.starts = 12;
  cfg.seed = 42;
  cfg.threads = 1;
  const auto a = mk_maximize(s, cfg);
  cfg.threads = 4;
  const auto b = mk_maximize(s, cfg);
  CHECK(a.value == b.value);
  CHECK(a.settings.to_vector() == b.settings.to_vector());
  CHECK(a.value == mk_value(s, a.settings));
}

TEST_CASE("minimum is the mirror image of the maximum") {
  const auto s = tmsv_with_vacuum(0.3);
  MKConfig cfg;
  cfg.starts = 16;
  const auto lo = mk_minimize(s, cfg);
  CHECK(lo.value < 0.0);
  CHECK(lo.value == mk_value(s, lo.settings));
}

TEST_CASE("invalid states are rejected") {
  CHECK_THROWS_AS(MKFunction(vacuum_state<double>(2)), DomainError);
  GaussianStated bad{0.3 * Eigen::MatrixXd::Identity(6, 6), {}};
  CHECK_THROWS_AS(MKFunction{bad}, DomainError);
}
