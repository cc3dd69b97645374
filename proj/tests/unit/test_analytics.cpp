#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinwire/analytics.hpp"
#include "spinwire/dynamics.hpp"
#include "spinwire/tridiag.hpp"

using namespace spinwire;
using namespace spinwire::analytics;
using std::numbers::pi;

namespace {

TridiagEigen xx_eigen(const ChainSpec& spec) {
  std::vector<double> off(spec.j.size());
  for (std::size_t i = 0; i < off.size(); ++i) off[i] = 0.5 * spec.j[i];
  return eig_sym_tridiag(spec.h, off);
}

}  // namespace

TEST_CASE("uniform limit of the boundary closed forms") {
  CHECK(xx_delta(1.0) == 1.0);
  CHECK(xx_delta(0.5) == doctest::Approx(0.25 / 1.75));
  CHECK_THROWS_AS(xx_delta(0.0), std::invalid_argument);
  CHECK_THROWS_AS(xx_delta(1.2), std::invalid_argument);
  for (double q : {0.2, 1.0, 2.5}) {
    CHECK(std::abs(xx_phase_shift(q, 1.0)) < 1e-15);
    CHECK(std::abs(xx_phase_shift_derivative(q, 1.0)) < 1e-15);
  }
  const int n = 15;
  const auto q = xx_quasimomenta(n, 1.0);
  const auto rho = xx_density(n, 1.0);
  for (int k = 1; k <= n; ++k) {
    CHECK(q[k - 1] == doctest::Approx(pi * k / (n + 1)).epsilon(1e-14));
    CHECK(rho[k - 1] == doctest::Approx(2.0 / (n + 1) * std::pow(std::sin(q[k - 1]), 2)).epsilon(1e-12));
  }
  CHECK(xx_arrival_time(n, 1.0) == n + 1);
}

TEST_CASE("phase-shift derivative matches finite differences") {
  const double delta = xx_delta(0.4), h = 1e-6;
  for (double q : {0.3, 1.2, 1.9, 2.8}) {
    const double fd = (xx_phase_shift(q + h, delta) - xx_phase_shift(q - h, delta)) / (2 * h);
    CHECK(xx_phase_shift_derivative(q, delta) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("quasi-momenta and density reproduce the eigenproblem") {
  for (double j1 : {0.3, 0.5, 0.9}) {
    const int n = 60;
    const auto a = xx_analytics(n, j1);
    const auto eig = xx_eigen(xx_minimal(n, j1));
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const int idx = n - 1 - k;  // cos q descends with k
      CHECK(std::abs(std::cos(a.q[k]) - eig.values(idx)) < 1e-12);
      CHECK(std::abs(a.density[k] - eig.vectors(0, idx) * eig.vectors(0, idx)) < 1e-12);
      sum += a.density[k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::is_sorted(a.q.begin(), a.q.end()));
    CHECK(a.arrival_time > n + 1);
  }
  CHECK_THROWS_AS(xx_quasimomenta(0, 0.5), std::invalid_argument);
}

TEST_CASE("second-site estimate is exact without fields") {
  const double b[] = {0.55, 0.82};
  const auto bm = boundary_modes(xx_multi_param(20, b));
  for (double t : {10.0, 26.5, 40.0})
    CHECK(xx_u2_estimate(20, 0.55, 0.82, t) == doctest::Approx(std::abs(boundary_entries(bm, t).u_nm1_2)).epsilon(1e-10));
}

TEST_CASE("XY dispersion") {
  CHECK(xy_dispersion(0.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(xy_dispersion(pi / 2, 1.0, 0.0) == doctest::Approx(1.0));
  // gamma = 1, h = 0: flat band.
  for (double k : {0.1, 1.0, 2.0}) CHECK(xy_dispersion(k, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(xy_dispersion(0.0, 1.0, 1.5) == doctest::Approx(0.5));
}

TEST_CASE("Ising wave-packet density") {
  CHECK_THROWS_AS(ising_auxiliary(0.5, 1.0, 0.0), std::invalid_argument);
  const double j1 = 0.5, h = 1.5, h1 = ising_optimal_field(j1, h);
  CHECK(h1 == doctest::Approx(std::sqrt(1.25)));
  const auto peak = ising_peak(j1, h1, h);
  // The density peaks at k0.
  const double at = ising_density(peak.k0, j1, h1, h);
  CHECK(at > ising_density(peak.k0 + 0.05, j1, h1, h));
  CHECK(at > ising_density(peak.k0 - 0.05, j1, h1, h));
  CHECK(peak.width > 0.0);
  CHECK_THROWS_AS(ising_peak(0.5, 3.0, 1.5), std::domain_error);
  CHECK(ising_optimal_field(0.6, 0.5) == doctest::Approx(std::sqrt(0.64 * 0.75)));
  CHECK_THROWS_AS(ising_optimal_field(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(ising_optimal_width(0.5, -1.0), std::domain_error);
  CHECK(ising_optimal_width(0.5, 2.0) == doctest::Approx(2.0 / std::sqrt(3.0) * 0.25 / 1.75));
}

TEST_CASE("group velocities") {
  CHECK(ising_group_velocity(1.5) == 1.0);
  CHECK(ising_group_velocity(0.5) == 0.5);
  CHECK(ising_group_velocity(-0.3) == 0.3);

  const auto xx = numerical_group_velocity(diagonalize_mirror(build_hopping(xx_minimal(80, 1.0))));
  CHECK(*std::max_element(xx.velocity.begin(), xx.velocity.end()) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(xx.q.size() == 80);

  // Ising: the band maximum slope follows min(|h|, 1).
  for (double h : {0.5, 1.5}) {
    const auto gv = numerical_group_velocity(diagonalize_mirror(build_hopping(xy_minimal(80, 1.0, h, 1.0, h))));
    CHECK(*std::max_element(gv.velocity.begin(), gv.velocity.end()) ==
          doctest::Approx(ising_group_velocity(h)).epsilon(2e-2));
  }
  const auto flat = numerical_group_velocity(diagonalize_mirror(build_hopping(xy_minimal(40, 1.0, 0.0, 1.0, 0.0))));
  CHECK(*std::max_element(flat.velocity.begin(), flat.velocity.end()) < 1e-3);

  const std::vector<double> band{0.0, 1.0, 2.0};
  const auto lin = numerical_group_velocity(band, 3);
  CHECK(lin.velocity[1] == doctest::Approx(4.0 / pi));
  CHECK_THROWS_AS(numerical_group_velocity(band, 2), std::invalid_argument);
}
