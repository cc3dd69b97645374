#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "spinwire/dynamics.hpp"
#include "spinwire/ed_oracle.hpp"
#include "test_support.hpp"

using namespace spinwire;
using cd = std::complex<double>;

namespace {

double canonical_defect(const Propagator& p) {
  const auto n = p.u.rows();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const double a = (p.u * p.u.adjoint() + p.v * p.v.adjoint() - id).cwiseAbs().maxCoeff();
  const double b = (p.u * p.v.transpose() + p.v * p.u.transpose()).cwiseAbs().maxCoeff();
  return std::max(a, b);
}

double entry_diff(const BoundaryEntries& a, const BoundaryEntries& b) {
  return std::max({std::abs(a.u_n1 - b.u_n1), std::abs(a.v_n1 - b.v_n1), std::abs(a.u_nm1_2 - b.u_nm1_2),
                   std::abs(a.u_nm1_1 - b.u_nm1_1), std::abs(a.u_n2 - b.u_n2)});
}

}  // namespace

TEST_CASE("propagator is canonical and starts at the identity") {
  std::mt19937_64 rng(21);
  for (bool aniso : {false, true}) {
    const auto sd = diagonalize(build_hopping(spinwire::testing::random_mirror_chain(9, rng, aniso, true)));
    const auto p0 = propagator(sd, 0.0);
    CHECK((p0.u - Eigen::MatrixXcd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(p0.v.cwiseAbs().maxCoeff() < 1e-13);
    for (double t : {0.4, 5.0, 37.0}) CHECK(canonical_defect(propagator(sd, t)) < 1e-12);
  }
}

TEST_CASE("XX end-to-end amplitude matches exact diagonalization") {
  // Frozen from the 2^6 spin-space evolution.
  const auto spec = xx_minimal(6, 0.6);
  const cd ed_amp(1.7347234759768071e-17, -0.047901405781090929);
  const auto e = boundary_entries(boundary_modes(spec), 3.7);
  CHECK(std::abs(e.u_n1 - ed_amp) < 1e-12);
  CHECK(std::abs(e.v_n1) == 0.0);

  // With fields the spin amplitude carries the vacuum phase exp(i sum(h) t / 2), removed here.
  const auto f = make_chain({0.7, 1.0, 0.9, 1.0, 0.7}, {0, 0, 0, 0, 0}, {0.3, -0.2, 0.1, 0.1, -0.2, 0.3});
  const auto bm = boundary_modes(f);
  for (double t : {0.5, 2.0, 9.3}) {
    const cd amp = ed::single_excitation_amplitude(f, t) * std::polar(1.0, -0.2 * t);
    CHECK(std::abs(amp - boundary_entries(bm, t).u_n1) < 1e-12);
  }
}

TEST_CASE("boundary entries agree with the full propagator") {
  std::mt19937_64 rng(23);
  for (bool aniso : {false, true}) {
    for (int n : {2, 3, 4, 8, 15}) {
      const auto spec = spinwire::testing::random_mirror_chain(n, rng, aniso, true);
      const auto sd = diagonalize(build_hopping(spec));
      const auto bm_full = boundary_modes(sd);
      const auto bm_fast = boundary_modes(spec);
      for (double t : {0.0, 1.3, 7.7}) {
        const auto ref = boundary_entries(propagator(sd, t));
        CHECK(entry_diff(ref, boundary_entries(bm_full, t)) < 1e-12);
        CHECK(entry_diff(ref, boundary_entries(bm_fast, t)) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(xx_boundary_modes(xy_minimal(5, 0.5, 0.5, 0.3, 0.2)), std::invalid_argument);
}

TEST_CASE("uniform and pointwise series agree") {
  const auto bm = boundary_modes(xx_minimal(40, 0.55));
  std::vector<double> grid;
  for (int i = 0; i < 300; ++i) grid.push_back(10.0 + 0.1 * i);
  const auto fast = boundary_series(bm, grid);
  const auto slow = boundary_series_uniform(bm, 10.0, 0.1, 300);
  REQUIRE(fast.size() == 300);
  for (std::size_t i = 0; i < grid.size(); i += 37) {
    const auto ref = boundary_entries(bm, grid[i]);
    CHECK(entry_diff(ref, fast[i]) < 1e-12);
    CHECK(entry_diff(ref, slow[i]) < 1e-12);
    CHECK(fast[i].t == grid[i]);
  }
  std::vector<double> ragged{0.0, 0.3, 1.1, 1.2};
  const auto r = boundary_series(bm, ragged);
  for (std::size_t i = 0; i < ragged.size(); ++i) CHECK(entry_diff(r[i], boundary_entries(bm, ragged[i])) < 1e-13);
}

TEST_CASE("uniform grid detection") {
  double t0 = 0, dt = 0;
  const std::vector<double> good{1.0, 1.5, 2.0, 2.5};
  CHECK(uniform_grid(good, t0, dt));
  CHECK(t0 == 1.0);
  CHECK(dt == 0.5);
  const std::vector<double> bad{1.0, 1.5, 2.1};
  CHECK_FALSE(uniform_grid(bad, t0, dt));
  const std::vector<double> single{1.0};
  CHECK_FALSE(uniform_grid(single, t0, dt));
}

TEST_CASE("amplitude time series") {
  const auto sd = diagonalize(build_hopping(xx_minimal(8, 0.5)));
  const std::vector<double> zero{0.0};
  const auto at0 = amplitude_timeseries(sd, zero);
  CHECK(at0[0].u1 < 1e-15);
  CHECK(at0[0].v1 == 0.0);
  const std::vector<double> descending{1.0, 0.5};
  CHECK_THROWS_AS(amplitude_timeseries(sd, descending), std::invalid_argument);
  const std::vector<double> nan{0.0, NAN};
  CHECK_THROWS_AS(amplitude_timeseries(sd, nan), std::invalid_argument);

  // Two sites: |U_21(t)| = |sin(t/2)|, so u1 = 1 at t = pi.
  const auto two = diagonalize(build_hopping(make_chain({1.0}, {0.0}, {0.0, 0.0})));
  CHECK(boundary_amplitudes(two, std::numbers::pi).u1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(boundary_amplitudes(two, 1.0).u1 == doctest::Approx(std::sin(0.5)).epsilon(1e-14));
}

TEST_CASE("site field conserves the excitation for XX chains") {
  const auto sd = diagonalize(build_hopping(xx_minimal(10, 0.7)));
  const std::vector<double> grid{0.0, 2.0, 4.5};
  const auto field = site_amplitude_field(sd, 1, grid);
  CHECK(field.u_abs(0, 0) == doctest::Approx(1.0));
  for (int c = 0; c < 3; ++c) CHECK(field.u_abs.col(c).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(field.v_abs.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(site_amplitude_field(sd, 11, grid), std::invalid_argument);

  // With pairing, |U|^2 + |V|^2 summed over sites stays one.
  const auto xy = diagonalize(build_hopping(xy_minimal(7, 0.6, 0.9, 0.5, 1.2)));
  const auto f2 = site_amplitude_field(xy, 3, grid);
  for (int c = 0; c < 3; ++c)
    CHECK(f2.u_abs.col(c).squaredNorm() + f2.v_abs.col(c).squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perfect mirror of the engineered chain") {
  const auto sd = diagonalize(build_hopping(pst_chain(16)));
  const auto prop = propagator(sd, std::numbers::pi);
  const double alpha = mirror_phase(prop);
  CHECK(mirror_deviation(prop, alpha) < 1e-10);
  CHECK(mirror_deviation(propagator(sd, 1.0), alpha) > 0.1);
}

TEST_CASE("wave-packet density is normalised") {
  const auto md = diagonalize_mirror(build_hopping(xx_minimal(30, 0.4)));
  const auto rho = wavepacket_density(md);
  CHECK(rho.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rho.minCoeff() >= 0.0);
}
