#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spinwire/chain_model.hpp"
#include "spinwire/dynamics.hpp"
#include "spinwire/ed_oracle.hpp"
#include "spinwire/quadratic_diag.hpp"
#include "test_support.hpp"

using namespace spinwire;

namespace {

double canonical_defect(const SpectralData& sd) {
  const int n = sd.size();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const double a = (sd.p * sd.p.transpose() + sd.q * sd.q.transpose() - id).cwiseAbs().maxCoeff();
  const double b = (sd.p * sd.q.transpose() + sd.q * sd.p.transpose()).cwiseAbs().maxCoeff();
  return std::max(a, b);
}

}  // namespace

TEST_CASE("uniform XX chain: cos spectrum and orthogonal modes") {
  const int n = 10;
  const auto sd = diagonalize(build_hopping(make_chain(std::vector<double>(n - 1, 1.0),
                                                         std::vector<double>(n - 1, 0.0),
                                                         std::vector<double>(n, 0.0))));
  std::vector<double> ref;
  for (int k = 1; k <= n; ++k) ref.push_back(std::abs(std::cos(k * std::numbers::pi / (n + 1))));
  std::sort(ref.begin(), ref.end());
  for (int k = 0; k < n; ++k) CHECK(sd.omega(k) == doctest::Approx(ref[k]).epsilon(1e-13));
  CHECK(canonical_defect(sd) < 1e-12);
  CHECK((sd.phi * sd.phi.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single spin in a field") {
  const auto hm = build_hopping(make_chain({}, {}, {2.0}));
  const auto sd = diagonalize(hm);
  CHECK(sd.omega(0) == 2.0);
  CHECK(sd.phi(0, 0) == 1.0);
  CHECK(sd.psi(0, 0) == 1.0);
  CHECK(ground_energy(hm) == 0.0);
  // Negative field: the occupied mode is the vacuum, psi flips sign.
  const auto neg = build_hopping(make_chain({}, {}, {-2.0}));
  const auto sn = diagonalize(neg);
  CHECK(sn.omega(0) == 2.0);
  CHECK(sn.psi(0, 0) == -1.0);
  CHECK(ground_energy(neg) == -2.0);
}

TEST_CASE("general route reconstructs anisotropic chains") {
  std::mt19937_64 rng(3);
  for (int n : {2, 3, 6, 9, 24}) {
    const auto spec = spinwire::testing::random_mirror_chain(n, rng, true, true);
    const auto hm = build_hopping(spec);
    const auto sd = diagonalize(hm);
    CHECK(reconstruction_residual(sd, hm) < 1e-12);
    CHECK(canonical_defect(sd) < 1e-12);
    for (int k = 1; k < n; ++k) CHECK(sd.omega(k) >= sd.omega(k - 1));
    CHECK(sd.omega.minCoeff() >= 0.0);
  }
}

TEST_CASE("Ising chain keeps its out-of-band zero mode exact") {
  // gamma = 1, zero bulk field: A - B is nilpotent apart from the end fields.
  const auto spec = xy_minimal(8, 0.7, 0.0, 1.0, 0.0);
  const auto sd = diagonalize(build_hopping(spec));
  CHECK(sd.omega(0) == 0.0);
}

TEST_CASE("XX and general routes agree") {
  std::mt19937_64 rng(5);
  const auto spec = spinwire::testing::random_mirror_chain(12, rng, false, true);
  const auto hm = build_hopping(spec);
  const auto xx = diagonalize_xx(hm);
  // Force the dense route with a vanishing but nonzero pairing block.
  HoppingMatrices perturbed = hm;
  perturbed.b(0, 1) = -1e-300;
  perturbed.b(1, 0) = 1e-300;
  const auto svd = diagonalize(perturbed);
  CHECK((xx.omega - svd.omega).cwiseAbs().maxCoeff() < 1e-12);
  for (double t : {0.7, 3.1, 11.0}) {
    const auto a = propagator(xx, t), b = propagator(svd, t);
    CHECK((a.u - b.u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK_THROWS_AS(diagonalize_xx(build_hopping(xy_minimal(5, 0.5, 0.5, 0.3, 0.2))), std::invalid_argument);
}

TEST_CASE("mirror route") {
  SUBCASE("two-site XX example") {
    const auto md = diagonalize_mirror(build_hopping(make_chain({1.0}, {0.0}, {0.0, 0.0})));
    CHECK(md.big_omega(0) == doctest::Approx(0.5));
    CHECK(md.big_omega(1) == doctest::Approx(0.5));
    CHECK(md.sign(0) == 1);
    CHECK(md.sign(1) == 1);
    CHECK(md.number_conserving);
  }
  SUBCASE("matches the general route on random mirror chains") {
    std::mt19937_64 rng(9);
    for (bool aniso : {false, true}) {
      for (int n : {3, 4, 7, 10}) {
        const auto hm = build_hopping(spinwire::testing::random_mirror_chain(n, rng, aniso, true));
        const auto md = diagonalize_mirror(hm);
        CHECK(md.number_conserving == !aniso);
        const auto from_mirror = md.to_spectral();
        const auto direct = diagonalize(hm);
        CHECK(reconstruction_residual(from_mirror, hm) < 1e-12);
        CHECK((from_mirror.omega - direct.omega).cwiseAbs().maxCoeff() < 1e-12);
        const auto a = propagator(from_mirror, 2.3), b = propagator(direct, 2.3);
        CHECK((a.u - b.u).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((a.v - b.v).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
  SUBCASE("signs alternate along a non-degenerate band") {
    const auto md = diagonalize_mirror(build_hopping(xy_minimal(9, 0.6, 0.9, 0.5, 1.3)));
    // Order by signed energy: the reflection parity alternates with the mode index.
    std::vector<std::pair<double, int>> band;
    for (int k = 0; k < md.size(); ++k) band.emplace_back(md.omega()(k), md.sign(k));
    std::sort(band.begin(), band.end());
    for (std::size_t k = 1; k < band.size(); ++k) CHECK(band[k].second == -band[k - 1].second);
  }
  SUBCASE("rejects chains without mirror symmetry") {
    CHECK_THROWS_AS(diagonalize_mirror(build_hopping(make_chain({0.5, 1.0}, {0, 0}, {0, 0, 0}))),
                    std::invalid_argument);
  }
}

TEST_CASE("ground energy matches exact diagonalization") {
  // Spin Hamiltonian = fermionic form - Tr(A)/2.
  const auto xy = xy_minimal(6, 0.6, 0.8, 0.5, 0.4);
  const auto hm = build_hopping(xy);
  CHECK(ground_energy(hm) - 0.5 * hm.a.trace() == doctest::Approx(-2.2146297801790911).epsilon(1e-12));
  std::mt19937_64 rng(13);
  for (int n : {3, 5, 7}) {
    const auto spec = spinwire::testing::random_mirror_chain(n, rng, true, true);
    const auto h = build_hopping(spec);
    const ed::Evolver ev(spec);
    CHECK(ground_energy(h) - 0.5 * h.a.trace() == doctest::Approx(ev.energies()(0)).epsilon(1e-12));
  }
}

TEST_CASE("input validation") {
  HoppingMatrices bad{Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(diagonalize(bad), std::invalid_argument);
  HoppingMatrices asym{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)};
  asym.a(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(asym), std::invalid_argument);
  HoppingMatrices sym_b{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Ones(2, 2)};
  CHECK_THROWS_AS(diagonalize(sym_b), std::invalid_argument);
}
