#include "spinwire/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinwire {

namespace {

constexpr double kDetZero = 1e-14;
constexpr double kPairingZero = 1e-12;

void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0 + 1e-9))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

FidelityReport optimal_average_fidelity(const Eigen::Matrix3d& d, double t) {
  if (!d.allFinite()) throw std::invalid_argument("channel matrix must be finite");
  const Eigen::Vector3d s = Eigen::JacobiSVD<Eigen::Matrix3d>(d).singularValues();
  const double det = d.determinant();
  FidelityReport r;
  r.singular = {s(0), s(1), s(2)};
  r.det_sign = std::abs(det) < kDetZero ? 0 : (det > 0 ? 1 : -1);
  r.fidelity = 0.5 + (s(0) + s(1) + r.det_sign * s(2)) / 6.0;
  r.t = t;
  return r;
}

double quasifree_fidelity(double u1, double v1, double p) {
  require_unit(u1, "u1");
  require_unit(v1, "v1");
  require_unit(p, "p");
  return 0.5 + std::abs(u1 * u1 - v1 * v1) / 6.0 + p * std::max(u1, v1) / 3.0;
}

double thermal_parity(std::span<const double> energies, double beta) {
  if (std::isnan(beta) || beta < 0) throw std::invalid_argument("beta must be non-negative");
  double p = 1.0;
  for (double e : energies) {
    if (!(e >= 0.0)) throw std::invalid_argument("mode energies must be non-negative");
    if (e == 0.0) return 0.0;
    p *= std::isinf(beta) ? 1.0 : std::tanh(0.5 * beta * e);
  }
  return p;
}

double bus_thermal_parity(const ChainSpec& spec, double beta) {
  const SpectralData bus = diagonalize(build_hopping(interior_chain(spec)));
  return thermal_parity(std::span<const double>(bus.omega.data(), bus.omega.size()), beta);
}

FidelityReport direct_channel_fidelity(const BoundaryEntries& e, double p) {
  require_unit(p, "p");
  const double u1 = std::min(1.0, std::abs(e.u_n1));
  const double v1 = std::min(1.0, std::abs(e.v_n1));
  // Singular values of the direct channel's D: p(u1 + v1), p|u1 - v1| in the
  // transverse plane and |u1^2 - v1^2| along z; its determinant is never negative.
  const double z = std::abs(u1 * u1 - v1 * v1);
  std::array<double, 3> s{p * (u1 + v1), p * std::abs(u1 - v1), z};
  std::sort(s.begin(), s.end(), std::greater<>());
  FidelityReport r;
  r.singular = s;
  r.det_sign = s[0] * s[1] * s[2] < kDetZero ? 0 : 1;
  r.fidelity = 0.5 + (s[0] + s[1] + r.det_sign * s[2]) / 6.0;
  r.t = e.t;
  return r;
}

FidelityReport direct_channel_fidelity(const SpectralData& sd, double t, double p) {
  return direct_channel_fidelity(boundary_entries(boundary_modes(sd), t), p);
}

ChannelMatrix encoded_channel(const BoundaryEntries& e, int n) {
  if (n < 4) throw std::invalid_argument("encoding needs N >= 4");
  if (std::abs(e.v_n1) > kPairingZero)
    throw std::invalid_argument("closed-form encoded channel needs a particle-conserving chain");
  const std::complex<double> a = e.u_n1, b = e.u_nm1_2, c = e.u_nm1_1, f = e.u_n2;
  const std::complex<double> w = c * f - a * b;
  const std::complex<double> plus = a * std::conj(c) + b * std::conj(f);
  const std::complex<double> minus = b * std::conj(f) - a * std::conj(c);
  ChannelMatrix ch;
  ch.t = e.t;
  ch.d_matrix << w.real(), w.imag(), plus.real(),
                 -w.imag(), w.real(), minus.imag(),
                 0.0, 0.0, std::norm(a) + std::norm(f);
  return ch;
}

ChannelMatrix encoded_channel(const Propagator& prop) {
  if (prop.v.size() > 0 && prop.v.cwiseAbs().maxCoeff() > kPairingZero)
    throw std::invalid_argument("closed-form encoded channel needs a particle-conserving chain");
  return encoded_channel(boundary_entries(prop), static_cast<int>(prop.u.rows()));
}

double encoded_fidelity_approx(double u1, double u2) { return 0.5 + u1 * (u1 + 2.0 * u2) / 6.0; }

}  // namespace spinwire
