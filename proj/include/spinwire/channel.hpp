#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

#include "spinwire/dynamics.hpp"

namespace spinwire {

// Affine qubit map on Bloch vectors: r_out = D r_in + d.
struct ChannelMatrix {
  Eigen::Matrix3d d_matrix = Eigen::Matrix3d::Zero();
  Eigen::Vector3d d_vector = Eigen::Vector3d::Zero();
  double t = 0.0;
};

struct FidelityReport {
  double fidelity = 0.5;
  std::array<double, 3> singular{};  // descending
  int det_sign = 0;
  double t = 0.0;
};

// Average fidelity after the best local counter-rotation:
// 1/2 + (s1 + s2 + sign(det D) s3) / 6.
FidelityReport optimal_average_fidelity(const Eigen::Matrix3d& d, double t = 0.0);

// Channel of a quasi-free chain whose bulk has parity expectation p.
double quasifree_fidelity(double u1, double v1, double p);

// prod_k tanh(beta E_k / 2); beta may be +infinity.
double thermal_parity(std::span<const double> energies, double beta);
// Parity factor of the bus (sites 2..N) of `spec` at inverse temperature beta.
double bus_thermal_parity(const ChainSpec& spec, double beta);

FidelityReport direct_channel_fidelity(const SpectralData& sd, double t, double p);
FidelityReport direct_channel_fidelity(const BoundaryEntries& e, double p);

// Two-qubit parity encoding on sites (1,2), decoding on (N-1,N). Built from the
// complex entries a = U_{N,1}, b = U_{N-1,2}, c = U_{N-1,1}, e = U_{N,2}:
//   w = c e - a b
//   D = [[Re w, Im w, Re(a c* + b e*)], [-Im w, Re w, Im(b e* - a c*)], [0, 0, |a|^2 + |e|^2]]
// For mirror-symmetric chains c = e.
// The output offset d is bulk dependent; this returns its infinite-temperature value 0.
// Valid for particle-conserving chains (V = 0); anything else is rejected.
ChannelMatrix encoded_channel(const BoundaryEntries& e, int n);
ChannelMatrix encoded_channel(const Propagator& prop);

// 1/2 + u1 (u1 + 2 u2) / 6: the encoded fidelity when U_{N-1,1} and U_{N,2} vanish.
double encoded_fidelity_approx(double u1, double u2);

}  // namespace spinwire
