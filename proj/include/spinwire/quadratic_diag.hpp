#pragma once

#include <Eigen/Dense>

#include "spinwire/chain_model.hpp"

namespace spinwire {

// Canonical transformation of the quadratic Hamiltonian: A - B = phi^T diag(omega) psi,
// mode operators b = P c + Q c^dagger with P = (phi+psi)/2, Q = (phi-psi)/2.
// Rows of phi, psi, p, q are indexed by mode, columns by site.
struct SpectralData {
  Eigen::VectorXd omega;  // ascending, non-negative
  Eigen::MatrixXd phi;
  Eigen::MatrixXd psi;
  Eigen::MatrixXd p;
  Eigen::MatrixXd q;

  [[nodiscard]] int size() const { return static_cast<int>(omega.size()); }
};

// Mirror-symmetric route: (A - B) X = W^T diag(big_omega) W.
// Modes ordered by |big_omega| ascending.
struct MirrorSpectralData {
  Eigen::MatrixXd w;
  Eigen::VectorXd big_omega;
  Eigen::VectorXi sign;
  bool number_conserving = false;  // B == 0

  [[nodiscard]] int size() const { return static_cast<int>(big_omega.size()); }
  [[nodiscard]] Eigen::VectorXd omega() const { return big_omega.cwiseAbs(); }
  // phi = W, psi = diag(s) W X.
  [[nodiscard]] SpectralData to_spectral() const;
};

// Singular values below this are the exact zero (out-of-band) mode.
inline constexpr double kZeroMode = 1e-12;

SpectralData diagonalize(const HoppingMatrices& hm);
// B = 0 and tridiagonal A: eigendecomposition of A via the QL solver.
SpectralData diagonalize_xx(const HoppingMatrices& hm);
MirrorSpectralData diagonalize_mirror(const HoppingMatrices& hm);

// (Tr A - sum omega) / 2: energy of the quasi-particle vacuum.
double ground_energy(const HoppingMatrices& hm);

// max |phi^T diag(omega) psi - (A - B)|.
double reconstruction_residual(const SpectralData& sd, const HoppingMatrices& hm);

}  // namespace spinwire
