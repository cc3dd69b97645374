#include "spinwire/quadratic_diag.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "spinwire/tridiag.hpp"

namespace spinwire {

namespace {

constexpr double kReconstructionLimit = 1e-8;
constexpr double kFirstComponent = 1e-13;
constexpr double kSymmetryLimit = 1e-12;

// Flips rows so that the first component of each phi row above the threshold is positive;
// psi rows follow their partners.
void fix_signs(Eigen::MatrixXd& phi, Eigen::MatrixXd& psi) {
  for (Eigen::Index k = 0; k < phi.rows(); ++k) {
    for (Eigen::Index n = 0; n < phi.cols(); ++n) {
      const double x = phi(k, n);
      if (std::abs(x) > kFirstComponent) {
        if (x < 0) {
          phi.row(k) *= -1.0;
          psi.row(k) *= -1.0;
        }
        break;
      }
    }
  }
}

SpectralData assemble(Eigen::VectorXd omega, Eigen::MatrixXd phi, Eigen::MatrixXd psi) {
  for (Eigen::Index k = 0; k < omega.size(); ++k)
    if (omega(k) < kZeroMode) omega(k) = 0.0;
  SpectralData sd;
  sd.omega = std::move(omega);
  sd.p = 0.5 * (phi + psi);
  sd.q = 0.5 * (phi - psi);
  sd.phi = std::move(phi);
  sd.psi = std::move(psi);
  return sd;
}

void check(const SpectralData& sd, const HoppingMatrices& hm) {
  const double scale = std::max(1.0, (hm.a - hm.b).cwiseAbs().maxCoeff());
  if (reconstruction_residual(sd, hm) > kReconstructionLimit * scale)
    throw NumericalError("quadratic diagonalization failed reconstruction check");
}

bool is_tridiagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (std::abs(i - j) > 1 && m(i, j) != 0.0) return false;
  return true;
}

void require_valid(const HoppingMatrices& hm) {
  if (hm.a.rows() != hm.a.cols() || hm.b.rows() != hm.b.cols() || hm.a.rows() != hm.b.rows())
    throw std::invalid_argument("hopping matrices must be square and of equal size");
  if ((hm.a - hm.a.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("A must be symmetric");
  if ((hm.b + hm.b.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::invalid_argument("B must be antisymmetric");
}

}  // namespace

double reconstruction_residual(const SpectralData& sd, const HoppingMatrices& hm) {
  const Eigen::MatrixXd rebuilt = sd.phi.transpose() * sd.omega.asDiagonal() * sd.psi;
  return (rebuilt - (hm.a - hm.b)).cwiseAbs().maxCoeff();
}

SpectralData diagonalize_xx(const HoppingMatrices& hm) {
  require_valid(hm);
  const int n = hm.size();
  if (hm.b.cwiseAbs().maxCoeff() != 0.0 || !is_tridiagonal(hm.a))
    throw std::invalid_argument("XX route needs B = 0 and tridiagonal A");
  std::vector<double> diag(n), off(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = hm.a(i, i);
  for (int i = 0; i + 1 < n; ++i) off[i] = hm.a(i, i + 1);
  const TridiagEigen eig = eig_sym_tridiag(diag, off);

  // A = O diag(lambda) O^T = phi^T diag(|lambda|) psi with psi = sign(lambda) phi.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.values(a)) < std::abs(eig.values(b));
  });
  Eigen::VectorXd omega(n);
  Eigen::MatrixXd phi(n, n), psi(n, n);
  for (int k = 0; k < n; ++k) {
    const double lambda = eig.values(order[k]);
    omega(k) = std::abs(lambda);
    phi.row(k) = eig.vectors.col(order[k]).transpose();
    psi.row(k) = (lambda < 0 ? -1.0 : 1.0) * phi.row(k);
  }
  SpectralData sd = assemble(std::move(omega), std::move(phi), std::move(psi));
  check(sd, hm);
  return sd;
}

SpectralData diagonalize(const HoppingMatrices& hm) {
  require_valid(hm);
  const int n = hm.size();
  if (n == 0) return {};
  if (hm.b.cwiseAbs().maxCoeff() == 0.0 && is_tridiagonal(hm.a)) return diagonalize_xx(hm);

  const Eigen::MatrixXd m = hm.a - hm.b;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // m = U S V^T with S descending; phi = U^T, psi = V^T, reversed to ascending.
  const Eigen::VectorXd omega = svd.singularValues().reverse();
  Eigen::MatrixXd phi = svd.matrixU().transpose().colwise().reverse();
  Eigen::MatrixXd psi = svd.matrixV().transpose().colwise().reverse();
  fix_signs(phi, psi);
  SpectralData sd = assemble(omega, std::move(phi), std::move(psi));
  check(sd, hm);
  return sd;
}

SpectralData MirrorSpectralData::to_spectral() const {
  const int n = size();
  Eigen::MatrixXd psi(n, n);
  for (int k = 0; k < n; ++k) psi.row(k) = static_cast<double>(sign(k)) * w.row(k).reverse();
  return assemble(omega(), w, std::move(psi));
}

MirrorSpectralData diagonalize_mirror(const HoppingMatrices& hm) {
  require_valid(hm);
  const int n = hm.size();
  const Eigen::MatrixXd mx = (hm.a - hm.b).rowwise().reverse();
  if ((mx - mx.transpose()).cwiseAbs().maxCoeff() > kSymmetryLimit)
    throw std::invalid_argument("(A - B) X is not symmetric: chain is not mirror compatible");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (mx + mx.transpose()));
  if (eig.info() != Eigen::Success) throw NumericalError("mirror eigendecomposition failed");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const Eigen::VectorXd& values = eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(values(a)) < std::abs(values(b)); });

  MirrorSpectralData md;
  md.w.resize(n, n);
  md.big_omega.resize(n);
  md.sign.resize(n);
  md.number_conserving = hm.b.cwiseAbs().maxCoeff() == 0.0;
  for (int k = 0; k < n; ++k) {
    const double value = values(order[k]);
    md.w.row(k) = eig.eigenvectors().col(order[k]).transpose();
    md.big_omega(k) = std::abs(value) < kZeroMode ? 0.0 : value;
    md.sign(k) = value < 0 && std::abs(value) >= kZeroMode ? -1 : 1;
    for (int s = 0; s < n; ++s) {
      if (std::abs(md.w(k, s)) > kFirstComponent) {
        if (md.w(k, s) < 0) md.w.row(k) *= -1.0;
        break;
      }
    }
  }
  return md;
}

double ground_energy(const HoppingMatrices& hm) {
  require_valid(hm);
  if (hm.size() == 0) return 0.0;
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(hm.a - hm.b).singularValues();
  return 0.5 * (hm.a.trace() - sv.sum());
}

}  // namespace spinwire
