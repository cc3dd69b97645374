#include "spinwire/ed_oracle.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinwire::ed {

using cd = std::complex<double>;

namespace {

std::uint32_t dim(int sites) { return std::uint32_t{1} << sites; }

// Mask of a 1-based site in an N-site register.
std::uint32_t mask(int sites, int site) { return std::uint32_t{1} << (sites - site); }

void require_sites(int sites) {
  if (sites < 1 || sites > kMaxSites)
    throw std::invalid_argument("exact diagonalization supports 1..10 sites");
}

std::uint32_t reversed_bits(std::uint32_t index, int sites) {
  std::uint32_t out = 0;
  for (int s = 0; s < sites; ++s) out |= ((index >> s) & 1u) << (sites - 1 - s);
  return out;
}

Eigen::Vector3d readout(const MixedState& rho, int site) { return bloch_vector(rho, site); }

// Relabels basis states: rho'(p(i), p(j)) = rho(i, j).
MixedState permute(const MixedState& rho, const std::vector<std::uint32_t>& p) {
  MixedState out{rho.sites, Eigen::MatrixXcd(rho.rho.rows(), rho.rho.cols())};
  for (Eigen::Index i = 0; i < rho.rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.rho.cols(); ++j) out.rho(p[i], p[j]) = rho.rho(i, j);
  return out;
}

// Flips `target` whenever `control` is spin down (bit 0).
std::vector<std::uint32_t> cnot_down(int sites, int control, int target) {
  std::vector<std::uint32_t> p(dim(sites));
  for (std::uint32_t i = 0; i < p.size(); ++i)
    p[i] = (i & mask(sites, control)) ? i : (i ^ mask(sites, target));
  return p;
}

// Kraus pair {(1+Z)/2, sigma^+} on one site: trace it out and re-prepare spin up.
MixedState reset_up(const MixedState& rho, int site) {
  const std::uint32_t m = mask(rho.sites, site);
  MixedState out{rho.sites, Eigen::MatrixXcd::Zero(rho.rho.rows(), rho.rho.cols())};
  for (Eigen::Index i = 0; i < rho.rho.rows(); ++i) {
    if (!(i & m)) continue;
    for (Eigen::Index j = 0; j < rho.rho.cols(); ++j) {
      if (!(j & m)) continue;
      out.rho(i, j) = rho.rho(i, j) + rho.rho(i ^ m, j ^ m);
    }
  }
  return out;
}

// Solves D, d from the outputs for Bloch inputs +z, -z, +x, +y.
template <typename Run>
ChannelMatrix tomograph(Run&& run, double t) {
  const Eigen::Vector3d up = run(Eigen::Vector3d(0, 0, 1));
  const Eigen::Vector3d down = run(Eigen::Vector3d(0, 0, -1));
  const Eigen::Vector3d plus_x = run(Eigen::Vector3d(1, 0, 0));
  const Eigen::Vector3d plus_y = run(Eigen::Vector3d(0, 1, 0));
  ChannelMatrix ch;
  ch.t = t;
  ch.d_vector = 0.5 * (up + down);
  ch.d_matrix.col(0) = plus_x - ch.d_vector;
  ch.d_matrix.col(1) = plus_y - ch.d_vector;
  ch.d_matrix.col(2) = 0.5 * (up - down);
  return ch;
}

}  // namespace

Eigen::MatrixXd build_spin_hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.size();
  require_sites(n);
  const std::uint32_t size = dim(n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  for (std::uint32_t i = 0; i < size; ++i) {
    for (int s = 1; s <= n; ++s) h(i, i) += 0.5 * spec.h[s - 1] * ((i & mask(n, s)) ? 1.0 : -1.0);
    for (int s = 1; s < n; ++s) {
      const std::uint32_t a = mask(n, s), b = mask(n, s + 1);
      const bool same = static_cast<bool>(i & a) == static_cast<bool>(i & b);
      // XX and YY both flip the pair; YY carries -1 on aligned pairs, +1 otherwise.
      h(i ^ a ^ b, i) += same ? 0.5 * spec.gamma[s - 1] : 0.5 * spec.j[s - 1];
    }
  }
  return h;
}

Evolver::Evolver(const ChainSpec& spec) : sites_(spec.size()) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(build_spin_hamiltonian(spec));
  if (eig.info() != Eigen::Success) throw NumericalError("spin Hamiltonian diagonalization failed");
  energies_ = eig.eigenvalues();
  vectors_ = eig.eigenvectors();
}

PureState Evolver::evolve(const PureState& psi, double t) const {
  if (psi.sites != sites_) throw std::invalid_argument("state size does not match the chain");
  Eigen::VectorXcd coeff = vectors_.transpose().cast<cd>() * psi.amp;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::polar(1.0, -energies_(k) * t);
  return {sites_, vectors_.cast<cd>() * coeff};
}

MixedState Evolver::evolve(const MixedState& rho, double t) const {
  if (rho.sites != sites_) throw std::invalid_argument("state size does not match the chain");
  const Eigen::MatrixXcd v = vectors_.cast<cd>();
  Eigen::MatrixXcd inner = v.transpose() * rho.rho * v;
  const Eigen::Index size = inner.rows();
  Eigen::VectorXcd phase(size);
  for (Eigen::Index k = 0; k < size; ++k) phase(k) = std::polar(1.0, -energies_(k) * t);
  for (Eigen::Index j = 0; j < size; ++j)
    for (Eigen::Index i = 0; i < size; ++i) inner(i, j) *= phase(i) * std::conj(phase(j));
  return {sites_, v * inner * v.transpose()};
}

PureState evolve(const ChainSpec& spec, const PureState& psi, double t) {
  return Evolver(spec).evolve(psi, t);
}

PureState basis_state(int sites, std::uint32_t index) {
  require_sites(sites);
  if (index >= dim(sites)) throw std::invalid_argument("basis index out of range");
  PureState psi{sites, Eigen::VectorXcd::Zero(dim(sites))};
  psi.amp(index) = 1.0;
  return psi;
}

PureState basis_state(std::span<const int> bits) {
  std::uint32_t index = 0;
  for (int b : bits) index = (index << 1) | (b ? 1u : 0u);
  return basis_state(static_cast<int>(bits.size()), index);
}

MixedState density(const PureState& psi) { return {psi.sites, psi.amp * psi.amp.adjoint()}; }

MixedState maximally_mixed(int sites) {
  const auto size = dim(sites);
  return {sites, Eigen::MatrixXcd::Identity(size, size) / static_cast<double>(size)};
}

MixedState qubit_state(const Eigen::Vector3d& r) {
  MixedState q{1, Eigen::MatrixXcd(2, 2)};
  // Bit order: index 0 is spin down.
  q.rho << 0.5 * (1.0 - r.z()), 0.5 * cd(r.x(), r.y()),
           0.5 * cd(r.x(), -r.y()), 0.5 * (1.0 + r.z());
  return q;
}

MixedState tensor(const MixedState& left, const MixedState& right) {
  const Eigen::Index rl = left.rho.rows(), rr = right.rho.rows();
  MixedState out{left.sites + right.sites, Eigen::MatrixXcd(rl * rr, rl * rr)};
  for (Eigen::Index i = 0; i < rl; ++i)
    for (Eigen::Index j = 0; j < rl; ++j) out.rho.block(i * rr, j * rr, rr, rr) = left.rho(i, j) * right.rho;
  return out;
}

MixedState thermal_state(const ChainSpec& spec, double beta) {
  const Evolver ev(spec);
  const double e0 = ev.energies().minCoeff();
  Eigen::VectorXd weights = (-(beta) * (ev.energies().array() - e0)).exp();
  weights /= weights.sum();
  const Eigen::MatrixXd rho = ev.eigenvectors() * weights.asDiagonal() * ev.eigenvectors().transpose();
  return {spec.size(), rho.cast<cd>()};
}

PureState random_pure_state(int sites, std::mt19937_64& rng) {
  require_sites(sites);
  std::normal_distribution<double> g;
  PureState psi{sites, Eigen::VectorXcd(dim(sites))};
  for (Eigen::Index i = 0; i < psi.amp.size(); ++i) psi.amp(i) = cd(g(rng), g(rng));
  psi.amp.normalize();
  return psi;
}

MixedState random_mixed_state(int sites, std::mt19937_64& rng, int rank) {
  require_sites(sites);
  const auto size = static_cast<Eigen::Index>(dim(sites));
  const Eigen::Index r = rank > 0 ? rank : size;
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(size, r);
  for (Eigen::Index j = 0; j < r; ++j)
    for (Eigen::Index i = 0; i < size; ++i) a(i, j) = cd(g(rng), g(rng));
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace().real();
  return {sites, rho};
}

std::complex<double> single_excitation_amplitude(const ChainSpec& spec, double t) {
  const int n = spec.size();
  if (!spec.number_conserving()) throw std::invalid_argument("single-excitation sector needs gamma = 0");
  const PureState out = evolve(spec, basis_state(n, mask(n, 1)), t);
  return out.amp(mask(n, n));
}

std::complex<double> parity_expectation(const PureState& psi, std::span<const int> sites) {
  std::uint32_t m = 0;
  for (int s : sites) m |= mask(psi.sites, s);
  cd sum = 0.0;
  for (Eigen::Index i = 0; i < psi.amp.size(); ++i)
    sum += (std::popcount(static_cast<std::uint32_t>(i) & m) % 2 ? -1.0 : 1.0) * std::norm(psi.amp(i));
  return sum;
}

std::complex<double> parity_expectation(const MixedState& rho, std::span<const int> sites) {
  std::uint32_t m = 0;
  for (int s : sites) m |= mask(rho.sites, s);
  cd sum = 0.0;
  for (Eigen::Index i = 0; i < rho.rho.rows(); ++i)
    sum += (std::popcount(static_cast<std::uint32_t>(i) & m) % 2 ? -1.0 : 1.0) * rho.rho(i, i);
  return sum;
}

Eigen::Vector3d bloch_vector(const MixedState& rho, int site) {
  const std::uint32_t m = mask(rho.sites, site);
  cd off = 0.0;  // reduced <down| rho |up>
  double z = 0.0;
  for (Eigen::Index i = 0; i < rho.rho.rows(); ++i) {
    if (i & m) {
      z += rho.rho(i, i).real();
    } else {
      z -= rho.rho(i, i).real();
      off += rho.rho(i, i | m);
    }
  }
  return {2.0 * off.real(), 2.0 * off.imag(), z};
}

ChannelMatrix channel_tomography(const Evolver& evolver, const MixedState& bulk, double t) {
  const int n = evolver.sites();
  if (bulk.sites != n - 1) throw std::invalid_argument("bulk must cover sites 2..N");
  return tomograph(
      [&](const Eigen::Vector3d& r) {
        return readout(evolver.evolve(tensor(qubit_state(r), bulk), t), n);
      },
      t);
}

ChannelMatrix channel_tomography(const ChainSpec& spec, const MixedState& bulk, double t) {
  return channel_tomography(Evolver(spec), bulk, t);
}

ChannelMatrix encoded_protocol_tomography(const Evolver& evolver, const MixedState& bulk, double t) {
  const int n = evolver.sites();
  if (n < 4) throw std::invalid_argument("encoding needs N >= 4");
  if (bulk.sites != n - 2) throw std::invalid_argument("bulk must cover sites 3..N");
  const auto encode = cnot_down(n, 1, 2);
  const auto decode = cnot_down(n, n, n - 1);
  const MixedState rest = tensor(maximally_mixed(1), bulk);
  return tomograph(
      [&](const Eigen::Vector3d& r) {
        MixedState rho = permute(reset_up(tensor(qubit_state(r), rest), 2), encode);
        rho = permute(evolver.evolve(rho, t), decode);
        return readout(rho, n);
      },
      t);
}

ChannelMatrix encoded_protocol_tomography(const ChainSpec& spec, const MixedState& bulk, double t) {
  return encoded_protocol_tomography(Evolver(spec), bulk, t);
}

MirrorPhaseReport mirror_phase_check(const ChainSpec& spec, const PureState& psi, double alpha,
                                     double t, double tol) {
  const int n = spec.size();
  if (n > 8) throw std::invalid_argument("mirror phase check is limited to N <= 8");
  const Evolver ev(spec);
  const cd vacuum = ev.evolve(basis_state(n, 0), t).amp(0);
  const PureState out = ev.evolve(psi, t);
  PureState expected{n, Eigen::VectorXcd::Zero(psi.amp.size())};
  for (std::uint32_t i = 0; i < psi.amp.size(); ++i) {
    const int occupied = std::popcount(i);
    const double phase = 0.5 * std::numbers::pi * occupied * (occupied - 1) - occupied * alpha;
    expected.amp(reversed_bits(i, n)) = vacuum * std::polar(1.0, phase) * psi.amp(i);
  }
  MirrorPhaseReport report;
  report.deviation = (out.amp - expected.amp).cwiseAbs().maxCoeff();
  report.ok = report.deviation <= tol;
  return report;
}

}  // namespace spinwire::ed
