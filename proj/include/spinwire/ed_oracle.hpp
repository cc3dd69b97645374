#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinwire/channel.hpp"
#include "spinwire/chain_model.hpp"

// Brute-force simulation in the 2^N spin space. Basis index bits are site
// occupations with site 1 as the most significant bit; bit 1 means spin up
// (sigma_z = +1), which is an occupied fermion mode. In bit order
//   sigma_z = diag(-1, 1), sigma_x = [[0,1],[1,0]], sigma_y = [[0,i],[-i,0]].
// The fermion map is c_n = i * prod_{m<n}(-sigma_z_m) * sigma^-_n, under which the
// spin Hamiltonian below is c^dagger A c + (c^dagger B c^dagger - c B c)/2 - Tr(A)/2.
namespace spinwire::ed {

inline constexpr int kMaxSites = 10;

struct PureState {
  int sites = 0;
  Eigen::VectorXcd amp;
};

struct MixedState {
  int sites = 0;
  Eigen::MatrixXcd rho;
};

// sum_n [(j+g)/4 XX + (j-g)/4 YY] + sum_n (h/2) Z. Real symmetric in this basis.
Eigen::MatrixXd build_spin_hamiltonian(const ChainSpec& spec);

// Full eigendecomposition, reused for any number of evolutions.
class Evolver {
 public:
  explicit Evolver(const ChainSpec& spec);

  [[nodiscard]] int sites() const { return sites_; }
  [[nodiscard]] const Eigen::VectorXd& energies() const { return energies_; }
  [[nodiscard]] const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  [[nodiscard]] PureState evolve(const PureState& psi, double t) const;
  [[nodiscard]] MixedState evolve(const MixedState& rho, double t) const;

 private:
  int sites_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd vectors_;
};

PureState evolve(const ChainSpec& spec, const PureState& psi, double t);

PureState basis_state(int sites, std::uint32_t index);
// Bits listed site 1 first, e.g. {1,0,0} is |100>.
PureState basis_state(std::span<const int> bits);
MixedState density(const PureState& psi);
MixedState maximally_mixed(int sites);
// (I + r . sigma) / 2
MixedState qubit_state(const Eigen::Vector3d& bloch);
MixedState tensor(const MixedState& left, const MixedState& right);
MixedState thermal_state(const ChainSpec& spec, double beta);
PureState random_pure_state(int sites, std::mt19937_64& rng);
MixedState random_mixed_state(int sites, std::mt19937_64& rng, int rank = 0);

// <0...01| e^{-iHt} |10...0>; equals U_{N,1}(t) e^{-i E_vac t}, E_vac = -sum(h)/2.
std::complex<double> single_excitation_amplitude(const ChainSpec& spec, double t);

// Expectation of prod_{n in sites} (-sigma_z_n); sites are 1-based.
std::complex<double> parity_expectation(const PureState& psi, std::span<const int> sites);
std::complex<double> parity_expectation(const MixedState& rho, std::span<const int> sites);

// Bloch vector of one site (1-based) of a register state.
Eigen::Vector3d bloch_vector(const MixedState& rho, int site);

// Input rho_1 (x) bulk on sites 2..N, evolved, read out at site N.
ChannelMatrix channel_tomography(const ChainSpec& spec, const MixedState& bulk, double t);
ChannelMatrix channel_tomography(const Evolver& evolver, const MixedState& bulk, double t);

// Sender qubit on site 1, site 2 reset to spin up by the Kraus pair
// {(1+Z)/2, sigma^+}, CNOT(1 -> 2), evolve, CNOT(N -> N-1), read site N.
// Both CNOTs flip the target when the control is spin down:
//   (1+Z)/2 (x) 1 + (1-Z)/2 (x) X.
// bulk lives on sites 3..N; site 2 enters maximally mixed.
ChannelMatrix encoded_protocol_tomography(const ChainSpec& spec, const MixedState& bulk, double t);
ChannelMatrix encoded_protocol_tomography(const Evolver& evolver, const MixedState& bulk, double t);

struct MirrorPhaseReport {
  bool ok = false;
  double deviation = 0.0;
};

// Checks e^{-iHt}|psi> against the site-reversed state where each occupation
// sector n picks up e^{i((pi/2) n(n-1) - n alpha)} relative to the vacuum amplitude.
// For U(t) = e^{i theta} X the matching alpha is -theta.
MirrorPhaseReport mirror_phase_check(const ChainSpec& spec, const PureState& psi, double alpha,
                                     double t, double tol = 1e-8);

}  // namespace spinwire::ed
