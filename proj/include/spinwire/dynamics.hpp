#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spinwire/chain_model.hpp"
#include "spinwire/quadratic_diag.hpp"

namespace spinwire {

// Heisenberg picture: c(t) = U(t) c + V(t) c^dagger.
struct Propagator {
  double t = 0.0;
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;
};

Propagator propagator(const SpectralData& sd, double t);

// Entries of U, V touching the four boundary sites (1-based names).
struct BoundaryEntries {
  double t = 0.0;
  std::complex<double> u_n1;    // U_{N,1}
  std::complex<double> v_n1;    // V_{N,1}
  std::complex<double> u_nm1_2; // U_{N-1,2}
  std::complex<double> u_nm1_1; // U_{N-1,1}
  std::complex<double> u_n2;    // U_{N,2}
};

struct BoundaryAmplitudes {
  double t = 0.0;
  double u1 = 0.0;       // |U_{N,1}|
  double v1 = 0.0;       // |V_{N,1}|
  double u2 = 0.0;       // |U_{N-1,2}|
  double u_cross = 0.0;  // |U_{N-1,1}|
};

BoundaryAmplitudes moduli(const BoundaryEntries& e);
BoundaryEntries boundary_entries(const Propagator& prop);

// P and Q columns of sites 1, 2, N-1, N (rows in that order), plus the energies.
// This is all the boundary dynamics needs; for XX chains it is obtained in O(N^2).
struct BoundaryModes {
  int n = 0;
  Eigen::VectorXd omega;
  Eigen::Matrix<double, 4, Eigen::Dynamic> p;
  Eigen::Matrix<double, 4, Eigen::Dynamic> q;
};

BoundaryModes boundary_modes(const SpectralData& sd);
// gamma == 0 only; never forms the full eigenvector matrix.
BoundaryModes xx_boundary_modes(const ChainSpec& spec);
// Picks the XX path when the chain conserves particle number.
BoundaryModes boundary_modes(const ChainSpec& spec);

BoundaryEntries boundary_entries(const BoundaryModes& bm, double t);
// Uniform grids go through the batched kernel; anything else is evaluated pointwise.
std::vector<BoundaryEntries> boundary_series(const BoundaryModes& bm, std::span<const double> grid);
std::vector<BoundaryEntries> boundary_series_uniform(const BoundaryModes& bm, double t0, double dt,
                                                     int steps);

BoundaryAmplitudes boundary_amplitudes(const SpectralData& sd, double t);
std::vector<BoundaryAmplitudes> amplitude_timeseries(const SpectralData& sd,
                                                     std::span<const double> grid);

// |U_{n,source}(t)| and |V_{n,source}(t)|: rows are sites, columns grid times.
struct SiteField {
  Eigen::MatrixXd u_abs;
  Eigen::MatrixXd v_abs;
};
SiteField site_amplitude_field(const SpectralData& sd, int source, std::span<const double> grid);

// W_{k1}^2 in mode order.
Eigen::VectorXd wavepacket_density(const MirrorSpectralData& md);

// Phase alpha minimising max|U - e^{i alpha} X| (taken from U_{N,1}), and that deviation.
double mirror_phase(const Propagator& prop);
double mirror_deviation(const Propagator& prop, double alpha);

// True when grid[i] = t0 + i*dt to rounding; fills t0 and dt.
bool uniform_grid(std::span<const double> grid, double& t0, double& dt);

namespace detail {

// Weights of one matrix entry: entry(t) = sum_k minus_k e^{-i w_k t} + plus_k e^{+i w_k t}.
struct EntryWeights {
  Eigen::VectorXd minus;
  Eigen::VectorXd plus;
};

// entries x times.
Eigen::MatrixXcd evaluate_entries(const Eigen::VectorXd& omega,
                                  const std::vector<EntryWeights>& entries,
                                  std::span<const double> grid);
Eigen::MatrixXcd evaluate_entries_uniform(const Eigen::VectorXd& omega,
                                          const std::vector<EntryWeights>& entries, double t0,
                                          double dt, int steps);

}  // namespace detail

}  // namespace spinwire
