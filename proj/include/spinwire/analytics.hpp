#pragma once

#include <vector>

#include "spinwire/chain_model.hpp"
#include "spinwire/quadratic_diag.hpp"

namespace spinwire::analytics {

// Uniform XX chain with end bonds j1: large-N closed forms.
struct XXAnalytics {
  int n = 0;
  double j1 = 1.0;
  double delta = 1.0;               // j1^2 / (2 - j1^2)
  std::vector<double> q;            // quasi-momenta, ascending in (0, pi)
  std::vector<double> phase_shift;  // phi(q_k)
  std::vector<double> density;      // rho(q_k)
  double arrival_time = 0.0;
};

double xx_dispersion(double q);
double xx_delta(double j1);
// phi(q) = q - arccot(cot q / delta), continuous on (0, pi).
double xx_phase_shift(double q, double delta);
double xx_phase_shift_derivative(double q, double delta);
// Solves (N+1) q = pi k + 2 phi(q) for k = 1..N.
std::vector<double> xx_quasimomenta(int n, double j1);
std::vector<double> xx_density(int n, double j1);
double xx_arrival_time(int n, double j1);
XXAnalytics xx_analytics(int n, double j1);

// Second-site transfer estimate for the two-parameter chain:
//   | sum_k (2 w_k / j1)^2 rho_k (-1)^k e^{-i w_k t} |
// with w_k, rho_k from the numerical eigenvectors of A (the closed-form two-parameter
// density is not available).
double xx_u2_estimate(int n, double j1, double j2, double t);

double xy_dispersion(double k, double gamma, double h);

struct IsingPeak {
  double k0 = 0.0;
  double omega = 0.0;
  double width = 0.0;
};

double ising_auxiliary(double j1, double h1, double h);
// Unnormalised wave-packet density of the end-field Ising chain.
double ising_density(double k, double j1, double h1, double h);
// Throws std::domain_error when the peak lies outside the band.
IsingPeak ising_peak(double j1, double h1, double h);
double ising_optimal_field(double j1, double h);
double ising_optimal_width(double j1, double h);
// Maximum of |d omega / dk| for the gamma = 1 dispersion: min(|h|, 1).
double ising_group_velocity(double h);

struct GroupVelocity {
  std::vector<double> q;         // pi k / (N+1) of the ordered band modes
  std::vector<double> velocity;  // |d omega / dq| by centred differences
};

// Modes are put in quasi-momentum order by the node count of their eigenvector rows;
// zero (out-of-band) modes are dropped. For particle-conserving chains the signed
// band energy is used so the band does not fold at omega = 0.
GroupVelocity numerical_group_velocity(const MirrorSpectralData& md);
// Same from a band already ordered by quasi-momentum.
GroupVelocity numerical_group_velocity(const std::vector<double>& band, int n);

}  // namespace spinwire::analytics
