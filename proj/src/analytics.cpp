#include "spinwire/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "spinwire/tridiag.hpp"

namespace spinwire::analytics {

using std::numbers::pi;

double xx_dispersion(double q) { return std::cos(q); }

double xx_delta(double j1) {
  if (!(j1 > 0.0 && j1 <= 1.0)) throw std::invalid_argument("j1 must lie in (0, 1]");
  return j1 * j1 / (2.0 - j1 * j1);
}

double xx_phase_shift(double q, double delta) {
  // arccot(cot q / delta) = atan2(delta sin q, cos q) on (0, pi).
  return q - std::atan2(delta * std::sin(q), std::cos(q));
}

double xx_phase_shift_derivative(double q, double delta) {
  const double s = std::sin(q), c = std::cos(q);
  return 1.0 - delta / (delta * delta * s * s + c * c);
}

std::vector<double> xx_quasimomenta(int n, double j1) {
  if (n < 1) throw std::invalid_argument("N must be positive");
  const double delta = xx_delta(j1);
  std::vector<double> q(n);
  for (int k = 1; k <= n; ++k) {
    auto residual = [&](double x) { return (n + 1) * x - pi * k - 2.0 * xx_phase_shift(x, delta); };
    // The residual increases monotonically from -pi k to (N+1-k) pi on (0, pi).
    double lo = 0.0, hi = pi;
    double x = pi * k / (n + 1);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
      const double f = residual(x);
      if (f > 0) hi = x; else lo = x;
      const double slope = (n + 1) - 2.0 * xx_phase_shift_derivative(x, delta);
      double next = x - f / slope;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 1e-14 * std::max(1.0, x)) {
        x = next;
        converged = true;
        break;
      }
      x = next;
    }
    if (!converged || std::abs(residual(x)) > 1e-12 * (n + 1))
      throw NumericalError("quasi-momentum equation did not converge");
    q[k - 1] = x;
  }
  return q;
}

std::vector<double> xx_density(int n, double j1) {
  const double delta = xx_delta(j1);
  const auto q = xx_quasimomenta(n, j1);
  std::vector<double> rho(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double cot = std::cos(q[k]) / std::sin(q[k]);
    rho[k] = delta * (1.0 + delta) /
             (((n + 1) - 2.0 * xx_phase_shift_derivative(q[k], delta)) * (delta * delta + cot * cot));
  }
  return rho;
}

double xx_arrival_time(int n, double j1) {
  const double delta = xx_delta(j1);
  return n + 1 + 2.0 * (1.0 - delta) / delta;
}

XXAnalytics xx_analytics(int n, double j1) {
  XXAnalytics a;
  a.n = n;
  a.j1 = j1;
  a.delta = xx_delta(j1);
  a.q = xx_quasimomenta(n, j1);
  a.phase_shift.resize(a.q.size());
  std::transform(a.q.begin(), a.q.end(), a.phase_shift.begin(),
                 [&](double q) { return xx_phase_shift(q, a.delta); });
  a.density = xx_density(n, j1);
  a.arrival_time = xx_arrival_time(n, j1);
  return a;
}

double xx_u2_estimate(int n, double j1, double j2, double t) {
  const double boundary[] = {j1, j2};
  const ChainSpec spec = xx_multi_param(n, boundary);
  std::vector<double> off(spec.j.size());
  std::transform(spec.j.begin(), spec.j.end(), off.begin(), [](double x) { return 0.5 * x; });
  const int first[] = {0};
  const TridiagEigen eig = eig_sym_tridiag_rows(spec.h, off, first);
  std::complex<double> sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double w = eig.values(k);
    const double rho = eig.vectors(0, k) * eig.vectors(0, k);
    const double weight = (2.0 * w / j1) * (2.0 * w / j1) * rho;
    sum += ((k % 2 == 0) ? weight : -weight) * std::polar(1.0, -w * t);
  }
  return std::abs(sum);
}

double xy_dispersion(double k, double gamma, double h) {
  const double a = h - std::cos(k);
  const double b = gamma * std::sin(k);
  return std::sqrt(a * a + b * b);
}

double ising_auxiliary(double j1, double h1, double h) {
  if (h == 0.0) throw std::invalid_argument("Ising density needs h != 0");
  return (1.0 + h * h - h1 * h1 - j1 * j1) / h;
}

double ising_density(double k, double j1, double h1, double h) {
  const double x = ising_auxiliary(j1, h1, h);
  const double s = std::sin(k);
  const double j2 = j1 * j1;
  const double a = (2.0 - j2) * std::cos(k) - x;
  return j2 * s * s / (a * a + j2 * j2 * s * s);
}

IsingPeak ising_peak(double j1, double h1, double h) {
  const double x = ising_auxiliary(j1, h1, h);
  const double edge = 2.0 - j1 * j1;
  if (std::abs(x) > edge) throw std::domain_error("resonance lies outside the band");
  IsingPeak peak;
  peak.k0 = std::acos(x / edge);
  peak.omega = std::sqrt((2.0 * h1 * h1 + (1.0 - h * h) * j1 * j1) / edge);
  peak.width = j1 * j1 / std::sqrt(edge * edge - x * x);
  return peak;
}

double ising_optimal_field(double j1, double h) {
  const double a = std::abs(h);
  if (a == 1.0) throw std::domain_error("optimal-field rule degenerates at the critical field");
  if (a < 1.0) return std::sqrt((1.0 - j1 * j1) * (1.0 - h * h));
  return std::sqrt(h * h - 1.0);
}

double ising_optimal_width(double j1, double h) {
  const double gap = std::abs(1.0 - h * h);
  if (gap == 0.0) throw std::domain_error("width diverges at the critical field");
  return std::max(std::abs(h), 1.0) / std::sqrt(gap) * j1 * j1 / (2.0 - j1 * j1);
}

double ising_group_velocity(double h) { return std::min(std::abs(h), 1.0); }

GroupVelocity numerical_group_velocity(const std::vector<double>& band, int n) {
  const int m = static_cast<int>(band.size());
  if (n < 3 || m < 2) throw std::invalid_argument("group velocity needs at least three sites");
  const double dq = pi / (n + 1);
  GroupVelocity gv;
  gv.q.resize(m);
  gv.velocity.resize(m);
  for (int i = 0; i < m; ++i) {
    gv.q[i] = dq * (i + 1);
    const int lo = std::max(i - 1, 0), hi = std::min(i + 1, m - 1);
    gv.velocity[i] = std::abs(band[hi] - band[lo]) / (dq * (hi - lo));
  }
  return gv;
}

namespace {

int node_count(const Eigen::RowVectorXd& row) {
  const double floor = 1e-10 * row.cwiseAbs().maxCoeff();
  int nodes = 0;
  double previous = 0.0;
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (std::abs(row(i)) <= floor) continue;
    if (previous != 0.0 && (row(i) > 0) != (previous > 0)) ++nodes;
    previous = row(i);
  }
  return nodes;
}

}  // namespace

GroupVelocity numerical_group_velocity(const MirrorSpectralData& md) {
  const int n = md.size();
  if (n < 3) throw std::invalid_argument("group velocity needs at least three sites");
  if (md.number_conserving) {
    // A = W^T diag(Omega) W X is tridiagonal; its signed spectrum is the unfolded band.
    const Eigen::MatrixXd a =
        (md.w.transpose() * md.big_omega.asDiagonal() * md.w).rowwise().reverse();
    std::vector<double> diag(n), off(n - 1);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    for (int i = 0; i + 1 < n; ++i) off[i] = 0.5 * (a(i, i + 1) + a(i + 1, i));
    const TridiagEigen eig = eig_sym_tridiag_rows(diag, off, std::vector<int>{0});
    std::vector<double> band(eig.values.data(), eig.values.data() + n);
    // Ascending energy runs from q = pi down to q = 0 for positive couplings.
    std::reverse(band.begin(), band.end());
    return numerical_group_velocity(band, n);
  }
  std::vector<int> modes;
  for (int k = 0; k < n; ++k)
    if (std::abs(md.big_omega(k)) > 1e-9) modes.push_back(k);
  std::vector<int> nodes(n);
  for (int k : modes) nodes[k] = node_count(md.w.row(k));
  std::stable_sort(modes.begin(), modes.end(), [&](int a, int b) { return nodes[a] < nodes[b]; });
  std::vector<double> band;
  band.reserve(modes.size());
  for (int k : modes) band.push_back(std::abs(md.big_omega(k)));
  return numerical_group_velocity(band, n);
}

}  // namespace spinwire::analytics
