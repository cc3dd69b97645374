#include "spinwire/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spinwire/kernels.hpp"
#include "spinwire/tridiag.hpp"

namespace spinwire {

using cd = std::complex<double>;

Propagator propagator(const SpectralData& sd, double t) {
  const int n = sd.size();
  Eigen::VectorXcd forward(n), backward(n);
  for (int k = 0; k < n; ++k) {
    forward(k) = std::polar(1.0, -sd.omega(k) * t);
    backward(k) = std::conj(forward(k));
  }
  const Eigen::MatrixXcd p = sd.p.cast<cd>();
  const Eigen::MatrixXcd q = sd.q.cast<cd>();
  Propagator prop;
  prop.t = t;
  prop.u = p.transpose() * forward.asDiagonal() * p + q.transpose() * backward.asDiagonal() * q;
  prop.v = p.transpose() * forward.asDiagonal() * q + q.transpose() * backward.asDiagonal() * p;
  return prop;
}

BoundaryAmplitudes moduli(const BoundaryEntries& e) {
  return {e.t, std::abs(e.u_n1), std::abs(e.v_n1), std::abs(e.u_nm1_2), std::abs(e.u_nm1_1)};
}

namespace {

// 0-based indices of sites 1, 2, N-1, N (clamped for very short chains).
std::array<int, 4> boundary_sites(int n) {
  return {0, std::min(1, n - 1), std::max(n - 2, 0), n - 1};
}

enum Row { kFirst = 0, kSecond = 1, kPenultimate = 2, kLast = 3 };

std::vector<detail::EntryWeights> boundary_weights(const BoundaryModes& bm) {
  auto u_entry = [&](int a, int b) {
    return detail::EntryWeights{bm.p.row(a).cwiseProduct(bm.p.row(b)).transpose(),
                                bm.q.row(a).cwiseProduct(bm.q.row(b)).transpose()};
  };
  auto v_entry = [&](int a, int b) {
    return detail::EntryWeights{bm.p.row(a).cwiseProduct(bm.q.row(b)).transpose(),
                                bm.q.row(a).cwiseProduct(bm.p.row(b)).transpose()};
  };
  return {u_entry(kLast, kFirst), v_entry(kLast, kFirst), u_entry(kPenultimate, kSecond),
          u_entry(kPenultimate, kFirst), u_entry(kLast, kSecond)};
}

std::vector<BoundaryEntries> unpack(const Eigen::MatrixXcd& values, std::span<const double> times) {
  std::vector<BoundaryEntries> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(i);
    out[i] = {times[i], values(0, c), values(1, c), values(2, c), values(3, c), values(4, c)};
  }
  return out;
}

}  // namespace

BoundaryEntries boundary_entries(const Propagator& prop) {
  const auto s = boundary_sites(static_cast<int>(prop.u.rows()));
  return {prop.t, prop.u(s[kLast], s[kFirst]), prop.v(s[kLast], s[kFirst]),
          prop.u(s[kPenultimate], s[kSecond]), prop.u(s[kPenultimate], s[kFirst]),
          prop.u(s[kLast], s[kSecond])};
}

BoundaryModes boundary_modes(const SpectralData& sd) {
  const int n = sd.size();
  if (n == 0) throw std::invalid_argument("empty spectral data");
  const auto sites = boundary_sites(n);
  BoundaryModes bm;
  bm.n = n;
  bm.omega = sd.omega;
  bm.p.resize(4, n);
  bm.q.resize(4, n);
  for (int r = 0; r < 4; ++r) {
    bm.p.row(r) = sd.p.col(sites[r]).transpose();
    bm.q.row(r) = sd.q.col(sites[r]).transpose();
  }
  return bm;
}

BoundaryModes xx_boundary_modes(const ChainSpec& spec) {
  spec.validate();
  if (!spec.number_conserving()) throw std::invalid_argument("XX boundary path needs gamma = 0");
  const int n = spec.size();
  std::vector<double> off(spec.j.size());
  std::transform(spec.j.begin(), spec.j.end(), off.begin(), [](double x) { return 0.5 * x; });
  const auto sites = boundary_sites(n);
  const TridiagEigen eig = eig_sym_tridiag_rows(spec.h, off, sites);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(eig.values(a)) < std::abs(eig.values(b));
  });
  BoundaryModes bm;
  bm.n = n;
  bm.omega.resize(n);
  bm.p.setZero(4, n);
  bm.q.setZero(4, n);
  for (int k = 0; k < n; ++k) {
    const double lambda = eig.values(order[k]);
    const bool negative = lambda < 0 && std::abs(lambda) >= kZeroMode;
    bm.omega(k) = std::abs(lambda) < kZeroMode ? 0.0 : std::abs(lambda);
    // psi = sign(lambda) phi, so a mode is either all-P or all-Q.
    auto& target = negative ? bm.q : bm.p;
    target.col(k) = eig.vectors.col(order[k]);
  }
  return bm;
}

BoundaryModes boundary_modes(const ChainSpec& spec) {
  if (spec.number_conserving()) return xx_boundary_modes(spec);
  return boundary_modes(diagonalize(build_hopping(spec)));
}

BoundaryEntries boundary_entries(const BoundaryModes& bm, double t) {
  const double grid[] = {t};
  return boundary_series(bm, grid).front();
}

std::vector<BoundaryEntries> boundary_series(const BoundaryModes& bm, std::span<const double> grid) {
  return unpack(detail::evaluate_entries(bm.omega, boundary_weights(bm), grid), grid);
}

std::vector<BoundaryEntries> boundary_series_uniform(const BoundaryModes& bm, double t0, double dt,
                                                     int steps) {
  std::vector<double> times(std::max(steps, 0));
  for (int i = 0; i < steps; ++i) times[i] = t0 + i * dt;
  return unpack(detail::evaluate_entries_uniform(bm.omega, boundary_weights(bm), t0, dt, steps),
                times);
}

BoundaryAmplitudes boundary_amplitudes(const SpectralData& sd, double t) {
  return moduli(boundary_entries(boundary_modes(sd), t));
}

std::vector<BoundaryAmplitudes> amplitude_timeseries(const SpectralData& sd,
                                                     std::span<const double> grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw std::invalid_argument("time grid must be finite");
    if (i > 0 && grid[i] < grid[i - 1]) throw std::invalid_argument("time grid must be ascending");
  }
  const auto entries = boundary_series(boundary_modes(sd), grid);
  std::vector<BoundaryAmplitudes> out(entries.size());
  std::transform(entries.begin(), entries.end(), out.begin(), moduli);
  return out;
}

SiteField site_amplitude_field(const SpectralData& sd, int source, std::span<const double> grid) {
  const int n = sd.size();
  if (source < 1 || source > n) throw std::invalid_argument("source site out of range");
  const int s = source - 1;
  std::vector<detail::EntryWeights> entries;
  entries.reserve(2 * static_cast<std::size_t>(n));
  for (int site = 0; site < n; ++site)
    entries.push_back({sd.p.col(site).cwiseProduct(sd.p.col(s)),
                       sd.q.col(site).cwiseProduct(sd.q.col(s))});
  for (int site = 0; site < n; ++site)
    entries.push_back({sd.p.col(site).cwiseProduct(sd.q.col(s)),
                       sd.q.col(site).cwiseProduct(sd.p.col(s))});
  const Eigen::MatrixXcd values = detail::evaluate_entries(sd.omega, entries, grid);
  return {values.topRows(n).cwiseAbs(), values.bottomRows(n).cwiseAbs()};
}

Eigen::VectorXd wavepacket_density(const MirrorSpectralData& md) {
  return md.w.col(0).cwiseAbs2();
}

double mirror_phase(const Propagator& prop) {
  const auto n = prop.u.rows();
  return std::arg(prop.u(n - 1, 0));
}

double mirror_deviation(const Propagator& prop, double alpha) {
  const auto n = prop.u.rows();
  const Eigen::MatrixXcd target = std::polar(1.0, alpha) * exchange_matrix(static_cast<int>(n)).cast<cd>();
  return (prop.u - target).cwiseAbs().maxCoeff();
}

bool uniform_grid(std::span<const double> grid, double& t0, double& dt) {
  if (grid.size() < 2) return false;
  t0 = grid.front();
  dt = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(dt > 0)) return false;
  const double tol = 1e-12 * std::max({1.0, std::abs(grid.front()), std::abs(grid.back())});
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - (t0 + static_cast<double>(i) * dt)) > tol) return false;
  return true;
}

namespace detail {

namespace {

struct PackedRows {
  std::vector<double> weights;
  // For each packed row: entry index and whether it is the e^{+i w t} half.
  std::vector<std::pair<int, bool>> origin;
};

PackedRows pack(const std::vector<EntryWeights>& entries, Eigen::Index modes) {
  PackedRows packed;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    for (bool plus : {false, true}) {
      const Eigen::VectorXd& w = plus ? entries[e].plus : entries[e].minus;
      if (w.size() != modes) throw std::invalid_argument("entry weights size mismatch");
      if (w.cwiseAbs().maxCoeff() == 0.0) continue;
      packed.weights.insert(packed.weights.end(), w.data(), w.data() + modes);
      packed.origin.emplace_back(static_cast<int>(e), plus);
    }
  }
  return packed;
}

void scatter(const PackedRows& packed, const std::vector<cd>& sums, int steps, Eigen::Index column,
             Eigen::MatrixXcd& out) {
  for (std::size_t r = 0; r < packed.origin.size(); ++r) {
    const auto [entry, plus] = packed.origin[r];
    for (int i = 0; i < steps; ++i) {
      const cd value = sums[r * steps + i];
      out(entry, column + i) += plus ? std::conj(value) : value;
    }
  }
}

}  // namespace

Eigen::MatrixXcd evaluate_entries_uniform(const Eigen::VectorXd& omega,
                                          const std::vector<EntryWeights>& entries, double t0,
                                          double dt, int steps) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(entries.size()), steps);
  if (steps <= 0 || omega.size() == 0) return out;
  const PackedRows packed = pack(entries, omega.size());
  if (packed.origin.empty()) return out;
  const int rows = static_cast<int>(packed.origin.size());
  std::vector<cd> sums(static_cast<std::size_t>(rows) * steps);
  kernels::mode_sums({std::span<const double>(omega.data(), omega.size()), packed.weights, rows, t0,
                      dt, steps},
                     sums);
  scatter(packed, sums, steps, 0, out);
  return out;
}

Eigen::MatrixXcd evaluate_entries(const Eigen::VectorXd& omega,
                                  const std::vector<EntryWeights>& entries,
                                  std::span<const double> grid) {
  double t0 = 0.0, dt = 0.0;
  if (uniform_grid(grid, t0, dt))
    return evaluate_entries_uniform(omega, entries, t0, dt, static_cast<int>(grid.size()));
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(entries.size()), grid.size());
  if (omega.size() == 0) return out;
  const PackedRows packed = pack(entries, omega.size());
  const int rows = static_cast<int>(packed.origin.size());
  std::vector<cd> sums(static_cast<std::size_t>(rows));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    kernels::mode_sums_direct(
        {std::span<const double>(omega.data(), omega.size()), packed.weights, rows, grid[i], 0.0, 1},
        sums);
    scatter(packed, sums, 1, static_cast<Eigen::Index>(i), out);
  }
  return out;
}

}  // namespace detail

}  // namespace spinwire
