#include "spinwire/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spinwire/chain_model.hpp"

namespace spinwire {

namespace {

constexpr double kZeroComponent = 1e-13;

// Runs implicit QL on (d, e) and applies every rotation to the rows of z.
// z has one row per tracked site, initialised to the matching unit vectors.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, Eigen::MatrixXd& z) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  const int tracked = static_cast<int>(z.rows());
  double shift_total = 0.0;
  double scale = 0.0;
  for (int l = 0; l < n; ++l) {
    scale = std::max(scale, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n && std::abs(e[m]) > eps * scale) ++m;
    if (m > l) {
      int iterations = 0;
      do {
        if (++iterations > 60) throw NumericalError("tridiagonal QL did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        shift_total += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < tracked; ++k) {
            const double zi1 = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * zi1;
            z(k, i) = c * z(k, i) - s * zi1;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * scale);
    }
    d[l] += shift_total;
    e[l] = 0.0;
  }
}

TridiagEigen solve(std::span<const double> diag, std::span<const double> offdiag,
                   std::vector<int> rows) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) throw std::invalid_argument("empty tridiagonal matrix");
  if (static_cast<int>(offdiag.size()) != n - 1)
    throw std::invalid_argument("off-diagonal must have N-1 entries");
  auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(diag.begin(), diag.end(), finite) ||
      !std::all_of(offdiag.begin(), offdiag.end(), finite))
    throw std::invalid_argument("tridiagonal entries must be finite");
  for (int r : rows)
    if (r < 0 || r >= n) throw std::invalid_argument("eigenvector row out of range");

  // Tracked rows in ascending site order; site 0 always present for sign fixing.
  std::vector<int> tracked = rows;
  tracked.push_back(0);
  std::sort(tracked.begin(), tracked.end());
  tracked.erase(std::unique(tracked.begin(), tracked.end()), tracked.end());

  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tracked.size()), n);
  for (std::size_t k = 0; k < tracked.size(); ++k) z(static_cast<Eigen::Index>(k), tracked[k]) = 1.0;

  implicit_ql(d, e, z);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  TridiagEigen out;
  out.values.resize(n);
  out.vectors.resize(static_cast<Eigen::Index>(rows.size()), n);
  out.rows = rows;
  std::vector<int> position(n, -1);
  for (std::size_t k = 0; k < tracked.size(); ++k) position[tracked[k]] = static_cast<int>(k);
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    out.values(k) = d[src];
    double sign = 1.0;
    for (std::size_t t = 0; t < tracked.size(); ++t) {
      const double x = z(static_cast<Eigen::Index>(t), src);
      if (std::abs(x) > kZeroComponent) {
        sign = x < 0 ? -1.0 : 1.0;
        break;
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
      out.vectors(static_cast<Eigen::Index>(r), k) = sign * z(position[rows[r]], src);
  }
  return out;
}

}  // namespace

TridiagEigen eig_sym_tridiag(std::span<const double> diag, std::span<const double> offdiag) {
  std::vector<int> rows(diag.size());
  std::iota(rows.begin(), rows.end(), 0);
  return solve(diag, offdiag, std::move(rows));
}

TridiagEigen eig_sym_tridiag_rows(std::span<const double> diag, std::span<const double> offdiag,
                                  std::span<const int> rows) {
  return solve(diag, offdiag, std::vector<int>(rows.begin(), rows.end()));
}

}  // namespace spinwire
