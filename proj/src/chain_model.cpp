#include "spinwire/chain_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spinwire {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

bool ChainSpec::number_conserving() const {
  return std::all_of(gamma.begin(), gamma.end(), [](double g) { return g == 0.0; });
}

void ChainSpec::validate() const {
  require(!h.empty(), "chain needs at least one site");
  const auto bonds = h.size() - 1;
  require(j.size() == bonds, "expected N-1 couplings");
  require(gamma.size() == bonds, "expected N-1 anisotropies");
  require(all_finite(j) && all_finite(gamma) && all_finite(h), "chain entries must be finite");
}

ChainSpec make_chain(std::vector<double> j, std::vector<double> gamma, std::vector<double> h) {
  ChainSpec spec{std::move(j), std::move(gamma), std::move(h)};
  spec.validate();
  return spec;
}

HoppingMatrices build_hopping(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.size();
  HoppingMatrices hm{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) hm.a(i, i) = spec.h[i];
  for (int i = 0; i + 1 < n; ++i) {
    hm.a(i, i + 1) = hm.a(i + 1, i) = 0.5 * spec.j[i];
    hm.b(i, i + 1) = -0.5 * spec.gamma[i];
    hm.b(i + 1, i) = 0.5 * spec.gamma[i];
  }
  return hm;
}

ChainSpec xx_minimal(int n, double j1) {
  require(n >= 3, "xx_minimal needs N >= 3");
  require(j1 > 0.0 && std::isfinite(j1), "j1 must be positive");
  const double boundary[] = {j1};
  return xx_multi_param(n, boundary);
}

ChainSpec xx_multi_param(int n, std::span<const double> boundary) {
  const int m = static_cast<int>(boundary.size());
  require(n >= 2 * m + 1, "engineered boundary segments overlap");
  ChainSpec spec{std::vector<double>(n - 1, 1.0), std::vector<double>(n - 1, 0.0),
                 std::vector<double>(n, 0.0)};
  for (int k = 0; k < m; ++k) {
    spec.j[k] = boundary[k];
    spec.j[n - 2 - k] = boundary[k];
  }
  spec.validate();
  return spec;
}

ChainSpec xy_minimal(int n, double j1, double h1, double gamma, double h) {
  require(n >= 3, "xy_minimal needs N >= 3");
  ChainSpec spec{std::vector<double>(n - 1, 1.0), {}, std::vector<double>(n, h)};
  spec.j.front() = spec.j.back() = j1;
  spec.h.front() = spec.h.back() = h1;
  spec.gamma.resize(n - 1);
  std::transform(spec.j.begin(), spec.j.end(), spec.gamma.begin(),
                 [gamma](double jn) { return gamma * jn; });
  spec.validate();
  return spec;
}

ChainSpec pst_chain(int n) {
  require(n >= 2, "pst_chain needs N >= 2");
  ChainSpec spec{std::vector<double>(n - 1), std::vector<double>(n - 1, 0.0),
                 std::vector<double>(n, 0.0)};
  for (int k = 1; k < n; ++k) spec.j[k - 1] = std::sqrt(static_cast<double>(k) * (n - k));
  return spec;
}

ChainSpec interior_chain(const ChainSpec& spec) {
  spec.validate();
  require(spec.size() >= 3, "interior_chain needs N >= 3");
  return ChainSpec{{spec.j.begin() + 1, spec.j.end()},
                   {spec.gamma.begin() + 1, spec.gamma.end()},
                   {spec.h.begin() + 1, spec.h.end()}};
}

ChainSpec reflected(const ChainSpec& spec) {
  ChainSpec out = spec;
  std::reverse(out.j.begin(), out.j.end());
  std::reverse(out.gamma.begin(), out.gamma.end());
  std::reverse(out.h.begin(), out.h.end());
  return out;
}

Eigen::MatrixXd exchange_matrix(int n) { return Eigen::MatrixXd::Identity(n, n).rowwise().reverse(); }

bool is_persymmetric(const Eigen::MatrixXd& m, double tol) {
  require(m.rows() == m.cols(), "is_persymmetric needs a square matrix");
  // XMX reverses both rows and columns.
  const Eigen::MatrixXd flipped = m.reverse();
  return (flipped - m).cwiseAbs().maxCoeff() <= tol;
}

bool mirror_compatibility(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double alpha,
                          double tol) {
  require(a.rows() == a.cols() && b.rows() == b.cols() && a.rows() == b.rows(),
          "mirror_compatibility needs square matrices of equal size");
  if (a.size() == 0) return true;
  if (!is_persymmetric(a, tol)) return false;
  const double b_scale = b.cwiseAbs().maxCoeff();
  if (b_scale <= tol) return true;
  // e^{2i alpha} must be real for a real B.
  if (std::abs(std::sin(2.0 * alpha)) * b_scale > tol) return false;
  const double phase = std::cos(2.0 * alpha);
  return (Eigen::MatrixXd(b.reverse()) - phase * b).cwiseAbs().maxCoeff() <= tol;
}

bool is_mirror_symmetric(const ChainSpec& spec, double tol) {
  const ChainSpec r = reflected(spec);
  auto close = [tol](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i] - y[i]) > tol) return false;
    return true;
  };
  return close(spec.j, r.j) && close(spec.gamma, r.gamma) && close(spec.h, r.h);
}

}  // namespace spinwire
