#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace spinwire {

// Default tolerance for predicates on exactly constructed matrices.
inline constexpr double kPredicateTol = 1e-12;

// Raised when a numerical post-condition (reconstruction, convergence) fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Open chain of N spins: exchange couplings and anisotropies on the N-1 bonds,
// magnetic fields on the N sites. Bulk coupling 1 sets the energy unit.
struct ChainSpec {
  std::vector<double> j;
  std::vector<double> gamma;
  std::vector<double> h;

  [[nodiscard]] int size() const { return static_cast<int>(h.size()); }
  [[nodiscard]] bool number_conserving() const;
  // Throws std::invalid_argument on length mismatch or non-finite entries.
  void validate() const;
};

ChainSpec make_chain(std::vector<double> j, std::vector<double> gamma, std::vector<double> h);

// One-body block A (symmetric) and pairing block B (antisymmetric) of the
// quadratic fermion Hamiltonian  c†Ac + (c†Bc† - cBc)/2.
struct HoppingMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;

  [[nodiscard]] int size() const { return static_cast<int>(a.rows()); }
};

// A_nn = h_n, A_{n,n+1} = j_n/2, B_{n,n+1} = -gamma_n/2.
HoppingMatrices build_hopping(const ChainSpec& spec);

// Uniform bulk with the two end bonds set to j1.
ChainSpec xx_minimal(int n, double j1);
// Uniform bulk with boundary[m] on bond m and its mirror image.
ChainSpec xx_multi_param(int n, std::span<const double> boundary);
// End bonds j1, end fields h1, bulk field h, anisotropy gamma*j on every bond.
ChainSpec xy_minimal(int n, double j1, double h1, double gamma, double h);
// j_n = sqrt(n(N-n)): linear spectrum, mirror time pi.
ChainSpec pst_chain(int n);
// Sites 2..N (the bus seen by the sender).
ChainSpec interior_chain(const ChainSpec& spec);
// Site-reversed copy.
ChainSpec reflected(const ChainSpec& spec);

Eigen::MatrixXd exchange_matrix(int n);
bool is_persymmetric(const Eigen::MatrixXd& m, double tol = kPredicateTol);
// XAX = A and XBX = e^{2i alpha} B; for real nonzero B only alpha = k*pi/2 can hold.
bool mirror_compatibility(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double alpha,
                          double tol = kPredicateTol);
bool is_mirror_symmetric(const ChainSpec& spec, double tol = kPredicateTol);

}  // namespace spinwire
