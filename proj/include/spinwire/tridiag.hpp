#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinwire {

// Eigenpairs of a real symmetric tridiagonal matrix, values ascending.
// vectors(r, k) is component rows[r] of eigenvector k; for the full solve
// rows = 0..N-1 and vectors is the orthogonal eigenvector matrix.
// Sign convention: the first nonzero component of each eigenvector is positive.
struct TridiagEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  std::vector<int> rows;
};

// Implicit QL with Wilkinson shifts. O(N^2) for the values, O(N^3) with vectors.
TridiagEigen eig_sym_tridiag(std::span<const double> diag, std::span<const double> offdiag);

// Same iteration, but only the requested eigenvector rows are accumulated, so the
// cost stays O(N^2 + N * rows). Signs are fixed from the first nonzero entry among
// site 0 and the requested rows, which matches the full solve whenever the site-0
// component is nonzero (always true for an unreduced matrix).
TridiagEigen eig_sym_tridiag_rows(std::span<const double> diag, std::span<const double> offdiag,
                                  std::span<const int> rows);

}  // namespace spinwire
