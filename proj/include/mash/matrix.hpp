#pragma once

#include <Eigen/Dense>
#include <complex>

#include "mash/random.hpp"

namespace mash {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Rank-truncated SVD: A ~= left * diag(singular_values) * right^H with
// orthonormal left (M x r) and right (N x r), singular values positive and
// nonincreasing.
struct CompactSvd {
  ComplexMatrix left;
  RealVector singular_values;
  ComplexMatrix right;
  Eigen::Index rank() const { return singular_values.size(); }
};

// Haar-distributed n x n unitary. QR of an i.i.d. complex Gaussian matrix
// with the R-diagonal phase correction; plain QR output is NOT Haar.
ComplexMatrix haar_unitary(Eigen::Index n, RandomStream& rng);

// Singular values <= rank_tol * sigma_max are truncated (strict inequality
// keeps a value). rank_tol must lie in [0, 1).
CompactSvd compact_svd(const ComplexMatrix& a, double rank_tol = 1e-10);

// Solve A X = B for Hermitian positive definite A (Cholesky). A must be
// Hermitian to 1e-10 relative; breakdown raises SingularSystem.
ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b);

// rows x cols matrix of i.i.d. CN(0, variance) entries, filled in row-major
// order so the draw sequence is part of the reproducibility contract.
ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                              double variance, RandomStream& rng);

// Principal angles (radians, nonincreasing) between the column spans of two
// matrices with orthonormal columns of equal count. Computed from the sines,
// sigma((I - Q1 Q1^H) Q2), so angles near zero are resolved to machine
// precision; acos of a near-1 cosine would bottom out near 1e-8.
RealVector principal_angles(const ComplexMatrix& q1, const ComplexMatrix& q2);

}  // namespace mash
