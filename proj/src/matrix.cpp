#include "mash/matrix.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "mash/errors.hpp"

namespace mash {

ComplexMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                              double variance, RandomStream& rng) {
  if (rows < 0 || cols < 0)
    throw InvalidDimension("gaussian_matrix: negative dimension");
  if (variance < 0.0)
    throw InvalidParameter("gaussian_matrix: variance < 0");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = rng.complex_gaussian(variance);
  return m;
}

ComplexMatrix haar_unitary(Eigen::Index n, RandomStream& rng) {
  if (n < 1) throw InvalidDimension("haar_unitary: n must be >= 1");
  ComplexMatrix g = gaussian_matrix(n, n, 1.0, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  // Fix the gauge: scale column j by phase(R_jj). Without this the QR map is
  // not measure-preserving and the result is biased away from Haar.
  const ComplexVector diag = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(diag(j));
    q.col(j) *= (mag > 0.0) ? diag(j) / mag : Complex(1.0, 0.0);
  }
  return q;
}

CompactSvd compact_svd(const ComplexMatrix& a, double rank_tol) {
  if (rank_tol < 0.0 || rank_tol >= 1.0)
    throw InvalidParameter("compact_svd: rank_tol must lie in [0, 1)");
  if (a.rows() == 0 || a.cols() == 0)
    return {ComplexMatrix(a.rows(), 0), RealVector(0), ComplexMatrix(a.cols(), 0)};
  // JacobiSVD, not BDCSVD: Eigen 3.4 BDCSVD can return orthonormal but WRONG
  // singular vectors on rank-deficient inputs (~1 in 1e3 random rank-10
  // 64x16 blocks; singular values stay correct, so nothing downstream
  // notices). Every caller here is small enough that Jacobi's cost is noise.
  Eigen::JacobiSVD<ComplexMatrix> svd(
      a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = rank_tol * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  if (sv(0) == 0.0) r = 0;
  return {svd.matrixU().leftCols(r), sv.head(r), svd.matrixV().leftCols(r)};
}

ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols()) throw InvalidShape("hermitian_solve: A not square");
  if (a.rows() != b.rows())
    throw InvalidShape("hermitian_solve: A and B row counts differ");
  const double scale = a.norm();
  if ((a - a.adjoint()).norm() > 1e-10 * std::max(scale, 1e-300))
    throw InvalidParameter("hermitian_solve: A is not Hermitian");
  Eigen::LLT<ComplexMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw SingularSystem("hermitian_solve: Cholesky factorization failed");
  ComplexMatrix x = llt.solve(b);
  // A zero pivot can slip through info() as inf/nan in the solution.
  if (!x.allFinite())
    throw SingularSystem("hermitian_solve: singular system");
  return x;
}

RealVector principal_angles(const ComplexMatrix& q1, const ComplexMatrix& q2) {
  if (q1.rows() != q2.rows())
    throw InvalidShape("principal_angles: row counts differ");
  if (q1.cols() != q2.cols())
    throw InvalidShape("principal_angles: subspace dimensions differ");
  if (q1.cols() == 0) return RealVector(0);
  // sines of the angles are the singular values of (I - Q1 Q1^H) Q2
  ComplexMatrix residual = q2 - q1 * (q1.adjoint() * q2);
  Eigen::JacobiSVD<ComplexMatrix> svd(residual);
  RealVector angles = svd.singularValues();
  for (Eigen::Index i = 0; i < angles.size(); ++i)
    angles(i) = std::asin(std::clamp(angles(i), 0.0, 1.0));
  return angles;
}

}  // namespace mash
