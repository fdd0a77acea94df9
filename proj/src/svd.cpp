#include "selfrep/svd.hpp"

#include <Eigen/SVD>

namespace selfrep {

Matrix SvdFactors::reconstruct() const {
  return u * sigma.asDiagonal() * v.transpose();
}

SvdFactors svd(const Matrix& a, SvdKind kind, const Tolerances& tol) {
  tol.validate();
  requireFinite(a, "svd");

  Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: Jacobi iteration did not converge");
  }

  SvdFactors f;
  f.u = dec.matrixU();
  f.sigma = dec.singularValues();
  f.v = dec.matrixV();
  f.kind = kind;

  // Sign convention: largest-magnitude entry of each U column nonnegative.
  for (Index j = 0; j < f.u.cols(); ++j) {
    Index imax = 0;
    f.u.col(j).cwiseAbs().maxCoeff(&imax);
    if (f.u(imax, j) < 0.0) {
      f.u.col(j) = -f.u.col(j);
      f.v.col(j) = -f.v.col(j);
    }
  }

  const double sigma1 = f.sigma.size() > 0 ? f.sigma(0) : 0.0;
  Index rank = 0;
  for (Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) > tol.rankTol * sigma1) ++rank;
  }
  f.numericalRank = rank;

  if (kind == SvdKind::skinny) {
    f.u = Matrix(f.u.leftCols(rank));
    f.v = Matrix(f.v.leftCols(rank));
    f.sigma = Vector(f.sigma.head(rank));
  }
  return f;
}

Matrix pinv(const Matrix& a, const Tolerances& tol) {
  requireNonZero(a, "pinv");
  const SvdFactors f = svd(a, SvdKind::skinny, tol);
  return f.v * f.sigma.cwiseInverse().asDiagonal() * f.u.transpose();
}

} // namespace selfrep
