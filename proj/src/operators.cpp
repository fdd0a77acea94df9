#include "selfrep/operators.hpp"

namespace selfrep {

double softThreshold(double x, double eps) {
  if (eps < 0.0) throw ValidationError("softThreshold: eps must be nonnegative");
  if (x > eps) return x - eps;
  if (x < -eps) return x + eps;
  return 0.0;
}

Matrix softThreshold(const Matrix& x, double eps) {
  if (eps < 0.0) throw ValidationError("softThreshold: eps must be nonnegative");
  return x.unaryExpr([eps](double v) {
    if (v > eps) return v - eps;
    if (v < -eps) return v + eps;
    return 0.0;
  });
}

Matrix columnShrink(const Matrix& x, double eps) {
  if (eps < 0.0) throw ValidationError("columnShrink: eps must be nonnegative");
  Matrix out = x;
  for (Index j = 0; j < out.cols(); ++j) {
    const double nrm = out.col(j).norm();
    if (nrm > eps) {
      out.col(j) *= (nrm - eps) / nrm;
    } else {
      out.col(j).setZero();
    }
  }
  return out;
}

} // namespace selfrep
