#include "selfrep/matrix.hpp"

#include <Eigen/SVD>

namespace selfrep {

void Tolerances::validate() const {
  if (!(rankTol > 0.0) || !(reconTol > 0.0) || !(equivTol > 0.0)) {
    throw ValidationError("tolerances must be strictly positive");
  }
}

void requireFinite(const Matrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw ValidationError(std::string(what) + ": matrix must have at least one row and column");
  }
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + ": matrix contains NaN or Inf");
  }
}

void requireNonZero(const Matrix& a, const char* what) {
  requireFinite(a, what);
  if (maxAbs(a) == 0.0) {
    throw ValidationError(std::string(what) + ": matrix is identically zero");
  }
}

void requireSameShape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                          "x" + std::to_string(b.cols()) + ")");
  }
}

double l1Norm(const Matrix& a) { return a.cwiseAbs().sum(); }

double l21Norm(const Matrix& a) { return a.colwise().norm().sum(); }

double nuclearNorm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> dec(a);
  return dec.singularValues().sum();
}

double spectralNorm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> dec(a);
  return dec.singularValues().size() > 0 ? dec.singularValues()(0) : 0.0;
}

double maxAbs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

double maxAbsDiff(const Matrix& a, const Matrix& b) {
  requireSameShape(a, b, "maxAbsDiff");
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace selfrep
