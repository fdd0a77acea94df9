#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace selfrep {

// Row-major double storage everywhere; D, D0, X, C, E are all this type.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bad inputs: shapes, parameter ranges, non-finite data, unsupported problem rows.
class ValidationError : public Error {
public:
  using Error::Error;
};

// Numerical breakdown: SVD non-convergence, root-bracket exhaustion, infeasible systems.
class NumericalError : public Error {
public:
  using Error::Error;
};

struct Tolerances {
  double rankTol = 1e-10;   // sigma_i > rankTol * sigma_1 counts toward the numerical rank
  double reconTol = 1e-8;   // relative factorization reconstruction bound
  double equivTol = 1e-8;   // absolute tolerance for equivalence checks

  void validate() const;
};

void requireFinite(const Matrix& a, const char* what);
void requireNonZero(const Matrix& a, const char* what);
void requireSameShape(const Matrix& a, const Matrix& b, const char* what);

double l1Norm(const Matrix& a);
double l21Norm(const Matrix& a);      // sum of column l2 norms
double nuclearNorm(const Matrix& a);  // sum of singular values
double spectralNorm(const Matrix& a); // largest singular value
double maxAbs(const Matrix& a);
double maxAbsDiff(const Matrix& a, const Matrix& b);

} // namespace selfrep
