#pragma once

#include "selfrep/matrix.hpp"

namespace selfrep {

enum class SvdKind { full, skinny };

// Singular triples (U, sigma, V), sigma descending. Each U column is sign-fixed
// (largest-magnitude entry nonnegative) so factorizations reproduce across runs.
struct SvdFactors {
  Matrix u;      // m x p, orthonormal columns
  Vector sigma;  // length p, descending, nonnegative
  Matrix v;      // n x p, orthonormal columns
  SvdKind kind = SvdKind::full;
  Index numericalRank = 0; // #{ sigma_i > rankTol * sigma_1 }

  Index count() const { return sigma.size(); }
  Matrix reconstruct() const;
  // Leading k triples (k <= count).
  Matrix truncateU(Index k) const { return u.leftCols(k); }
  Matrix truncateV(Index k) const { return v.leftCols(k); }
};

// kind full keeps all min(m, n) triples; skinny keeps the numerical rank only.
SvdFactors svd(const Matrix& a, SvdKind kind, const Tolerances& tol = {});

// V_r Sigma_r^{-1} U_r^T from the skinny SVD. Rejects the zero matrix.
Matrix pinv(const Matrix& a, const Tolerances& tol = {});

} // namespace selfrep
