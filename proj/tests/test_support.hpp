#pragma once

#include "selfrep/matrix.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace selfrep::testing {

inline Matrix randomMatrix(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = normal(rng);
  }
  return a;
}

inline Matrix randomLowRank(Index rows, Index cols, Index rank, std::mt19937_64& rng) {
  const Matrix a = randomMatrix(rows, rank, rng);
  const Matrix b = randomMatrix(rank, cols, rng);
  return a * b / std::sqrt(static_cast<double>(rank));
}

// Random matrix with prescribed singular values: controls conditioning so
// iterative oracles converge predictably.
inline Matrix randomWithSpectrum(Index rows, Index cols, const Vector& sigma,
                                 std::mt19937_64& rng) {
  const Index p = sigma.size();
  Eigen::HouseholderQR<Matrix> qrU(randomMatrix(rows, p, rng));
  Eigen::HouseholderQR<Matrix> qrV(randomMatrix(cols, p, rng));
  const Matrix u = qrU.householderQ() * Matrix::Identity(rows, p);
  const Matrix v = qrV.householderQ() * Matrix::Identity(cols, p);
  return u * sigma.asDiagonal() * v.transpose();
}

inline Vector randomSpectrum(Index p, std::mt19937_64& rng, double lo = 0.5, double hi = 2.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector s(p);
  for (Index i = 0; i < p; ++i) s(i) = unif(rng);
  std::sort(s.data(), s.data() + p, std::greater<double>());
  return s;
}

} // namespace selfrep::testing
