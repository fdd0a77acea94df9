#pragma once

#include "selfrep/matrix.hpp"

namespace selfrep {

// S_eps(x): x - eps for x > eps, x + eps for x < -eps, 0 otherwise.
double softThreshold(double x, double eps);
Matrix softThreshold(const Matrix& x, double eps);

// Q_eps: scales each column by (|col|_2 - eps) / |col|_2 and zeroes columns
// whose norm is at or below eps.
Matrix columnShrink(const Matrix& x, double eps);

} // namespace selfrep
