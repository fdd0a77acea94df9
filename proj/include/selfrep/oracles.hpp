#pragma once

#include "selfrep/objective.hpp"

#include <string>

namespace selfrep {

struct OracleReport {
  std::string name;
  double maxDeviation = 0.0;
  double objectiveGap = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// (D^T D + I/gamma)^{-1} D^T D via a dense Cholesky solve; no SVD anywhere,
// so it is structurally independent of fnrRelaxed.
Matrix ridgeSolution(const Matrix& d, double gamma);

// Proximal gradient on |C|_* + gamma/2 |D - D C|_F^2: gradient step on the
// smooth term at fixed step 1/(gamma |D|_2^2), then singular-value
// soft-threshold. Stops at maxSteps or gradient-map norm <= gradMapTol.
Matrix proximalNuclear(const Matrix& d, double gamma, int maxSteps = 5000,
                       double gradMapTol = 1e-9);

// Literal enumeration of every truncation rank; tail sums left to right over
// the descending sigma. Must agree with selectK on every input.
Index bruteForceK(const Vector& sigmaDescending, double weight);

// Evaluates the analytic stationarity conditions of the relaxed rows at
// rep and cross-checks them against central finite differences of the
// objective on a sampled coordinate subset. maxDeviation is the gradient
// norm, objectiveGap the worst finite-difference disagreement.
OracleReport stationarityCheck(const ObjectiveSpec& spec, const Matrix& d,
                               const Representation& rep);

} // namespace selfrep
