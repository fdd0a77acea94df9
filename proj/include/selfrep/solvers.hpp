#pragma once

#include "selfrep/objective.hpp"
#include "selfrep/svd.hpp"

#include <vector>

namespace selfrep {

// k = argmin_r r + weight * sum_{i>r} sigma_i^2 over r in 0..len(sigma).
// Ties break toward the smallest r; tail sums run left to right over the
// descending sigma so the result is bit-reproducible.
Index selectK(const Vector& sigmaDescending, double weight);

// min |C|_F (equally |C|_*) s.t. X = D C. C = pinv(D) X. Throws when X is
// not in span(D) within equivTol.
Representation fnrExact(const Matrix& x, const Matrix& d, const Tolerances& tol = {},
                        NormOnC normOnC = NormOnC::frobenius);

// min |C|_F or |C|_* s.t. D = D C. C = V_r V_r^T, the orthogonal projector
// onto the row space of D.
Representation shapeInteraction(const Matrix& d, const Tolerances& tol = {},
                                NormOnC normOnC = NormOnC::frobenius);

// min 1/2 |C|_F^2 + lambda/2 |D - D0|_F^2 (frobenius) or
// min |C|_* + lambda/2 |D - D0|_F^2 (nuclear), s.t. D0 = D0 C.
// C = V_k V_k^T with k from selectK at weight lambda (frobenius) or
// lambda / 2 (nuclear); D0 is the rank-k truncation of D.
Representation exactGaussian(const Matrix& d, double lambda, NormOnC normOnC,
                             const Tolerances& tol = {});

// min 1/2 |C|_F^2 + gamma/2 |D - D C|_F^2.
// C = V_r (I - (I + gamma Sigma_r^2)^{-1}) V_r^T.
Representation fnrRelaxed(const Matrix& d, double gamma, const Tolerances& tol = {});

// min |C|_* + gamma/2 |D - D C|_F^2.
// C = V_1 (I - (1/gamma) Sigma_1^{-2}) V_1^T over sigma_i > 1/sqrt(gamma);
// directions with sigma_i <= 1/sqrt(gamma) contribute zero.
Representation nnrRelaxed(const Matrix& d, double gamma, const Tolerances& tol = {});

// Forward maps from a clean singular value omega to the observed sigma.
double fnrSigmaFromOmega(double omega, double lambda, double gamma);
double nnrSigmaFromOmega(double omega, double lambda, double gamma);

// Per-index contribution of one (sigma, omega) pair to the relaxed corrupted
// objective; used to pick among multiple inversion roots.
double fnrIndexCost(double sigma, double omega, double lambda, double gamma);
double nnrIndexCost(double sigma, double omega, double lambda, double gamma);

// All real roots of the corresponding inversion, ascending. For the nuclear
// map each root respects its branch's feasibility region.
std::vector<double> fnrOmegaRoots(double sigma, double lambda, double gamma);
std::vector<double> nnrOmegaRoots(double sigma, double lambda, double gamma);

// Cost-minimizing root of sigma = omega + gamma omega / (lambda (1 + gamma omega^2)^2).
double solveOmegaFnr(double sigma, double lambda, double gamma);

// Cost-minimizing root across the two branch equations
//   sigma = omega + omega^{-3} / (lambda gamma)   for omega >  1/sqrt(gamma)
//   sigma = omega + (gamma/lambda) omega          for omega <= 1/sqrt(gamma).
double solveOmegaNnr(double sigma, double lambda, double gamma);

// min f(C) + lambda/2 |D - D0|_F^2 + gamma/2 |D0 - D0 C|_F^2 for f frobenius
// or nuclear. D0 = U Omega V^T with omega_i inverted per singular value.
Representation relaxedGaussian(const Matrix& d, double lambda, double gamma,
                               NormOnC normOnC, const Tolerances& tol = {});

// Dispatch over all closed-form rows. Laplacian / sample-specific specs are
// rejected; those rows need the iterative solver.
Representation solveClosedForm(const ObjectiveSpec& spec, const Matrix& d,
                               const Tolerances& tol = {});

} // namespace selfrep
