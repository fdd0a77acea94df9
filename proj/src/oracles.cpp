#include "selfrep/oracles.hpp"

#include "selfrep/svd.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <random>

namespace selfrep {

Matrix ridgeSolution(const Matrix& d, double gamma) {
  requireFinite(d, "ridgeSolution: d");
  if (!(gamma > 0.0)) throw ValidationError("ridgeSolution: gamma must be positive");
  const Index n = d.cols();
  const Matrix dtd = d.transpose() * d;
  const Matrix lhs = dtd + (1.0 / gamma) * Matrix::Identity(n, n);
  Eigen::LLT<Matrix> chol(lhs);
  if (chol.info() != Eigen::Success) {
    throw NumericalError("ridgeSolution: Cholesky factorization failed");
  }
  return chol.solve(dtd);
}

Matrix proximalNuclear(const Matrix& d, double gamma, int maxSteps, double gradMapTol) {
  requireNonZero(d, "proximalNuclear: d");
  if (!(gamma > 0.0)) throw ValidationError("proximalNuclear: gamma must be positive");
  if (maxSteps < 1) throw ValidationError("proximalNuclear: maxSteps must be >= 1");

  const double opNorm = spectralNorm(d);
  const double step = 1.0 / (gamma * opNorm * opNorm);

  const Index n = d.cols();
  const Matrix dtd = d.transpose() * d;
  Matrix c = Matrix::Zero(n, n);
  for (int it = 0; it < maxSteps; ++it) {
    const Matrix grad = gamma * (dtd * c - dtd);
    const Matrix y = c - step * grad;
    // prox of step * |.|_* : soft-threshold the singular values by step
    const SvdFactors f = svd(y, SvdKind::full);
    const Vector shrunk = (f.sigma.array() - step).max(0.0).matrix();
    Matrix next = f.u * shrunk.asDiagonal() * f.v.transpose();
    const double gradMap = (c - next).norm() / step;
    c = std::move(next);
    if (gradMap <= gradMapTol) break;
  }
  return c;
}

Index bruteForceK(const Vector& sigmaDescending, double weight) {
  if (!(weight > 0.0)) throw ValidationError("bruteForceK: weight must be positive");
  const Index p = sigmaDescending.size();
  Index best = 0;
  double bestCost = std::numeric_limits<double>::infinity();
  for (Index r = 0; r <= p; ++r) {
    double tail = 0.0;
    for (Index i = r; i < p; ++i) {
      tail += sigmaDescending(i) * sigmaDescending(i);
    }
    const double cost = static_cast<double>(r) + weight * tail;
    if (cost < bestCost) {
      bestCost = cost;
      best = r;
    }
  }
  return best;
}

namespace {

// Worst |fd - g| / max(1, |fd| + |g|) of central differences against the
// analytic gradient over up to `samples` coordinates of `block`.
template <typename Objective>
double fdDisagreement(const Objective& objective, Matrix block, const Matrix& grad,
                      std::mt19937_64& rng, int samples) {
  const Index total = block.size();
  const double h = 1e-6;
  double worst = 0.0;
  std::uniform_int_distribution<Index> pick(0, total - 1);
  const int count = static_cast<int>(std::min<Index>(total, samples));
  for (int s = 0; s < count; ++s) {
    const Index flat = total <= samples ? s : pick(rng);
    const Index i = flat / block.cols();
    const Index j = flat % block.cols();
    const double saved = block(i, j);
    block(i, j) = saved + h;
    const double up = objective(block);
    block(i, j) = saved - h;
    const double down = objective(block);
    block(i, j) = saved;
    const double fd = (up - down) / (2.0 * h);
    const double g = grad(i, j);
    worst = std::max(worst, std::abs(fd - g) / std::max(1.0, std::abs(fd) + std::abs(g)));
  }
  return worst;
}

} // namespace

OracleReport stationarityCheck(const ObjectiveSpec& spec, const Matrix& d,
                               const Representation& rep) {
  spec.validate();
  if (spec.constraint != Constraint::relaxed) {
    throw ValidationError("stationarityCheck: only the relaxed rows have smooth optimality "
                          "conditions");
  }
  if (spec.normOnC == NormOnC::nuclear && spec.noise == Noise::none) {
    throw ValidationError("stationarityCheck: the noise-free nuclear row has no "
                          "differentiable block");
  }
  requireFinite(d, "stationarityCheck: d");

  const Matrix& c = rep.c;
  const Matrix& d0 = spec.noise == Noise::gaussian ? rep.d0 : d;
  const Index n = d.cols();
  const Matrix eye = Matrix::Identity(n, n);

  std::mt19937_64 rng(0x5eed5u);
  double gradNorm = 0.0;
  double fdWorst = 0.0;
  double tolerance = 0.0;

  if (spec.normOnC == NormOnC::frobenius) {
    // dL/dC = C - gamma D0^T D0 (I - C)
    const Matrix gradC = c - spec.gamma * (d0.transpose() * d0) * (eye - c);
    gradNorm = std::max(gradNorm, gradC.norm());
    tolerance = std::max(tolerance, 1e-8 * (1.0 + d.squaredNorm()));
    auto objC = [&](const Matrix& cc) { return objectiveValue(spec, d, cc, d0, rep.e); };
    fdWorst = std::max(fdWorst, fdDisagreement(objC, c, gradC, rng, 50));
  }

  if (spec.noise == Noise::gaussian) {
    // dL/dD0 = -lambda (D - D0) + gamma D0 (I - C)(I - C)^T
    const Matrix imc = eye - c;
    const Matrix gradD0 = -spec.lambda * (d - d0) + spec.gamma * d0 * imc * imc.transpose();
    gradNorm = std::max(gradNorm, gradD0.norm());
    tolerance = std::max(tolerance, 1e-8 * (1.0 + spec.lambda) * (1.0 + d.squaredNorm()));
    auto objD0 = [&](const Matrix& dd0) { return objectiveValue(spec, d, c, dd0, rep.e); };
    fdWorst = std::max(fdWorst, fdDisagreement(objD0, d0, gradD0, rng, 50));
  }

  OracleReport report;
  report.name = "stationarity/" + spec.label();
  report.maxDeviation = gradNorm;
  report.objectiveGap = fdWorst;
  report.tolerance = tolerance;
  report.passed = gradNorm <= tolerance && fdWorst <= 1e-4;
  return report;
}

} // namespace selfrep
