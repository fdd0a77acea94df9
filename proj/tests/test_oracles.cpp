#include "selfrep/oracles.hpp"

#include "selfrep/solvers.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace selfrep;
using testing::randomMatrix;
using testing::randomSpectrum;
using testing::randomWithSpectrum;

TEST_SUITE_BEGIN("oracles");

TEST_CASE("ridge solution fixed values") {
  CHECK(maxAbsDiff(ridgeSolution(Matrix::Identity(2, 2), 1.0),
                   Matrix(0.5 * Matrix::Identity(2, 2))) <= 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 0.9; // 9 / (9 + 1)
  CHECK(maxAbsDiff(ridgeSolution(d, 1.0), expected) <= 1e-14);
  // agrees with the shrinkage map 1 - 1/(1 + gamma sigma^2) = 0.9
  CHECK(maxAbsDiff(ridgeSolution(d, 1.0), fnrRelaxed(d, 1.0).c) <= 1e-12);
}

TEST_CASE("ridge and fnrRelaxed are two routes to one matrix") {
  std::mt19937_64 rng(201);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix d = randomMatrix(5, 5, rng);
    const double gamma = 0.1 * std::pow(10.0, 2.0 * (trial % 10) / 10.0);
    CHECK(maxAbsDiff(ridgeSolution(d, gamma), fnrRelaxed(d, gamma).c) <= 1e-9);
  }
}

TEST_CASE("proximal oracle collapses to zero when every sigma is thresholded") {
  std::mt19937_64 rng(202);
  const Matrix d = randomWithSpectrum(5, 5, randomSpectrum(4, rng, 0.5, 1.5), rng);
  // all sigma <= 1.5 < 1/sqrt(gamma) for gamma = 0.1
  const Matrix c = proximalNuclear(d, 0.1);
  CHECK(maxAbs(c) <= 1e-9);
  CHECK(maxAbs(nnrRelaxed(d, 0.1).c) == 0.0);
}

TEST_CASE("proximal oracle on the identity") {
  const Matrix c = proximalNuclear(Matrix::Identity(4, 4), 4.0);
  CHECK(maxAbsDiff(c, Matrix(0.75 * Matrix::Identity(4, 4))) <= 1e-8);
}

TEST_CASE("proximal objective meets the closed form") {
  std::mt19937_64 rng(203);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix d = randomWithSpectrum(6, 6, randomSpectrum(6, rng, 0.5, 2.0), rng);
    const double gamma = 2.0 + trial;
    const Representation closed = nnrRelaxed(d, gamma);
    const Matrix prox = proximalNuclear(d, gamma);
    const Matrix zero = Matrix::Zero(6, 6);
    const double proxObj = objectiveValue(closed.spec, d, prox, d, zero);
    CHECK(proxObj >= closed.objective - 1e-7); // closed form is optimal
    CHECK(proxObj - closed.objective <= 1e-5); // and the oracle converges to it
  }
}

TEST_CASE("bruteForceK equals selectK on random spectra") {
  std::mt19937_64 rng(204);
  std::uniform_real_distribution<double> mag(0.0, 3.0);
  std::uniform_real_distribution<double> wdist(0.01, 20.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const Index p = 1 + static_cast<Index>(rng() % 30);
    Vector sigma(p);
    for (Index i = 0; i < p; ++i) sigma(i) = mag(rng);
    std::sort(sigma.data(), sigma.data() + p, std::greater<double>());
    const double weight = wdist(rng);
    CHECK(selectK(sigma, weight) == bruteForceK(sigma, weight));
  }
}

TEST_CASE("bruteForceK fixed examples") {
  Vector sigma(3);
  sigma << 2.0, 1.0, 0.1;
  CHECK(bruteForceK(sigma, 1.0) == 1);
  Vector empty(0);
  CHECK(bruteForceK(empty, 1.0) == 0); // cost at r = len is len
}

TEST_CASE("stationarity check of fnrRelaxed output") {
  std::mt19937_64 rng(205);
  const Matrix d = randomMatrix(6, 6, rng);
  const Representation rep = fnrRelaxed(d, 1.3);
  const OracleReport report = stationarityCheck(rep.spec, d, rep);
  CHECK(report.passed);
  CHECK(report.maxDeviation <= 1e-8 * (1.0 + d.squaredNorm()));
  CHECK(report.objectiveGap <= 1e-4);
}

TEST_CASE("stationarity check flags a non-minimizer") {
  std::mt19937_64 rng(206);
  const Matrix d = randomMatrix(5, 5, rng);
  Representation rep = fnrRelaxed(d, 1.0);
  rep.c.setZero(); // C = 0 is not stationary for any nonzero D
  const OracleReport report = stationarityCheck(rep.spec, d, rep);
  CHECK(!report.passed);
  CHECK(report.maxDeviation > 1e-3);
}

TEST_CASE("stationarity check covers the corrupted relaxed rows") {
  std::mt19937_64 rng(207);
  const Matrix d = randomWithSpectrum(6, 6, randomSpectrum(5, rng, 0.8, 2.5), rng);
  for (NormOnC norm : {NormOnC::frobenius, NormOnC::nuclear}) {
    const Representation rep = relaxedGaussian(d, 2.0, 1.0, norm);
    const OracleReport report = stationarityCheck(rep.spec, d, rep);
    CHECK(report.passed);
  }
}

TEST_CASE("stationarity check rejects rows it cannot certify") {
  const Matrix d = Matrix::Identity(3, 3);
  ObjectiveSpec exact{NormOnC::frobenius, Constraint::exact, Noise::none, 0.0, 0.0};
  Representation rep = shapeInteraction(d);
  CHECK_THROWS_AS(stationarityCheck(exact, d, rep), ValidationError);

  ObjectiveSpec nnrNone{NormOnC::nuclear, Constraint::relaxed, Noise::none, 0.0, 1.0};
  CHECK_THROWS_AS(stationarityCheck(nnrNone, d, rep), ValidationError);
}

TEST_SUITE_END();
