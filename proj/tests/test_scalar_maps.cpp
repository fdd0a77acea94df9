#include "selfrep/solvers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace selfrep;

TEST_SUITE_BEGIN("scalar-maps");

TEST_CASE("frobenius forward map fixed points") {
  // omega 1, gamma 1, lambda 1: sigma = 1 + 1/4
  CHECK(fnrSigmaFromOmega(1.0, 1.0, 1.0) == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(solveOmegaFnr(1.25, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frobenius inversion limits") {
  // gamma -> 0 and lambda -> inf both collapse sigma to omega
  CHECK(solveOmegaFnr(0.8, 1.0, 1e-14) == doctest::Approx(0.8).epsilon(1e-10));
  CHECK(solveOmegaFnr(0.8, 1e14, 1.0) == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("nuclear forward map branch points") {
  // high branch: omega 2, gamma 1, lambda 1 -> sigma = 2 + 1/8
  CHECK(nnrSigmaFromOmega(2.0, 1.0, 1.0) == doctest::Approx(2.125).epsilon(1e-15));
  CHECK(solveOmegaNnr(2.125, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));

  // low branch: omega 0.5, gamma 1, lambda 1 -> sigma = 1.0, shrink 0
  CHECK(nnrSigmaFromOmega(0.5, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double w = solveOmegaNnr(1.0, 1.0, 1.0);
  CHECK(w == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w <= 1.0); // zero-shrinkage side
}

TEST_CASE("frobenius round trip in the injective regime") {
  // the map is strictly increasing whenever gamma <= 4 lambda
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> logLambda(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> logRatio(std::log(0.02), std::log(2.0));
  std::uniform_real_distribution<double> logOmega(std::log(0.01), std::log(10.0));
  for (int trial = 0; trial < 2000; ++trial) {
    const double lambda = std::exp(logLambda(rng));
    const double gamma = lambda * std::exp(logRatio(rng));
    const double omega = std::exp(logOmega(rng));
    const double sigma = fnrSigmaFromOmega(omega, lambda, gamma);
    const double back = solveOmegaFnr(sigma, lambda, gamma);
    CHECK(std::abs(back - omega) <= 1e-9 * omega);
  }
}

TEST_CASE("nuclear round trip on both branches in the injective regime") {
  // strictly increasing overall whenever lambda >= 3 gamma
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> logLambda(std::log(0.3), std::log(30.0));
  std::uniform_real_distribution<double> logRatio(std::log(0.01), std::log(1.0 / 3.0));
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> above(1.05, 20.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double lambda = std::exp(logLambda(rng));
    const double gamma = lambda * std::exp(logRatio(rng));
    const double boundary = 1.0 / std::sqrt(gamma);
    const double omega = (trial % 2 == 0 ? unit(rng) : above(rng)) * boundary;
    const double sigma = nnrSigmaFromOmega(omega, lambda, gamma);
    const double back = solveOmegaNnr(sigma, lambda, gamma);
    CHECK(std::abs(back - omega) <= 1e-9 * omega);
  }
}

TEST_CASE("multi-root inversions keep the forward identity and pick the min cost") {
  // gamma/lambda > 4 folds the frobenius map; every returned root must still
  // satisfy the equation, and the chosen one must not lose on cost
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  int folded = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double lambda = 0.1 + 0.4 * unif(rng);
    const double gamma = lambda * (5.0 + 10.0 * unif(rng));
    const double sigma = unif(rng);
    const auto roots = fnrOmegaRoots(sigma, lambda, gamma);
    REQUIRE(!roots.empty());
    if (roots.size() > 1) ++folded;
    for (double w : roots) {
      CHECK(std::abs(fnrSigmaFromOmega(w, lambda, gamma) - sigma) <= 1e-9 * sigma);
    }
    const double chosen = solveOmegaFnr(sigma, lambda, gamma);
    for (double w : roots) {
      CHECK(fnrIndexCost(sigma, chosen, lambda, gamma) <=
            fnrIndexCost(sigma, w, lambda, gamma) + 1e-12);
    }
  }
  CHECK(folded > 0); // the sweep must actually exercise the folded regime
}

TEST_CASE("nuclear candidates respect branch feasibility") {
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> unif(0.1, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double lambda = unif(rng);
    const double gamma = unif(rng);
    const double sigma = unif(rng);
    const auto roots = nnrOmegaRoots(sigma, lambda, gamma);
    REQUIRE(!roots.empty());
    const double boundary = 1.0 / std::sqrt(gamma);
    for (double w : roots) {
      CHECK(std::abs(nnrSigmaFromOmega(w, lambda, gamma) - sigma) <= 1e-9 * sigma);
      // low-branch roots must come from the linear equation
      if (w <= boundary) {
        CHECK(w == doctest::Approx(lambda * sigma / (lambda + gamma)).epsilon(1e-12));
      }
    }
    const double chosen = solveOmegaNnr(sigma, lambda, gamma);
    for (double w : roots) {
      CHECK(nnrIndexCost(sigma, chosen, lambda, gamma) <=
            nnrIndexCost(sigma, w, lambda, gamma) + 1e-12);
    }
  }
}

TEST_CASE("scalar maps validate their parameters") {
  CHECK_THROWS_AS(fnrSigmaFromOmega(1.0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(solveOmegaFnr(1.0, 1.0, -1.0), ValidationError);
  CHECK_THROWS_AS(solveOmegaNnr(0.0, 1.0, 1.0), ValidationError);
}

TEST_SUITE_END();
