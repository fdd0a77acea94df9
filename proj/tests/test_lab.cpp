#include "selfrep/lab.hpp"

#include "selfrep/solvers.hpp"
#include "selfrep/svd.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace selfrep;
using lab::Corruption;
using lab::CorruptionKind;
using lab::SyntheticSpec;

namespace {

SyntheticSpec threeSubspaces(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.ambientDim = 30;
  spec.subspaces = {{3, 40}, {3, 40}, {3, 40}};
  spec.seed = seed;
  return spec;
}

} // namespace

TEST_SUITE_BEGIN("lab");

TEST_CASE("two independent lines in R3 give a rank-2 data matrix") {
  SyntheticSpec spec;
  spec.ambientDim = 3;
  spec.subspaces = {{1, 10}, {1, 10}};
  spec.seed = 5;
  const lab::Instance inst = lab::generate(spec);
  CHECK(inst.data.rows() == 3);
  CHECK(inst.data.cols() == 20);
  CHECK(svd(inst.data, SvdKind::full).numericalRank == 2);
  for (Index j = 0; j < inst.data.cols(); ++j) {
    CHECK(inst.data.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("generate is bit deterministic under the seed") {
  SyntheticSpec spec = threeSubspaces(42);
  spec.noise = {CorruptionKind::gaussian, 0.05, 0.0, 0.0, 0.0};
  const lab::Instance a = lab::generate(spec);
  const lab::Instance b = lab::generate(spec);
  CHECK(maxAbsDiff(a.data, b.data) == 0.0);
  CHECK(a.labels == b.labels);

  spec.seed = 43;
  const lab::Instance c = lab::generate(spec);
  CHECK(maxAbsDiff(a.data, c.data) > 0.0);
}

TEST_CASE("gaussian corruption concentrates at the prescribed energy") {
  double sum = 0.0;
  const double stddev = 0.05;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    SyntheticSpec spec;
    spec.ambientDim = 20;
    spec.subspaces = {{2, 30}};
    spec.noise = {CorruptionKind::gaussian, stddev, 0.0, 0.0, 0.0};
    spec.seed = static_cast<std::uint64_t>(s);
    const lab::Instance inst = lab::generate(spec);
    sum += inst.error.norm() / inst.clean.norm();
  }
  const double mean = sum / seeds;
  const double expected =
      stddev * std::sqrt(20.0 * 30.0) / std::sqrt(30.0); // |clean|_F = sqrt(n)
  CHECK(mean == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("outlier corruption hits exactly the prescribed column count") {
  SyntheticSpec spec;
  spec.ambientDim = 10;
  spec.subspaces = {{2, 50}};
  spec.noise = {CorruptionKind::outlierColumns, 0.0, 0.0, 0.1, 5.0};
  spec.seed = 9;
  const lab::Instance inst = lab::generate(spec);
  CHECK(inst.corruptedColumns.size() == 5);
  for (Index j : inst.corruptedColumns) {
    CHECK(inst.error.col(j).norm() == doctest::Approx(5.0).epsilon(1e-12));
  }
  Index touched = 0;
  for (Index j = 0; j < inst.error.cols(); ++j) {
    if (inst.error.col(j).norm() > 0.0) ++touched;
  }
  CHECK(touched == 5);
}

TEST_CASE("laplacian corruption has the right scale") {
  SyntheticSpec spec;
  spec.ambientDim = 40;
  spec.subspaces = {{3, 100}};
  spec.noise = {CorruptionKind::laplacian, 0.0, 0.2, 0.0, 0.0};
  spec.seed = 10;
  const lab::Instance inst = lab::generate(spec);
  // Laplace(0, b) has E|x| = b
  const double meanAbs = inst.error.cwiseAbs().mean();
  CHECK(meanAbs == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("generate validates its spec") {
  SyntheticSpec bad;
  bad.ambientDim = 3;
  bad.subspaces = {{3, 5}}; // dim must be below ambient
  CHECK_THROWS_AS(lab::generate(bad), ValidationError);
}

TEST_CASE("affinity of a symmetric C is its absolute value") {
  Matrix c(2, 2);
  c << 1.0, -2.0, -2.0, 0.5;
  const Matrix w = lab::affinity(c);
  Matrix expected(2, 2);
  expected << 1.0, 2.0, 2.0, 0.5;
  CHECK(maxAbsDiff(w, expected) == 0.0);

  const Matrix wz = lab::affinity(c, true);
  CHECK(wz(0, 0) == 0.0);
  CHECK(wz(1, 1) == 0.0);
  CHECK_THROWS_AS(lab::affinity(Matrix::Ones(2, 3)), ValidationError);
}

TEST_CASE("affinity preserves block structure") {
  Matrix c = Matrix::Zero(4, 4);
  c.block(0, 0, 2, 2) = Matrix::Ones(2, 2);
  c.block(2, 2, 2, 2) = -Matrix::Ones(2, 2);
  const Matrix w = lab::affinity(c);
  CHECK(maxAbs(w.block(0, 2, 2, 2)) == 0.0);
  CHECK(maxAbs(w.block(2, 0, 2, 2)) == 0.0);
}

TEST_CASE("shape interaction of independent subspaces is block diagonal") {
  const lab::Instance inst = lab::generate(threeSubspaces(11));
  const Matrix w = lab::affinity(shapeInteraction(inst.data).c);
  double offBlock = 0.0;
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      if (inst.labels[static_cast<std::size_t>(i)] != inst.labels[static_cast<std::size_t>(j)]) {
        offBlock = std::max(offBlock, w(i, j));
      }
    }
  }
  CHECK(offBlock <= 1e-10);
}

TEST_CASE("spectral clustering separates disconnected blocks exactly") {
  Matrix w = Matrix::Zero(6, 6);
  w.block(0, 0, 3, 3) = Matrix::Ones(3, 3);
  w.block(3, 3, 3, 3) = Matrix::Ones(3, 3);
  const std::vector<int> labels = lab::spectralCluster(w, 2, 7);
  const std::vector<int> truth{0, 0, 0, 1, 1, 1};
  CHECK(lab::clusteringAccuracy(labels, truth) == 1.0);
  CHECK(lab::normalizedMutualInfo(labels, truth) == doctest::Approx(1.0));
}

TEST_CASE("end-to-end pipeline clusters a noise-free instance perfectly") {
  const lab::Instance inst = lab::generate(threeSubspaces(12));
  const Matrix w = lab::affinity(shapeInteraction(inst.data).c);
  const std::vector<int> labels = lab::spectralCluster(w, 3, 99);
  CHECK(lab::clusteringAccuracy(labels, inst.labels) == 1.0);
}

TEST_CASE("relaxed fnr and nnr affinities give the same partition") {
  const lab::Instance inst = lab::generate(threeSubspaces(13));
  const double gamma = 50.0;
  const std::vector<int> byF =
      lab::spectralCluster(lab::affinity(fnrRelaxed(inst.data, gamma).c), 3, 5);
  const std::vector<int> byN =
      lab::spectralCluster(lab::affinity(nnrRelaxed(inst.data, gamma).c), 3, 5);
  CHECK(lab::clusteringAccuracy(byF, byN) == 1.0);
  CHECK(lab::clusteringAccuracy(byF, inst.labels) == 1.0);
}

TEST_CASE("accuracy is invariant to label permutations") {
  const std::vector<int> a{0, 0, 1, 1, 2, 2};
  const std::vector<int> b{5, 5, 9, 9, 1, 1};
  CHECK(lab::clusteringAccuracy(a, b) == 1.0);
  const std::vector<int> c{5, 5, 9, 1, 1, 1};
  CHECK(lab::clusteringAccuracy(a, c) == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("accuracy falls back to the assignment solver beyond six clusters") {
  std::vector<int> a, b;
  for (int v = 0; v < 8; ++v) {
    for (int rep = 0; rep < 3; ++rep) {
      a.push_back(v);
      b.push_back((v + 3) % 8); // permuted labels, still a perfect match
    }
  }
  CHECK(lab::clusteringAccuracy(a, b) == 1.0);
  b[0] = b[3];
  CHECK(lab::clusteringAccuracy(a, b) == doctest::Approx(23.0 / 24.0));
}

TEST_CASE("nmi handles degenerate partitions") {
  const std::vector<int> single{3, 3, 3};
  CHECK(lab::normalizedMutualInfo(single, single) == 1.0);
  const std::vector<int> split{0, 1, 2};
  CHECK(lab::normalizedMutualInfo(single, split) == 0.0);
}

TEST_CASE("spectral clustering validates the affinity") {
  Matrix notSym(2, 2);
  notSym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(lab::spectralCluster(notSym, 2, 1), ValidationError);
  Matrix negative = Matrix::Ones(2, 2);
  negative(0, 1) = negative(1, 0) = -1.0;
  CHECK_THROWS_AS(lab::spectralCluster(negative, 2, 1), ValidationError);
  CHECK_THROWS_AS(lab::spectralCluster(Matrix::Ones(2, 2), 3, 1), ValidationError);
}

TEST_SUITE_END();
