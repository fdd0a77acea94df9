#pragma once

#include "selfrep/matrix.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace selfrep::lab {

enum class CorruptionKind { none, gaussian, laplacian, outlierColumns };

struct Corruption {
  CorruptionKind kind = CorruptionKind::none;
  double stddev = 0.0;    // gaussian: entrywise N(0, stddev^2)
  double scale = 0.0;     // laplacian: entrywise Laplace(0, scale)
  double fraction = 0.0;  // outlierColumns: fraction of columns hit, in [0, 1)
  double magnitude = 0.0; // outlierColumns: l2 norm of the added column error
};

struct SubspaceSpec {
  int dim = 0;
  int pointCount = 0;
};

struct SyntheticSpec {
  int ambientDim = 0;
  std::vector<SubspaceSpec> subspaces;
  Corruption noise;
  std::uint64_t seed = 0;

  void validate() const;
  int totalPoints() const;
};

struct Instance {
  Matrix data;  // clean + error
  Matrix clean; // unit-norm columns drawn from the union of subspaces
  Matrix error;
  std::vector<int> labels;                // subspace id per column
  std::vector<Index> corruptedColumns;    // outlierColumns only
};

// Columns are random orthonormal basis x standard normal coefficients per
// subspace, unit-normalized, then corrupted. Bit-deterministic under seed.
Instance generate(const SyntheticSpec& spec);

// Adds +-magnitude at a random entry subset (ceil-free: round(fraction * size))
// and returns the hit positions. For planting sparse corruption in tests.
std::vector<std::pair<Index, Index>> plantSparseSpikes(Matrix& a, double fraction,
                                                       double magnitude,
                                                       std::mt19937_64& rng);

// W = (|C| + |C^T|)/2, optionally with the diagonal zeroed.
Matrix affinity(const Matrix& c, bool zeroDiagonal = false);

// Normalized-Laplacian embedding (bottom k eigenvectors of I - D^-1/2 W D^-1/2,
// degrees regularized by 1e-12), row-normalized, then seeded k-means with
// 20 restarts. Returns one label per row/column of W.
std::vector<int> spectralCluster(const Matrix& w, int k, std::uint64_t seed);

// Best-mapping agreement in [0, 1]: exhaustive over label permutations for
// up to 6 clusters, Hungarian assignment beyond that.
double clusteringAccuracy(const std::vector<int>& predicted,
                          const std::vector<int>& reference);

// Mutual information normalized by sqrt(H(a) H(b)), in [0, 1].
double normalizedMutualInfo(const std::vector<int>& a, const std::vector<int>& b);

struct ClusterResult {
  std::vector<int> labels;
  double accuracy = 0.0;
  double nmi = 0.0;
};

ClusterResult evaluateClustering(std::vector<int> predicted,
                                 const std::vector<int>& reference);

} // namespace selfrep::lab
