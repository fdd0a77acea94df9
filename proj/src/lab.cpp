#include "selfrep/lab.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace selfrep::lab {

void SyntheticSpec::validate() const {
  if (ambientDim < 1) throw ValidationError("synthetic spec: ambientDim must be >= 1");
  if (subspaces.empty()) throw ValidationError("synthetic spec: need at least one subspace");
  for (const SubspaceSpec& s : subspaces) {
    if (s.dim < 1 || s.pointCount < 1) {
      throw ValidationError("synthetic spec: subspace dim and pointCount must be >= 1");
    }
    if (s.dim >= ambientDim) {
      throw ValidationError("synthetic spec: subspace dim must be below the ambient dim");
    }
  }
  if (noise.kind == CorruptionKind::outlierColumns &&
      (noise.fraction < 0.0 || noise.fraction >= 1.0)) {
    throw ValidationError("synthetic spec: outlier fraction must be in [0, 1)");
  }
}

int SyntheticSpec::totalPoints() const {
  int n = 0;
  for (const SubspaceSpec& s : subspaces) n += s.pointCount;
  return n;
}

namespace {

Matrix gaussianMatrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
  }
  return out;
}

double laplaceSample(double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const double u = unit(rng);
  return -scale * (u < 0.0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
}

// k distinct indices from [0, n), Fisher-Yates prefix.
std::vector<Index> sampleIndices(Index n, Index k, std::mt19937_64& rng) {
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(all[i], all[pick(rng)]);
  }
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

} // namespace

Instance generate(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);

  const Index m = spec.ambientDim;
  const Index n = spec.totalPoints();

  Instance inst;
  inst.clean.resize(m, n);
  inst.labels.reserve(n);

  Index col = 0;
  int label = 0;
  for (const SubspaceSpec& sub : spec.subspaces) {
    const Matrix seedBlock = gaussianMatrix(m, sub.dim, rng);
    Eigen::HouseholderQR<Matrix> qr(seedBlock);
    const Matrix basis = qr.householderQ() * Matrix::Identity(m, sub.dim);
    const Matrix coeffs = gaussianMatrix(sub.dim, sub.pointCount, rng);
    Matrix points = basis * coeffs;
    for (Index j = 0; j < points.cols(); ++j) {
      const double nrm = points.col(j).norm();
      if (nrm > 0.0) points.col(j) /= nrm;
      inst.labels.push_back(label);
    }
    inst.clean.middleCols(col, sub.pointCount) = points;
    col += sub.pointCount;
    ++label;
  }

  inst.error = Matrix::Zero(m, n);
  switch (spec.noise.kind) {
    case CorruptionKind::none:
      break;
    case CorruptionKind::gaussian:
      inst.error = spec.noise.stddev * gaussianMatrix(m, n, rng);
      break;
    case CorruptionKind::laplacian:
      for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < n; ++j) inst.error(i, j) = laplaceSample(spec.noise.scale, rng);
      }
      break;
    case CorruptionKind::outlierColumns: {
      const Index hit = static_cast<Index>(std::llround(spec.noise.fraction * n));
      inst.corruptedColumns = sampleIndices(n, hit, rng);
      for (Index j : inst.corruptedColumns) {
        Vector dir = gaussianMatrix(m, 1, rng).col(0);
        const double nrm = dir.norm();
        if (nrm > 0.0) dir /= nrm;
        inst.error.col(j) = spec.noise.magnitude * dir;
      }
      break;
    }
  }
  inst.data = inst.clean + inst.error;
  return inst;
}

std::vector<std::pair<Index, Index>> plantSparseSpikes(Matrix& a, double fraction,
                                                       double magnitude,
                                                       std::mt19937_64& rng) {
  if (fraction < 0.0 || fraction >= 1.0) {
    throw ValidationError("plantSparseSpikes: fraction must be in [0, 1)");
  }
  const Index total = a.size();
  const Index hit = static_cast<Index>(std::llround(fraction * total));
  std::bernoulli_distribution sign(0.5);
  std::vector<std::pair<Index, Index>> positions;
  positions.reserve(hit);
  for (Index flat : sampleIndices(total, hit, rng)) {
    const Index i = flat / a.cols();
    const Index j = flat % a.cols();
    a(i, j) += sign(rng) ? magnitude : -magnitude;
    positions.emplace_back(i, j);
  }
  return positions;
}

Matrix affinity(const Matrix& c, bool zeroDiagonal) {
  requireFinite(c, "affinity");
  if (c.rows() != c.cols()) throw ValidationError("affinity: c must be square");
  Matrix w = 0.5 * (c.cwiseAbs() + c.transpose().cwiseAbs());
  if (zeroDiagonal) w.diagonal().setZero();
  return w;
}

namespace {

struct KMeansRun {
  std::vector<int> labels;
  double inertia = std::numeric_limits<double>::infinity();
};

KMeansRun kmeansOnce(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centroids(k, points.cols());
  const std::vector<Index> seeds = sampleIndices(n, k, rng);
  for (int c = 0; c < k; ++c) centroids.row(c) = points.row(seeds[c]);

  std::vector<int> assign(n, -1);
  for (int pass = 0; pass < 100; ++pass) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int bestC = 0;
      double bestDist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double dist = (points.row(i) - centroids.row(c)).squaredNorm();
        if (dist < bestDist) {
          bestDist = dist;
          bestC = c;
        }
      }
      if (assign[i] != bestC) {
        assign[i] = bestC;
        changed = true;
      }
    }
    if (!changed) break;

    centroids.setZero();
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      centroids.row(assign[i]) += points.row(i);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) /= static_cast<double>(counts[c]);
      } else {
        // reseed an emptied cluster at the point farthest from its centroid
        Index far = 0;
        double farDist = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double dist = (points.row(i) - centroids.row(assign[i])).squaredNorm();
          if (dist > farDist) {
            farDist = dist;
            far = i;
          }
        }
        centroids.row(c) = points.row(far);
      }
    }
  }

  KMeansRun run;
  run.labels = std::move(assign);
  run.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    run.inertia += (points.row(i) - centroids.row(run.labels[i])).squaredNorm();
  }
  return run;
}

std::vector<int> kmeans(const Matrix& points, int k, std::uint64_t seed, int restarts) {
  std::mt19937_64 rng(seed);
  KMeansRun best;
  for (int r = 0; r < restarts; ++r) {
    KMeansRun run = kmeansOnce(points, k, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.labels;
}

} // namespace

std::vector<int> spectralCluster(const Matrix& w, int k, std::uint64_t seed) {
  requireFinite(w, "spectralCluster: w");
  if (w.rows() != w.cols()) throw ValidationError("spectralCluster: w must be square");
  if (k < 1) throw ValidationError("spectralCluster: k must be >= 1");
  if (k > w.rows()) throw ValidationError("spectralCluster: k exceeds the point count");
  if (maxAbsDiff(w, Matrix(w.transpose())) > 1e-10 * (1.0 + maxAbs(w))) {
    throw ValidationError("spectralCluster: w must be symmetric");
  }
  if (w.minCoeff() < -1e-12) {
    throw ValidationError("spectralCluster: w must be nonnegative");
  }

  const Index n = w.rows();
  Vector degree = w.rowwise().sum();
  Vector dInvSqrt(n);
  for (Index i = 0; i < n; ++i) dInvSqrt(i) = 1.0 / std::sqrt(degree(i) + 1e-12);

  Matrix lap = Matrix::Identity(n, n) -
               dInvSqrt.asDiagonal() * w * dInvSqrt.asDiagonal();
  lap = 0.5 * (lap + Matrix(lap.transpose()));

  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("spectralCluster: eigensolver failed");
  }
  Matrix embedding = eig.eigenvectors().leftCols(k); // ascending eigenvalues
  for (Index i = 0; i < n; ++i) {
    const double nrm = embedding.row(i).norm();
    if (nrm > 0.0) embedding.row(i) /= nrm;
  }
  return kmeans(embedding, k, seed, 20);
}

namespace {

// Contingency table with compacted label ids.
std::vector<std::vector<Index>> contingency(const std::vector<int>& a,
                                            const std::vector<int>& b, int& ka, int& kb) {
  std::map<int, int> mapA, mapB;
  for (int v : a) mapA.emplace(v, 0);
  for (int v : b) mapB.emplace(v, 0);
  int next = 0;
  for (auto& kv : mapA) kv.second = next++;
  next = 0;
  for (auto& kv : mapB) kv.second = next++;
  ka = static_cast<int>(mapA.size());
  kb = static_cast<int>(mapB.size());
  std::vector<std::vector<Index>> table(ka, std::vector<Index>(kb, 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++table[mapA.at(a[i])][mapB.at(b[i])];
  }
  return table;
}

// Max-weight assignment score via the shortest-augmenting-path Hungarian
// method on the negated (cost) matrix.
double assignmentScore(const std::vector<std::vector<Index>>& weight) {
  const int rows = static_cast<int>(weight.size());
  const int cols = static_cast<int>(weight[0].size());
  const int n = std::max(rows, cols);
  const double kInf = std::numeric_limits<double>::infinity();

  // cost[i][j] = -weight, padded square
  std::vector<std::vector<double>> cost(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cost[i + 1][j + 1] =
          (i < rows && j < cols) ? -static_cast<double>(weight[i][j]) : 0.0;
    }
  }

  std::vector<double> potU(n + 1, 0.0), potV(n + 1, 0.0);
  std::vector<int> matchedRow(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    matchedRow[0] = i;
    int j0 = 0;
    std::vector<double> minV(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = matchedRow[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - potU[i0] - potV[j];
        if (cur < minV[j]) {
          minV[j] = cur;
          way[j] = j0;
        }
        if (minV[j] < delta) {
          delta = minV[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          potU[matchedRow[j]] += delta;
          potV[j] -= delta;
        } else {
          minV[j] -= delta;
        }
      }
      j0 = j1;
    } while (matchedRow[j0] != 0);
    do {
      const int j1 = way[j0];
      matchedRow[j0] = matchedRow[j1];
      j0 = j1;
    } while (j0);
  }

  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    const int i = matchedRow[j];
    if (i >= 1 && i <= rows && j <= cols) total += static_cast<double>(weight[i - 1][j - 1]);
  }
  return total;
}

} // namespace

double clusteringAccuracy(const std::vector<int>& predicted,
                          const std::vector<int>& reference) {
  if (predicted.size() != reference.size() || predicted.empty()) {
    throw ValidationError("clusteringAccuracy: label vectors must be nonempty and equal size");
  }
  int ka = 0, kb = 0;
  const auto table = contingency(predicted, reference, ka, kb);

  double matched = 0.0;
  if (std::max(ka, kb) <= 6) {
    // exhaustive over mappings of the smaller side
    const bool mapRows = ka <= kb;
    const int small = mapRows ? ka : kb;
    const int large = mapRows ? kb : ka;
    std::vector<int> perm(large);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double sum = 0.0;
      for (int s = 0; s < small; ++s) {
        sum += static_cast<double>(mapRows ? table[s][perm[s]] : table[perm[s]][s]);
      }
      matched = std::max(matched, sum);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    matched = assignmentScore(table);
  }
  return matched / static_cast<double>(predicted.size());
}

double normalizedMutualInfo(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw ValidationError("normalizedMutualInfo: label vectors must be nonempty and equal size");
  }
  int ka = 0, kb = 0;
  const auto table = contingency(a, b, ka, kb);
  const double n = static_cast<double>(a.size());

  std::vector<double> rowSum(ka, 0.0), colSum(kb, 0.0);
  for (int i = 0; i < ka; ++i) {
    for (int j = 0; j < kb; ++j) {
      rowSum[i] += static_cast<double>(table[i][j]);
      colSum[j] += static_cast<double>(table[i][j]);
    }
  }

  double mi = 0.0;
  for (int i = 0; i < ka; ++i) {
    for (int j = 0; j < kb; ++j) {
      const double nij = static_cast<double>(table[i][j]);
      if (nij > 0.0) mi += (nij / n) * std::log(n * nij / (rowSum[i] * colSum[j]));
    }
  }
  double ha = 0.0, hb = 0.0;
  for (double v : rowSum) {
    if (v > 0.0) ha -= (v / n) * std::log(v / n);
  }
  for (double v : colSum) {
    if (v > 0.0) hb -= (v / n) * std::log(v / n);
  }
  if (ha == 0.0 || hb == 0.0) {
    return ka == 1 && kb == 1 ? 1.0 : 0.0;
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

ClusterResult evaluateClustering(std::vector<int> predicted,
                                 const std::vector<int>& reference) {
  ClusterResult result;
  result.accuracy = clusteringAccuracy(predicted, reference);
  result.nmi = normalizedMutualInfo(predicted, reference);
  result.labels = std::move(predicted);
  return result;
}

} // namespace selfrep::lab
