// selfrep: Frobenius- and nuclear-norm self-expressive representations.
// Subcommands: solve, alm, equiv, bench, generate.

#include "selfrep/alm.hpp"
#include "selfrep/io.hpp"
#include "selfrep/lab.hpp"
#include "selfrep/objective.hpp"
#include "selfrep/oracles.hpp"
#include "selfrep/solvers.hpp"
#include "selfrep/svd.hpp"

#include <CLI11.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace selfrep;

namespace {

constexpr const char* kToolVersion = "selfrep 0.1.0";

struct RunConfig {
  std::string norm = "f";
  std::string constraint = "exact";
  std::string noise = "none";
  double lambda = 0.0;
  double gamma = 0.0;
  std::string inPath;
  std::string outDir = ".";
  std::uint64_t seed = 0;
  bool skipHeader = false;

  double tol = 1e-8;      // equivalence tolerance
  double rankTol = 1e-10;
  double reconTol = 1e-8;

  double alpha0 = 0.0;
  double rho = 1.1;
  int maxIter = 500;
  double residTol = 1e-7;

  // equiv synthetic input
  int rows = 0;
  int cols = 0;
  int rank = 0;

  // generate
  int ambient = 0;
  std::string subspaces;       // "dim:count,dim:count,..."
  std::string noiseModel = "none"; // none | gauss:STD | lap:SCALE | outliers:FRAC:MAG

  // bench
  std::string sizes = "32,64,128";
  int reps = 3;

  Tolerances tolerances() const { return Tolerances{rankTol, reconTol, tol}; }

  ObjectiveSpec spec() const {
    ObjectiveSpec s;
    if (norm == "f") {
      s.normOnC = NormOnC::frobenius;
    } else if (norm == "nuc") {
      s.normOnC = NormOnC::nuclear;
    } else {
      throw ValidationError("--norm must be f or nuc");
    }
    if (constraint == "exact") {
      s.constraint = Constraint::exact;
    } else if (constraint == "relaxed") {
      s.constraint = Constraint::relaxed;
    } else {
      throw ValidationError("--constraint must be exact or relaxed");
    }
    if (noise == "none") {
      s.noise = Noise::none;
    } else if (noise == "gauss") {
      s.noise = Noise::gaussian;
    } else if (noise == "lap") {
      s.noise = Noise::laplacian;
    } else if (noise == "l21") {
      s.noise = Noise::sampleSpecific;
    } else {
      throw ValidationError("--noise must be none, gauss, lap, or l21");
    }
    s.lambda = lambda;
    s.gamma = gamma;
    s.validate();
    return s;
  }
};

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    const auto now = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(now - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

// Report body: human-readable header plus key = value sections. Timings go in
// a trailing section so repeated runs produce byte-identical bodies.
class Report {
public:
  explicit Report(const std::string& command) {
    body_ << "# " << kToolVersion << " " << command << " report\n";
  }

  void section(const std::string& name) { body_ << "\n[" << name << "]\n"; }
  void kv(const std::string& key, const std::string& value) {
    body_ << key << " = " << value << "\n";
  }
  void kv(const std::string& key, double value) { kv(key, formatValue(value)); }
  void kv(const std::string& key, std::int64_t value) { kv(key, std::to_string(value)); }

  void check(const std::string& name, double dev, double tol, bool gate) {
    body_ << "check = " << name << " ; dev = " << formatValue(dev)
          << " ; tol = " << formatValue(tol)
          << " ; status = " << (gate ? (dev <= tol ? "PASS" : "FAIL") : "INFO") << "\n";
  }

  void timing(const std::string& key, double ms) {
    timings_ << key << "_ms = " << formatValue(ms) << "\n";
  }

  void write(const fs::path& path) const {
    writeTextFile(path, body_.str() + "\n[timings]\n" + timings_.str());
  }

private:
  std::ostringstream body_;
  std::ostringstream timings_;
};

void echoParams(Report& report, const RunConfig& cfg) {
  report.section("params");
  report.kv("norm", cfg.norm);
  report.kv("constraint", cfg.constraint);
  report.kv("noise", cfg.noise);
  report.kv("lambda", cfg.lambda);
  report.kv("gamma", cfg.gamma);
  report.kv("seed", static_cast<std::int64_t>(cfg.seed));
  report.kv("equiv_tol", cfg.tol);
  report.kv("rank_tol", cfg.rankTol);
  report.kv("recon_tol", cfg.reconTol);
  report.kv("alpha0", cfg.alpha0);
  report.kv("rho", cfg.rho);
  report.kv("max_iter", static_cast<std::int64_t>(cfg.maxIter));
  report.kv("resid_tol", cfg.residTol);
  if (!cfg.inPath.empty()) report.kv("in", cfg.inPath);
  report.kv("out_dir", cfg.outDir);
}

std::string joinDiagnostics(const std::vector<std::string>& diags) {
  if (diags.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) out += " | ";
    out += diags[i];
  }
  return out;
}

std::string spectrumString(const Vector& sigma) {
  std::string out;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (i) out += ',';
    out += formatValue(sigma(i));
  }
  return out;
}

Matrix loadInput(const RunConfig& cfg) {
  if (cfg.inPath.empty()) throw ValidationError("--in is required");
  return readMatrixCsv(cfg.inPath, cfg.skipHeader);
}

Matrix randomLowRank(int rows, int cols, int rank, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw ValidationError("--rows/--cols must be >= 1");
  const int rmax = std::min(rows, cols);
  if (rank < 1 || rank > rmax) throw ValidationError("--rank must be in [1, min(rows, cols)]");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(rows, rank), b(rank, cols);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
  }
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) b(i, j) = normal(rng);
  }
  return a * b / std::sqrt(static_cast<double>(rank));
}

void writeRepresentation(const fs::path& dir, const Representation& rep) {
  writeMatrixCsv(dir / "C.csv", rep.c);
  writeMatrixCsv(dir / "D0.csv", rep.d0);
  writeMatrixCsv(dir / "E.csv", rep.e);
}

void resultSection(Report& report, const Matrix& d, const Representation& rep,
                   const Tolerances& tol) {
  report.section("results");
  report.kv("rows", static_cast<std::int64_t>(d.rows()));
  report.kv("cols", static_cast<std::int64_t>(d.cols()));
  report.kv("method", rep.method == Method::closedForm ? "closed-form" : "alm");
  report.kv("problem", rep.spec.label());
  report.kv("k", static_cast<std::int64_t>(rep.k));
  report.kv("objective", rep.objective);
  report.kv("spectrum", spectrumString(svd(d, SvdKind::full, tol).sigma));
  report.kv("diagnostics", joinDiagnostics(rep.diagnostics));
  report.kv("files", "C.csv,D0.csv,E.csv");
}

int cmdSolve(const RunConfig& cfg) {
  Timer total;
  const ObjectiveSpec spec = cfg.spec();
  if (!spec.closedForm()) {
    throw ValidationError("solve handles the closed-form rows only; use `alm` for " +
                          spec.label());
  }
  const Matrix d = loadInput(cfg);
  const Tolerances tol = cfg.tolerances();

  Timer solveTimer;
  const Representation rep = solveClosedForm(spec, d, tol);
  const double solveMs = solveTimer.ms();

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  writeRepresentation(dir, rep);

  Report report("solve");
  echoParams(report, cfg);
  resultSection(report, d, rep, tol);
  report.timing("solve", solveMs);
  report.timing("total", total.ms());
  report.write(dir / "report.txt");
  return 0;
}

int cmdAlm(const RunConfig& cfg) {
  Timer total;
  const ObjectiveSpec spec = cfg.spec();
  const Matrix d = loadInput(cfg);
  const Tolerances tol = cfg.tolerances();
  AlmConfig alm{cfg.alpha0, cfg.rho, cfg.maxIter, cfg.residTol, 0.0};

  Timer solveTimer;
  const AlmResult result = almSolve(spec, d, alm, tol);
  const double solveMs = solveTimer.ms();

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  writeRepresentation(dir, result.rep);
  writeTextFile(dir / "trace.csv", result.trace.toCsv());

  Report report("alm");
  echoParams(report, cfg);
  resultSection(report, d, result.rep, tol);
  report.kv("converged", result.trace.converged ? "true" : "false");
  report.kv("iterations", static_cast<std::int64_t>(result.trace.iterations.size()));
  report.kv("final_residual", result.trace.iterations.back().residual);
  report.kv("trace", "trace.csv");
  report.timing("solve", solveMs);
  report.timing("total", total.ms());
  report.write(dir / "report.txt");
  return 0;
}

void auditExactNoiseFree(Report& report, const Matrix& d, const Tolerances& tol) {
  const Representation byPinv = fnrExact(d, d, tol);
  const Representation byShape = shapeInteraction(d, tol);
  report.check("exact-none/pinv-vs-shape", maxAbsDiff(byPinv.c, byShape.c), tol.equivTol, true);

  double idem = 0.0, sym = 0.0;
  for (const Representation* rep : {&byPinv, &byShape}) {
    idem = std::max(idem, maxAbsDiff(Matrix(rep->c * rep->c), rep->c));
    sym = std::max(sym, maxAbsDiff(rep->c, Matrix(rep->c.transpose())));
  }
  report.check("exact-none/projector-idempotent", idem, tol.equivTol, true);
  report.check("exact-none/projector-symmetric", sym, tol.equivTol, true);

  const Matrix p = pinv(d, tol);
  double mp = 0.0;
  mp = std::max(mp, maxAbsDiff(Matrix(d * p * d), d));
  mp = std::max(mp, maxAbsDiff(Matrix(p * d * p), p));
  mp = std::max(mp, maxAbsDiff(Matrix((d * p).transpose()), Matrix(d * p)));
  mp = std::max(mp, maxAbsDiff(Matrix((p * d).transpose()), Matrix(p * d)));
  report.check("exact-none/moore-penrose", mp, tol.equivTol, true);
}

void auditExactGaussian(Report& report, const Matrix& d, double lambda, const Tolerances& tol) {
  const Representation byF = exactGaussian(d, lambda, NormOnC::frobenius, tol);
  const Representation byN = exactGaussian(d, 2.0 * lambda, NormOnC::nuclear, tol);
  report.check("exact-gaussian/k-reconciled-c", maxAbsDiff(byF.c, byN.c), 1e-10, true);
  report.check("exact-gaussian/k-reconciled-rank",
               std::abs(static_cast<double>(byF.k - byN.k)), 0.0, true);

  const SvdFactors f = svd(d, SvdKind::full, tol);
  const double kGap =
      std::abs(static_cast<double>(selectK(f.sigma, lambda) - bruteForceK(f.sigma, lambda)));
  report.check("exact-gaussian/select-k-oracle", kGap, 0.0, true);

  // objective at the chosen k must beat every other truncation rank
  double worstMargin = 0.0;
  for (Index r = 0; r <= f.count(); ++r) {
    if (r == byF.k) continue;
    Matrix cr = Matrix::Zero(d.cols(), d.cols());
    Matrix d0r = Matrix::Zero(d.rows(), d.cols());
    if (r > 0) {
      const Matrix vr = f.v.leftCols(r);
      cr = vr * vr.transpose();
      d0r = f.u.leftCols(r) * f.sigma.head(r).asDiagonal() * vr.transpose();
    }
    const double objR = objectiveValue(byF.spec, d, cr, d0r, Matrix(d - d0r));
    worstMargin = std::min(worstMargin, objR - byF.objective);
  }
  report.check("exact-gaussian/truncation-optimal", -worstMargin, 1e-12, true);
}

void auditRelaxedNoiseFree(Report& report, const Matrix& d, double gamma,
                           const Tolerances& tol) {
  const Representation byF = fnrRelaxed(d, gamma, tol);
  const Representation byN = nnrRelaxed(d, gamma, tol);

  report.check("relaxed-none/fnr-vs-ridge", maxAbsDiff(byF.c, ridgeSolution(d, gamma)),
               1e-9, true);

  const OracleReport stat = stationarityCheck(byF.spec, d, byF);
  report.check("relaxed-none/fnr-stationarity", stat.maxDeviation, stat.tolerance, true);
  report.check("relaxed-none/fnr-finite-diff", stat.objectiveGap, 1e-4, true);

  const Matrix prox = proximalNuclear(d, gamma);
  const double proxObj = objectiveValue(byN.spec, d, prox, d, Matrix(Matrix::Zero(d.rows(), d.cols())));
  report.check("relaxed-none/nnr-vs-proximal-objective", byN.objective - proxObj, 1e-7, true);

  // expected NONequivalence of the two closed forms, reported, not gated
  report.check("relaxed-none/fnr-vs-nnr", maxAbsDiff(byF.c, byN.c), tol.equivTol, false);

  // both solutions live on the same retained column space
  Eigen::SelfAdjointEigenSolver<Matrix> eigF(byF.c);
  Eigen::SelfAdjointEigenSolver<Matrix> eigN(byN.c);
  std::vector<Index> keepF;
  for (Index i = 0; i < eigF.eigenvalues().size(); ++i) {
    if (eigF.eigenvalues()(i) > 1e-12) keepF.push_back(i);
  }
  Matrix basisF(d.cols(), static_cast<Index>(keepF.size()));
  for (std::size_t i = 0; i < keepF.size(); ++i) basisF.col(static_cast<Index>(i)) = eigF.eigenvectors().col(keepF[i]);
  double worstAlign = 1.0;
  for (Index i = 0; i < eigN.eigenvalues().size(); ++i) {
    if (eigN.eigenvalues()(i) <= 1e-12) continue;
    const Vector v = eigN.eigenvectors().col(i);
    worstAlign = std::min(worstAlign, (basisF.transpose() * v).norm());
  }
  report.check("relaxed-none/shared-column-space", 1.0 - worstAlign, 1e-8, true);
}

void auditRelaxedGaussian(Report& report, const Matrix& d, double lambda, double gamma,
                          const Tolerances& tol) {
  const Representation byF = relaxedGaussian(d, lambda, gamma, NormOnC::frobenius, tol);
  const Representation byN = relaxedGaussian(d, lambda, gamma, NormOnC::nuclear, tol);

  for (const Representation* rep : {&byF, &byN}) {
    const OracleReport stat = stationarityCheck(rep->spec, d, *rep);
    const std::string tag = rep->spec.normOnC == NormOnC::frobenius ? "fnr" : "nnr";
    report.check("relaxed-gaussian/" + tag + "-stationarity", stat.maxDeviation,
                 stat.tolerance, true);
    report.check("relaxed-gaussian/" + tag + "-finite-diff", stat.objectiveGap, 1e-4, true);
    report.check("relaxed-gaussian/" + tag + "-split-consistency",
                 maxAbsDiff(d, Matrix(rep->d0 + rep->e)), tol.equivTol, true);
  }
  report.check("relaxed-gaussian/fnr-vs-nnr", maxAbsDiff(byF.c, byN.c), tol.equivTol, false);
}

void auditAlm(Report& report, const Matrix& d, Noise noise, double lambda,
              const RunConfig& cfg, const Tolerances& tol) {
  AlmConfig alm{cfg.alpha0, cfg.rho, cfg.maxIter, cfg.residTol, 0.0};
  const AlmEquivalenceReport lockstep = equivalenceCheckAlm(d, noise, lambda, alm, 0.0, tol);
  report.check("alm-lockstep/max-deviation", lockstep.maxDeviation, 1e-10, true);
  report.check("alm-lockstep/k-diverged", lockstep.kDiverged ? 1.0 : 0.0, 0.0, true);
  report.check("alm-lockstep/fnr-converged", lockstep.fnrConverged ? 0.0 : 1.0, 0.0, true);
  report.check("alm-lockstep/nnr-converged", lockstep.nnrConverged ? 0.0 : 1.0, 0.0, true);

  // unreconciled pairing shown for contrast, not gated
  const AlmEquivalenceReport mismatched =
      equivalenceCheckAlm(d, noise, lambda, alm, lambda, tol);
  report.check("alm-mismatched/max-deviation", mismatched.maxDeviation, 1e-10, false);
  report.check("alm-mismatched/k-diverged", mismatched.kDiverged ? 1.0 : 0.0, 0.0, false);
}

int cmdEquiv(const RunConfig& cfg) {
  Timer total;
  const ObjectiveSpec spec = cfg.spec(); // validates the row and its weights
  const Tolerances tol = cfg.tolerances();

  Matrix d;
  if (!cfg.inPath.empty()) {
    d = readMatrixCsv(cfg.inPath, cfg.skipHeader);
  } else if (cfg.rows > 0) {
    d = randomLowRank(cfg.rows, cfg.cols > 0 ? cfg.cols : cfg.rows,
                      cfg.rank > 0 ? cfg.rank : std::min(cfg.rows, cfg.cols > 0 ? cfg.cols : cfg.rows),
                      cfg.seed);
  } else {
    throw ValidationError("equiv needs --in or --rows/--cols/--rank");
  }

  Report report("equiv");
  echoParams(report, cfg);
  report.section("checks");

  Timer auditTimer;
  if (spec.constraint == Constraint::exact && spec.noise == Noise::none) {
    auditExactNoiseFree(report, d, tol);
  } else if (spec.constraint == Constraint::exact && spec.noise == Noise::gaussian) {
    auditExactGaussian(report, d, spec.lambda, tol);
  } else if (spec.constraint == Constraint::relaxed && spec.noise == Noise::none) {
    auditRelaxedNoiseFree(report, d, spec.gamma, tol);
  } else if (spec.constraint == Constraint::relaxed && spec.noise == Noise::gaussian) {
    auditRelaxedGaussian(report, d, spec.lambda, spec.gamma, tol);
  } else {
    auditAlm(report, d, spec.noise, spec.lambda, cfg, tol);
  }

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  report.timing("audit", auditTimer.ms());
  report.timing("total", total.ms());
  report.write(dir / "report.txt");
  return 0;
}

int cmdBench(const RunConfig& cfg) {
  std::vector<int> sizes;
  {
    std::stringstream ss(cfg.sizes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) sizes.push_back(std::stoi(item));
    }
  }
  if (sizes.empty()) throw ValidationError("--sizes must name at least one size");
  if (cfg.reps < 1) throw ValidationError("--reps must be >= 1");

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  const Tolerances tol = cfg.tolerances();
  std::ostringstream csv;
  csv << "m,n,method,median_ms\n";
  for (int n : sizes) {
    const Matrix d = randomLowRank(n, n, std::max(1, n / 4), cfg.seed + static_cast<std::uint64_t>(n));
    std::vector<double> tShape, tGauss, tAlm;
    for (int rep = 0; rep < cfg.reps; ++rep) {
      Timer t1;
      shapeInteraction(d, tol);
      tShape.push_back(t1.ms());
      Timer t2;
      exactGaussian(d, 1.0, NormOnC::frobenius, tol);
      tGauss.push_back(t2.ms());
      Timer t3;
      ObjectiveSpec spec{NormOnC::frobenius, Constraint::exact, Noise::laplacian, 0.5, 0.0};
      almSolve(spec, d, AlmConfig{cfg.alpha0, cfg.rho, cfg.maxIter, cfg.residTol, 0.0}, tol);
      tAlm.push_back(t3.ms());
    }
    csv << n << ',' << n << ",closed-form-noise-free," << formatValue(median(tShape)) << '\n';
    csv << n << ',' << n << ",closed-form-gaussian," << formatValue(median(tGauss)) << '\n';
    csv << n << ',' << n << ",alm-laplacian," << formatValue(median(tAlm)) << '\n';
  }

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  writeTextFile(dir / "bench.csv", csv.str());
  return 0;
}

lab::Corruption parseNoiseModel(const std::string& text) {
  lab::Corruption c;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.empty()) throw ValidationError("--noise-model is empty");
  if (parts[0] == "none" && parts.size() == 1) {
    c.kind = lab::CorruptionKind::none;
  } else if (parts[0] == "gauss" && parts.size() == 2) {
    c.kind = lab::CorruptionKind::gaussian;
    c.stddev = std::stod(parts[1]);
  } else if (parts[0] == "lap" && parts.size() == 2) {
    c.kind = lab::CorruptionKind::laplacian;
    c.scale = std::stod(parts[1]);
  } else if (parts[0] == "outliers" && parts.size() == 3) {
    c.kind = lab::CorruptionKind::outlierColumns;
    c.fraction = std::stod(parts[1]);
    c.magnitude = std::stod(parts[2]);
  } else {
    throw ValidationError("--noise-model must be none, gauss:STD, lap:SCALE, or "
                          "outliers:FRAC:MAG");
  }
  return c;
}

int cmdGenerate(const RunConfig& cfg) {
  Timer total;
  lab::SyntheticSpec spec;
  spec.ambientDim = cfg.ambient;
  spec.seed = cfg.seed;
  spec.noise = parseNoiseModel(cfg.noiseModel);
  {
    std::stringstream ss(cfg.subspaces);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) {
        throw ValidationError("--subspaces must be dim:count,dim:count,...");
      }
      spec.subspaces.push_back(
          {std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
    }
  }

  const lab::Instance inst = lab::generate(spec);

  const fs::path dir(cfg.outDir);
  fs::create_directories(dir);
  writeMatrixCsv(dir / "data.csv", inst.data);
  writeLabelsCsv(dir / "labels.csv", inst.labels);
  writeMatrixCsv(dir / "clean.csv", inst.clean);
  writeMatrixCsv(dir / "error.csv", inst.error);

  Report report("generate");
  echoParams(report, cfg);
  report.section("results");
  report.kv("ambient_dim", static_cast<std::int64_t>(spec.ambientDim));
  report.kv("points", static_cast<std::int64_t>(spec.totalPoints()));
  report.kv("subspaces", cfg.subspaces);
  report.kv("noise_model", cfg.noiseModel);
  report.kv("corrupted_columns", static_cast<std::int64_t>(inst.corruptedColumns.size()));
  report.kv("error_fro", inst.error.norm());
  report.kv("files", "data.csv,labels.csv,clean.csv,error.csv");
  report.timing("total", total.ms());
  report.write(dir / "report.txt");
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frobenius- and nuclear-norm self-expressive representations"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto addSpecFlags = [&cfg](CLI::App* sub) {
    sub->add_option("--norm", cfg.norm, "norm on C: f | nuc")->capture_default_str();
    sub->add_option("--constraint", cfg.constraint, "exact | relaxed")->capture_default_str();
    sub->add_option("--noise", cfg.noise, "none | gauss | lap | l21")->capture_default_str();
    sub->add_option("--lambda", cfg.lambda, "corruption weight (required with noise)");
    sub->add_option("--gamma", cfg.gamma, "relaxation weight (required when relaxed)");
  };
  auto addIoFlags = [&cfg](CLI::App* sub, bool needsIn) {
    if (needsIn) {
      sub->add_option("--in", cfg.inPath, "input matrix CSV");
      sub->add_flag("--skip-header", cfg.skipHeader, "skip the first line of --in");
    }
    sub->add_option("--out-dir", cfg.outDir, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "equivalence tolerance")->capture_default_str();
    sub->add_option("--rank-tol", cfg.rankTol, "relative numerical-rank threshold")
        ->capture_default_str();
    sub->add_option("--recon-tol", cfg.reconTol, "relative SVD reconstruction tolerance")
        ->capture_default_str();
  };
  auto addAlmFlags = [&cfg](CLI::App* sub) {
    sub->add_option("--alpha0", cfg.alpha0, "initial penalty (0 = 1/|D|_2)")
        ->capture_default_str();
    sub->add_option("--rho", cfg.rho, "penalty growth factor")->capture_default_str();
    sub->add_option("--max-iter", cfg.maxIter, "iteration cap")->capture_default_str();
    sub->add_option("--resid-tol", cfg.residTol, "relative feasibility residual target")
        ->capture_default_str();
  };

  CLI::App* solve = app.add_subcommand("solve", "closed-form solve of one problem row");
  addSpecFlags(solve);
  addIoFlags(solve, true);

  CLI::App* alm = app.add_subcommand("alm", "iterative ALM solve (laplacian / l21 rows)");
  addSpecFlags(alm);
  addIoFlags(alm, true);
  addAlmFlags(alm);

  CLI::App* equiv = app.add_subcommand("equiv", "equivalence audit with oracles");
  addSpecFlags(equiv);
  addIoFlags(equiv, true);
  addAlmFlags(equiv);
  equiv->add_option("--rows", cfg.rows, "rows of the synthetic input (when no --in)");
  equiv->add_option("--cols", cfg.cols, "cols of the synthetic input");
  equiv->add_option("--rank", cfg.rank, "rank of the synthetic input");

  CLI::App* bench = app.add_subcommand("bench", "timing grid: closed form vs ALM");
  addIoFlags(bench, false);
  addAlmFlags(bench);
  bench->add_option("--sizes", cfg.sizes, "comma list of square sizes")->capture_default_str();
  bench->add_option("--reps", cfg.reps, "repetitions per cell (median reported)")
      ->capture_default_str();

  CLI::App* gen = app.add_subcommand("generate", "synthetic union-of-subspaces instance");
  addIoFlags(gen, false);
  gen->add_option("--ambient", cfg.ambient, "ambient dimension")->required();
  gen->add_option("--subspaces", cfg.subspaces, "dim:count,dim:count,...")->required();
  gen->add_option("--noise-model", cfg.noiseModel,
                  "none | gauss:STD | lap:SCALE | outliers:FRAC:MAG")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(solve)) return cmdSolve(cfg);
    if (app.got_subcommand(alm)) return cmdAlm(cfg);
    if (app.got_subcommand(equiv)) return cmdEquiv(cfg);
    if (app.got_subcommand(bench)) return cmdBench(cfg);
    if (app.got_subcommand(gen)) return cmdGenerate(cfg);
    throw ValidationError("no subcommand selected");
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
