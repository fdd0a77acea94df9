#include "selfrep/alm.hpp"

#include "selfrep/io.hpp"
#include "selfrep/operators.hpp"
#include "selfrep/solvers.hpp"
#include "selfrep/svd.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace selfrep {

void AlmConfig::validate() const {
  if (!(rho > 1.0)) throw ValidationError("alm: rho must be > 1");
  if (maxIter < 1) throw ValidationError("alm: maxIter must be >= 1");
  if (!(residTol > 0.0)) throw ValidationError("alm: residTol must be positive");
  if (alpha0 < 0.0) throw ValidationError("alm: alpha0 must be nonnegative");
  if (weight < 0.0) throw ValidationError("alm: weight must be nonnegative");
}

std::string AlmTrace::toCsv() const {
  std::ostringstream out;
  out << "iter,residual,alpha,k,objective\n";
  for (const AlmIterate& it : iterations) {
    out << it.iter << ',' << formatValue(it.residual) << ',' << formatValue(it.alpha) << ','
        << it.k << ',' << formatValue(it.objective) << '\n';
  }
  return out.str();
}

namespace {

struct EngineParams {
  Noise noise = Noise::laplacian;
  double rankWeight = 0.0;  // selectK weight
  double shrinkCoeff = 0.0; // E-threshold numerator, applied as coeff / alpha
};

struct EngineState {
  Matrix d0;
  Matrix e;
  Matrix y;
  Matrix vK; // right singular vectors of the current truncation, n x k
  Index k = 0;
  double residual = std::numeric_limits<double>::infinity();
};

EngineState initState(const Matrix& d) {
  EngineState s;
  s.d0 = Matrix::Zero(d.rows(), d.cols());
  s.e = Matrix::Zero(d.rows(), d.cols());
  s.y = Matrix::Zero(d.rows(), d.cols());
  return s;
}

// One pass of: SVD of D - E + Y/alpha, rank truncation at selectK, proximal
// E update, multiplier update.
void engineStep(const Matrix& d, double dNorm, double alpha, const EngineParams& p,
                const Tolerances& tol, EngineState& s) {
  const Matrix work = d - s.e + s.y / alpha;
  const SvdFactors f = svd(work, SvdKind::full, tol);
  s.k = selectK(f.sigma, p.rankWeight);
  if (s.k > 0) {
    s.vK = f.v.leftCols(s.k);
    s.d0 = f.u.leftCols(s.k) * f.sigma.head(s.k).asDiagonal() * s.vK.transpose();
  } else {
    s.vK = Matrix::Zero(d.cols(), 0);
    s.d0.setZero();
  }

  const Matrix g = d - s.d0 + s.y / alpha;
  const double threshold = p.shrinkCoeff / alpha;
  s.e = p.noise == Noise::laplacian ? softThreshold(g, threshold) : columnShrink(g, threshold);

  const Matrix gap = d - s.d0 - s.e;
  s.y += alpha * gap;
  s.residual = gap.norm() / dNorm;
}

Matrix projectorOf(const EngineState& s, Index n) {
  if (s.k == 0) return Matrix::Zero(n, n);
  return s.vK * s.vK.transpose();
}

// |C|_F^2 = |C|_* = k for the projector C, so the trace objective needs no C.
double traceObjective(NormOnC norm, Noise noise, double weight, const EngineState& s) {
  const double cTerm = norm == NormOnC::frobenius ? 0.5 * static_cast<double>(s.k)
                                                  : static_cast<double>(s.k);
  const double eTerm = noise == Noise::laplacian ? l1Norm(s.e) : l21Norm(s.e);
  return cTerm + weight * eTerm;
}

void requireIterativeSpec(const ObjectiveSpec& spec) {
  if (spec.constraint != Constraint::exact ||
      (spec.noise != Noise::laplacian && spec.noise != Noise::sampleSpecific)) {
    throw ValidationError("almSolve: only the exact-constraint laplacian / sample-specific "
                          "rows are iterative; got " + spec.label());
  }
}

} // namespace

AlmResult almSolve(const ObjectiveSpec& spec, const Matrix& d, const AlmConfig& cfg,
                   const Tolerances& tol) {
  spec.validate();
  cfg.validate();
  tol.validate();
  requireIterativeSpec(spec);
  requireNonZero(d, "almSolve: d");

  const double weight = cfg.weight > 0.0 ? cfg.weight : spec.lambda;
  EngineParams params;
  params.noise = spec.noise;
  params.rankWeight = spec.normOnC == NormOnC::frobenius ? weight : 0.5 * weight;
  params.shrinkCoeff = weight;

  const double dNorm = d.norm();
  double alpha = cfg.alpha0 > 0.0 ? cfg.alpha0 : 1.0 / spectralNorm(d);

  EngineState state = initState(d);
  EngineState best;
  AlmTrace trace;
  trace.iterations.reserve(static_cast<std::size_t>(cfg.maxIter));

  for (int it = 1; it <= cfg.maxIter; ++it) {
    engineStep(d, dNorm, alpha, params, tol, state);
    trace.iterations.push_back(
        {it, state.residual, alpha, state.k,
         traceObjective(spec.normOnC, spec.noise, weight, state)});
    if (state.residual < best.residual) best = state;
    if (state.residual <= cfg.residTol) {
      trace.converged = true;
      break;
    }
    alpha *= cfg.rho;
  }

  Representation rep;
  rep.c = projectorOf(best, d.cols());
  rep.d0 = best.d0;
  rep.e = best.e;
  rep.k = best.k;
  rep.method = Method::alm;
  rep.spec = spec;
  rep.spec.lambda = weight;
  rep.objective = objectiveValue(rep.spec, d, rep.c, rep.d0, rep.e);
  if (!trace.converged) {
    std::ostringstream note;
    note << "did not reach residual " << cfg.residTol << " in " << cfg.maxIter
         << " iterations; kept the best iterate at residual " << best.residual;
    rep.diagnostics.push_back(note.str());
  }
  return {std::move(rep), std::move(trace)};
}

std::string AlmEquivalenceReport::header() const {
  std::ostringstream out;
  out << "fnr_weight = " << formatValue(fnrWeight) << '\n'
      << "nnr_weight = " << formatValue(nnrWeight) << '\n'
      << "fnr_rank_weight = " << formatValue(fnrRankWeight) << '\n'
      << "fnr_shrink_coeff = " << formatValue(fnrShrinkCoeff) << '\n'
      << "nnr_rank_weight = " << formatValue(nnrRankWeight) << '\n'
      << "nnr_shrink_coeff = " << formatValue(nnrShrinkCoeff) << '\n'
      << "note = the nuclear run applies half its weight in both the rank rule and the "
         "shrink threshold, matching the frobenius rules at nnr_weight = 2 fnr_weight\n";
  return out.str();
}

AlmEquivalenceReport equivalenceCheckAlm(const Matrix& d, Noise noise, double lambdaF,
                                         const AlmConfig& cfg, double nnrWeight,
                                         const Tolerances& tol) {
  cfg.validate();
  tol.validate();
  requireNonZero(d, "equivalenceCheckAlm: d");
  if (noise != Noise::laplacian && noise != Noise::sampleSpecific) {
    throw ValidationError("equivalenceCheckAlm: noise must be laplacian or sample-specific");
  }
  if (!(lambdaF > 0.0)) throw ValidationError("equivalenceCheckAlm: lambdaF must be positive");
  if (nnrWeight <= 0.0) nnrWeight = 2.0 * lambdaF;

  EngineParams fnr{noise, lambdaF, lambdaF};
  EngineParams nnr{noise, 0.5 * nnrWeight, 0.5 * nnrWeight};

  const double dNorm = d.norm();
  double alpha = cfg.alpha0 > 0.0 ? cfg.alpha0 : 1.0 / spectralNorm(d);

  EngineState sF = initState(d);
  EngineState sN = initState(d);

  AlmEquivalenceReport report;
  report.fnrWeight = lambdaF;
  report.nnrWeight = nnrWeight;
  report.fnrRankWeight = fnr.rankWeight;
  report.fnrShrinkCoeff = fnr.shrinkCoeff;
  report.nnrRankWeight = nnr.rankWeight;
  report.nnrShrinkCoeff = nnr.shrinkCoeff;

  for (int it = 1; it <= cfg.maxIter; ++it) {
    engineStep(d, dNorm, alpha, fnr, tol, sF);
    engineStep(d, dNorm, alpha, nnr, tol, sN);

    AlmLockstepIterate row;
    row.iter = it;
    row.kFnr = sF.k;
    row.kNnr = sN.k;
    row.devD0 = maxAbsDiff(sF.d0, sN.d0);
    row.devE = maxAbsDiff(sF.e, sN.e);
    row.devC = maxAbsDiff(projectorOf(sF, d.cols()), projectorOf(sN, d.cols()));
    row.residualFnr = sF.residual;
    row.residualNnr = sN.residual;
    report.iterations.push_back(row);

    report.maxDeviation =
        std::max({report.maxDeviation, row.devD0, row.devE, row.devC});
    report.kDiverged = report.kDiverged || sF.k != sN.k;

    report.fnrConverged = sF.residual <= cfg.residTol;
    report.nnrConverged = sN.residual <= cfg.residTol;
    if (report.fnrConverged && report.nnrConverged) break;
    alpha *= cfg.rho;
  }
  return report;
}

} // namespace selfrep
