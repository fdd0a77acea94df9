#include "selfrep/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace selfrep {

namespace {

Representation makeRep(Matrix c, Matrix d0, Matrix e, Index k, ObjectiveSpec spec,
                       const Matrix& d, std::vector<std::string> diagnostics = {}) {
  Representation rep;
  rep.c = std::move(c);
  rep.d0 = std::move(d0);
  rep.e = std::move(e);
  rep.k = k;
  rep.method = Method::closedForm;
  rep.spec = spec;
  rep.diagnostics = std::move(diagnostics);
  rep.objective = objectiveValue(spec, d, rep.c, rep.d0, rep.e);
  return rep;
}

void requirePositive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ValidationError(std::string(what) + " must be positive and finite");
  }
}

// Safeguarded Newton inside a sign-change bracket; falls back to bisection
// whenever a Newton step leaves the bracket.
template <typename F, typename DF>
double solveBracketed(const F& f, const DF& df, double a, double b, double fa, double fb) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) {
    throw NumericalError("scalar inversion: root bracket exhausted");
  }
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    if (b - a <= 1e-15 * (1.0 + std::abs(a) + std::abs(b))) break;
    const double g = df(x);
    double next = g != 0.0 ? x - fx / g : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    x = next;
  }
  return 0.5 * (a + b);
}

void appendSorted(std::vector<double>& roots, double w) {
  for (double r : roots) {
    if (std::abs(r - w) <= 1e-9 * (1.0 + std::abs(w))) return; // duplicate
  }
  roots.push_back(w);
  std::sort(roots.begin(), roots.end());
}

const char* kBoundaryNote =
    "singular value at the 1/sqrt(gamma) branch boundary; zero-shrinkage branch taken";

bool nearBoundary(double value, double boundary) {
  return std::abs(value - boundary) <= 1e-12 * (1.0 + boundary);
}

} // namespace

Index selectK(const Vector& sigmaDescending, double weight) {
  requirePositive(weight, "selectK: weight");
  const Index p = sigmaDescending.size();
  for (Index i = 0; i + 1 < p; ++i) {
    if (sigmaDescending(i + 1) > sigmaDescending(i)) {
      throw ValidationError("selectK: sigma must be sorted descending");
    }
  }
  Index best = 0;
  double bestCost = std::numeric_limits<double>::infinity();
  for (Index r = 0; r <= p; ++r) {
    double tail = 0.0;
    for (Index i = r; i < p; ++i) tail += sigmaDescending(i) * sigmaDescending(i);
    const double cost = static_cast<double>(r) + weight * tail;
    if (cost < bestCost) {
      bestCost = cost;
      best = r;
    }
  }
  return best;
}

Representation fnrExact(const Matrix& x, const Matrix& d, const Tolerances& tol,
                        NormOnC normOnC) {
  tol.validate();
  requireNonZero(d, "fnrExact: d");
  requireFinite(x, "fnrExact: x");
  if (x.rows() != d.rows()) {
    throw ValidationError("fnrExact: x and d must have the same row count");
  }

  const SvdFactors f = svd(d, SvdKind::skinny, tol);
  const Matrix dPinv = f.v * f.sigma.cwiseInverse().asDiagonal() * f.u.transpose();
  Matrix c = dPinv * x;

  const double residual = (d * c - x).norm();
  if (residual > tol.equivTol * x.norm()) {
    throw ValidationError("fnrExact: x is not in span(d); no feasible solution");
  }

  ObjectiveSpec spec{normOnC, Constraint::exact, Noise::none, 0.0, 0.0};
  return makeRep(std::move(c), d, Matrix::Zero(d.rows(), d.cols()), f.numericalRank, spec, d);
}

Representation shapeInteraction(const Matrix& d, const Tolerances& tol, NormOnC normOnC) {
  tol.validate();
  requireNonZero(d, "shapeInteraction: d");
  const SvdFactors f = svd(d, SvdKind::skinny, tol);
  Matrix c = f.v * f.v.transpose();
  ObjectiveSpec spec{normOnC, Constraint::exact, Noise::none, 0.0, 0.0};
  return makeRep(std::move(c), d, Matrix::Zero(d.rows(), d.cols()), f.numericalRank, spec, d);
}

Representation exactGaussian(const Matrix& d, double lambda, NormOnC normOnC,
                             const Tolerances& tol) {
  tol.validate();
  requireNonZero(d, "exactGaussian: d");
  requirePositive(lambda, "exactGaussian: lambda");

  const SvdFactors f = svd(d, SvdKind::full, tol);
  const double weight = normOnC == NormOnC::frobenius ? lambda : 0.5 * lambda;
  const Index k = selectK(f.sigma, weight);

  const Index n = d.cols();
  Matrix c = Matrix::Zero(n, n);
  Matrix d0 = Matrix::Zero(d.rows(), n);
  std::vector<std::string> diagnostics;
  if (k > 0) {
    const Matrix vk = f.v.leftCols(k);
    c = vk * vk.transpose();
    d0 = f.u.leftCols(k) * f.sigma.head(k).asDiagonal() * vk.transpose();
  } else {
    diagnostics.push_back("k = 0: every singular value truncated, C = 0 and E = D");
  }
  ObjectiveSpec spec{normOnC, Constraint::exact, Noise::gaussian, lambda, 0.0};
  Matrix e = d - d0;
  return makeRep(std::move(c), std::move(d0), std::move(e), k, spec, d, std::move(diagnostics));
}

Representation fnrRelaxed(const Matrix& d, double gamma, const Tolerances& tol) {
  tol.validate();
  requireNonZero(d, "fnrRelaxed: d");
  requirePositive(gamma, "fnrRelaxed: gamma");

  const SvdFactors f = svd(d, SvdKind::skinny, tol);
  Vector phi(f.count());
  for (Index i = 0; i < f.count(); ++i) {
    const double s2 = f.sigma(i) * f.sigma(i);
    phi(i) = 1.0 - 1.0 / (1.0 + gamma * s2);
  }
  Matrix c = f.v * phi.asDiagonal() * f.v.transpose();
  ObjectiveSpec spec{NormOnC::frobenius, Constraint::relaxed, Noise::none, 0.0, gamma};
  return makeRep(std::move(c), d, Matrix::Zero(d.rows(), d.cols()), f.numericalRank, spec, d);
}

Representation nnrRelaxed(const Matrix& d, double gamma, const Tolerances& tol) {
  tol.validate();
  requireNonZero(d, "nnrRelaxed: d");
  requirePositive(gamma, "nnrRelaxed: gamma");

  const SvdFactors f = svd(d, SvdKind::skinny, tol);
  const double boundary = 1.0 / std::sqrt(gamma);
  Vector phi(f.count());
  Index k = 0;
  std::vector<std::string> diagnostics;
  for (Index i = 0; i < f.count(); ++i) {
    const double s = f.sigma(i);
    if (s > boundary) {
      phi(i) = 1.0 - 1.0 / (gamma * s * s);
      ++k;
    } else {
      phi(i) = 0.0;
      if (nearBoundary(s, boundary)) diagnostics.push_back(kBoundaryNote);
    }
  }
  Matrix c = f.v * phi.asDiagonal() * f.v.transpose();
  ObjectiveSpec spec{NormOnC::nuclear, Constraint::relaxed, Noise::none, 0.0, gamma};
  return makeRep(std::move(c), d, Matrix::Zero(d.rows(), d.cols()), k, spec, d,
                 std::move(diagnostics));
}

double fnrSigmaFromOmega(double omega, double lambda, double gamma) {
  requirePositive(lambda, "fnrSigmaFromOmega: lambda");
  requirePositive(gamma, "fnrSigmaFromOmega: gamma");
  const double q = 1.0 + gamma * omega * omega;
  return omega + gamma * omega / (lambda * q * q);
}

double nnrSigmaFromOmega(double omega, double lambda, double gamma) {
  requirePositive(lambda, "nnrSigmaFromOmega: lambda");
  requirePositive(gamma, "nnrSigmaFromOmega: gamma");
  const double boundary = 1.0 / std::sqrt(gamma);
  if (omega > boundary) return omega + 1.0 / (lambda * gamma * omega * omega * omega);
  return omega + (gamma / lambda) * omega;
}

double fnrIndexCost(double sigma, double omega, double lambda, double gamma) {
  const double u = gamma * omega * omega;
  const double shrink = u / (1.0 + u);
  const double resid = omega / (1.0 + u); // singular value of D0 - D0 C at this index
  const double err = sigma - omega;
  return 0.5 * shrink * shrink + 0.5 * lambda * err * err + 0.5 * gamma * resid * resid;
}

double nnrIndexCost(double sigma, double omega, double lambda, double gamma) {
  const double err = sigma - omega;
  const double boundary = 1.0 / std::sqrt(gamma);
  if (omega > boundary) {
    const double shrink = 1.0 - 1.0 / (gamma * omega * omega);
    const double resid = 1.0 / (gamma * omega);
    return shrink + 0.5 * lambda * err * err + 0.5 * gamma * resid * resid;
  }
  return 0.5 * lambda * err * err + 0.5 * gamma * omega * omega;
}

std::vector<double> fnrOmegaRoots(double sigma, double lambda, double gamma) {
  requirePositive(sigma, "fnrOmegaRoots: sigma");
  requirePositive(lambda, "fnrOmegaRoots: lambda");
  requirePositive(gamma, "fnrOmegaRoots: gamma");

  const double c = gamma / lambda;
  auto f = [&](double w) { return fnrSigmaFromOmega(w, lambda, gamma) - sigma; };
  auto df = [&](double w) {
    const double u = gamma * w * w;
    const double q = 1.0 + u;
    return 1.0 + c * (1.0 - 3.0 * u) / (q * q * q);
  };

  // Any root sits in [sigma/(1+c), sigma]; the lower bound is widened a hair
  // so the endpoint sign survives rounding.
  const double lo = sigma / (1.0 + c) * (1.0 - 1e-9);
  const double hi = sigma;

  // f is piecewise monotone with breakpoints where (1+u)^3 = c (3u - 1),
  // u = gamma w^2. That cubic has positive roots only when c > 4.
  std::vector<double> breaks{lo};
  if (c > 4.0) {
    auto p = [&](double u) {
      const double q = 1.0 + u;
      return q * q * q - c * (3.0 * u - 1.0);
    };
    auto bisectCubic = [&](double a, double b) {
      double pa = p(a);
      for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + b); ++it) {
        const double mid = 0.5 * (a + b);
        const double pm = p(mid);
        if ((pm < 0.0) == (pa < 0.0)) {
          a = mid;
          pa = pm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    };
    const double uc = std::sqrt(c) - 1.0; // minimizer of the cubic on u > 0
    if (p(uc) < 0.0) {
      const double u1 = bisectCubic(0.0, uc);
      const double u2 = bisectCubic(uc, 3.0 * c + 3.0);
      for (double u : {u1, u2}) {
        const double w = std::sqrt(u / gamma);
        if (w > lo && w < hi) breaks.push_back(w);
      }
    }
  }
  breaks.push_back(hi);
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i];
    const double b = breaks[i + 1];
    const double fa = f(a);
    const double fb = f(b);
    if (fa == 0.0) {
      appendSorted(roots, a);
      continue;
    }
    if (fb == 0.0) {
      appendSorted(roots, b);
      continue;
    }
    if ((fa < 0.0) != (fb < 0.0)) {
      appendSorted(roots, solveBracketed(f, df, a, b, fa, fb));
    }
  }
  return roots;
}

std::vector<double> nnrOmegaRoots(double sigma, double lambda, double gamma) {
  requirePositive(sigma, "nnrOmegaRoots: sigma");
  requirePositive(lambda, "nnrOmegaRoots: lambda");
  requirePositive(gamma, "nnrOmegaRoots: gamma");

  std::vector<double> roots;
  const double boundary = 1.0 / std::sqrt(gamma);

  // Low branch is linear: sigma = omega (1 + gamma/lambda).
  const double low = lambda * sigma / (lambda + gamma);
  if (low <= boundary) appendSorted(roots, low);

  // High branch: sigma = omega + omega^{-3}/(lambda gamma) on (boundary, sigma].
  if (sigma > boundary) {
    auto f = [&](double w) { return w + 1.0 / (lambda * gamma * w * w * w) - sigma; };
    auto df = [&](double w) { return 1.0 - 3.0 / (lambda * gamma * w * w * w * w); };
    const double wstar = std::pow(3.0 / (lambda * gamma), 0.25); // minimizer of the map
    std::vector<double> breaks{boundary};
    if (wstar > boundary && wstar < sigma) breaks.push_back(wstar);
    breaks.push_back(sigma);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double a = breaks[i];
      const double b = breaks[i + 1];
      const double fa = f(a);
      const double fb = f(b);
      double root = std::numeric_limits<double>::quiet_NaN();
      if (fa == 0.0) {
        root = a;
      } else if (fb == 0.0) {
        root = b;
      } else if ((fa < 0.0) != (fb < 0.0)) {
        root = solveBracketed(f, df, a, b, fa, fb);
      }
      if (std::isfinite(root) && root > boundary) appendSorted(roots, root);
    }
  }
  return roots;
}

namespace {

double pickMinCost(const std::vector<double>& roots, double sigma, double lambda, double gamma,
                   bool nuclear, const char* what) {
  if (roots.empty()) {
    throw NumericalError(std::string(what) + ": no feasible root found");
  }
  double best = roots.front();
  double bestCost = nuclear ? nnrIndexCost(sigma, best, lambda, gamma)
                            : fnrIndexCost(sigma, best, lambda, gamma);
  for (std::size_t i = 1; i < roots.size(); ++i) {
    const double cost = nuclear ? nnrIndexCost(sigma, roots[i], lambda, gamma)
                                : fnrIndexCost(sigma, roots[i], lambda, gamma);
    if (cost < bestCost) {
      bestCost = cost;
      best = roots[i];
    }
  }
  return best;
}

} // namespace

double solveOmegaFnr(double sigma, double lambda, double gamma) {
  return pickMinCost(fnrOmegaRoots(sigma, lambda, gamma), sigma, lambda, gamma, false,
                     "solveOmegaFnr");
}

double solveOmegaNnr(double sigma, double lambda, double gamma) {
  return pickMinCost(nnrOmegaRoots(sigma, lambda, gamma), sigma, lambda, gamma, true,
                     "solveOmegaNnr");
}

Representation relaxedGaussian(const Matrix& d, double lambda, double gamma, NormOnC normOnC,
                               const Tolerances& tol) {
  tol.validate();
  requireNonZero(d, "relaxedGaussian: d");
  requirePositive(lambda, "relaxedGaussian: lambda");
  requirePositive(gamma, "relaxedGaussian: gamma");

  const SvdFactors f = svd(d, SvdKind::skinny, tol);
  const Index r = f.count();
  const double boundary = 1.0 / std::sqrt(gamma);

  Vector omega(r);
  Vector phi(r);
  Index k = 0;
  std::vector<std::string> diagnostics;
  bool multiRoot = false;
  for (Index i = 0; i < r; ++i) {
    if (normOnC == NormOnC::frobenius) {
      const auto roots = fnrOmegaRoots(f.sigma(i), lambda, gamma);
      multiRoot = multiRoot || roots.size() > 1;
      omega(i) = pickMinCost(roots, f.sigma(i), lambda, gamma, false, "relaxedGaussian");
      const double u = gamma * omega(i) * omega(i);
      phi(i) = 1.0 - 1.0 / (1.0 + u);
      ++k;
    } else {
      const auto roots = nnrOmegaRoots(f.sigma(i), lambda, gamma);
      multiRoot = multiRoot || roots.size() > 1;
      omega(i) = pickMinCost(roots, f.sigma(i), lambda, gamma, true, "relaxedGaussian");
      if (omega(i) > boundary) {
        phi(i) = 1.0 - 1.0 / (gamma * omega(i) * omega(i));
        ++k;
      } else {
        phi(i) = 0.0;
        if (nearBoundary(omega(i), boundary)) diagnostics.push_back(kBoundaryNote);
      }
    }
  }
  if (multiRoot) {
    diagnostics.push_back(
        "scalar inversion had multiple feasible roots; kept the per-index cost minimizer");
  }

  Matrix d0 = f.u * omega.asDiagonal() * f.v.transpose();
  Matrix c = f.v * phi.asDiagonal() * f.v.transpose();
  ObjectiveSpec spec{normOnC, Constraint::relaxed, Noise::gaussian, lambda, gamma};
  Matrix e = d - d0;
  return makeRep(std::move(c), std::move(d0), std::move(e), k, spec, d, std::move(diagnostics));
}

Representation solveClosedForm(const ObjectiveSpec& spec, const Matrix& d,
                               const Tolerances& tol) {
  spec.validate();
  if (!spec.closedForm()) {
    throw ValidationError("solveClosedForm: " + spec.label() +
                          " has no closed form; use the alm solver");
  }
  Representation rep;
  if (spec.constraint == Constraint::exact) {
    rep = spec.noise == Noise::none ? shapeInteraction(d, tol, spec.normOnC)
                                    : exactGaussian(d, spec.lambda, spec.normOnC, tol);
  } else if (spec.noise == Noise::none) {
    rep = spec.normOnC == NormOnC::frobenius ? fnrRelaxed(d, spec.gamma, tol)
                                             : nnrRelaxed(d, spec.gamma, tol);
  } else {
    rep = relaxedGaussian(d, spec.lambda, spec.gamma, spec.normOnC, tol);
  }
  rep.spec = spec;
  return rep;
}

} // namespace selfrep
