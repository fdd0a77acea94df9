#include "selfrep/objective.hpp"

namespace selfrep {

const char* toString(NormOnC v) {
  return v == NormOnC::frobenius ? "frobenius" : "nuclear";
}

const char* toString(Constraint v) {
  return v == Constraint::exact ? "exact" : "relaxed";
}

const char* toString(Noise v) {
  switch (v) {
    case Noise::none: return "none";
    case Noise::gaussian: return "gaussian";
    case Noise::laplacian: return "laplacian";
    case Noise::sampleSpecific: return "sample-specific";
  }
  return "?";
}

void ObjectiveSpec::validate() const {
  if (noise == Noise::none) {
    if (lambda != 0.0) throw ValidationError("spec: lambda is only meaningful with a noise model");
  } else if (!(lambda > 0.0)) {
    throw ValidationError("spec: lambda must be positive when a noise model is set");
  }
  if (constraint == Constraint::relaxed) {
    if (!(gamma > 0.0)) throw ValidationError("spec: gamma must be positive for the relaxed constraint");
  } else if (gamma != 0.0) {
    throw ValidationError("spec: gamma is only meaningful for the relaxed constraint");
  }
}

bool ObjectiveSpec::closedForm() const {
  return noise == Noise::none || noise == Noise::gaussian;
}

std::string ObjectiveSpec::label() const {
  std::string s = normOnC == NormOnC::frobenius ? "fnr" : "nnr";
  s += "/";
  s += toString(constraint);
  s += "/";
  s += toString(noise);
  return s;
}

namespace {

double nuclearOf(const Matrix& c) { return nuclearNorm(c); }

} // namespace

double objectiveValue(const ObjectiveSpec& spec, const Matrix& d, const Matrix& c,
                      const Matrix& d0, const Matrix& e) {
  spec.validate();
  requireFinite(d, "objectiveValue: d");
  requireFinite(c, "objectiveValue: c");
  requireFinite(d0, "objectiveValue: d0");
  requireFinite(e, "objectiveValue: e");
  if (c.rows() != d.cols()) {
    throw ValidationError("objectiveValue: c must have one row per column of d");
  }
  requireSameShape(d, d0, "objectiveValue: d0");
  requireSameShape(d, e, "objectiveValue: e");

  double value = 0.0;
  if (spec.normOnC == NormOnC::nuclear) {
    value += nuclearOf(c);
  } else if (spec.constraint == Constraint::exact && spec.noise == Noise::none) {
    value += c.norm(); // the noise-free exact row carries the plain |C|_F
  } else {
    value += 0.5 * c.squaredNorm();
  }

  const bool relaxed = spec.constraint == Constraint::relaxed;
  if (relaxed && c.rows() != c.cols()) {
    throw ValidationError("objectiveValue: relaxed rows need a square c");
  }

  switch (spec.noise) {
    case Noise::none:
      if (relaxed) value += 0.5 * spec.gamma * (d - d * c).squaredNorm();
      break;
    case Noise::gaussian:
      if (relaxed) {
        value += 0.5 * spec.lambda * (d - d0).squaredNorm();
        value += 0.5 * spec.gamma * (d0 - d0 * c).squaredNorm();
      } else {
        value += 0.5 * spec.lambda * e.squaredNorm();
      }
      break;
    case Noise::laplacian:
      value += spec.lambda * l1Norm(e);
      break;
    case Noise::sampleSpecific:
      value += spec.lambda * l21Norm(e);
      break;
  }
  return value;
}

} // namespace selfrep
