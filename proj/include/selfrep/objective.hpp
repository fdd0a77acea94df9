#pragma once

#include "selfrep/matrix.hpp"

#include <string>
#include <vector>

namespace selfrep {

enum class NormOnC { frobenius, nuclear };
enum class Constraint { exact, relaxed };
enum class Noise { none, gaussian, laplacian, sampleSpecific };

const char* toString(NormOnC v);
const char* toString(Constraint v);
const char* toString(Noise v);

// One problem family: the norm on C, the constraint mode, the noise model and
// its weights. lambda is required exactly when noise != none, gamma exactly
// when the constraint is relaxed.
struct ObjectiveSpec {
  NormOnC normOnC = NormOnC::frobenius;
  Constraint constraint = Constraint::exact;
  Noise noise = Noise::none;
  double lambda = 0.0; // corruption weight
  double gamma = 0.0;  // relaxation weight

  void validate() const;
  // True for the rows solvable in closed form (noise none or gaussian).
  bool closedForm() const;
  std::string label() const; // e.g. "fnr/relaxed/gaussian"
};

enum class Method { closedForm, alm };

// Solver output: coefficients plus the clean-dictionary split D = D0 + E.
struct Representation {
  Matrix c;
  Matrix d0;
  Matrix e;
  Index k = 0; // retained rank
  double objective = 0.0;
  Method method = Method::closedForm;
  ObjectiveSpec spec;
  std::vector<std::string> diagnostics;
};

// Value of the spec's objective at (c, d0, e) given data d. The noise term is
// evaluated on e; relaxed residuals on d (noise-free) or d0 (corrupted).
double objectiveValue(const ObjectiveSpec& spec, const Matrix& d, const Matrix& c,
                      const Matrix& d0, const Matrix& e);

} // namespace selfrep
