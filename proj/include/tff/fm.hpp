#pragma once

/* Exact Fourier-Motzkin feasibility with native strict inequalities and
 * witness extraction by back substitution.  Intended for small systems
 * (certificate searches), not bulk geometry. */

#include <optional>
#include <vector>

#include "tff/rational.hpp"

namespace tff::poly {

struct LinCons {
  QVec a;
  Rat b = 0;           // a.x + b  (>= | > | ==)  0
  bool strict = false;
  bool eq = false;
};

struct FMResult {
  bool feasible = false;
  QVec witness;  // valid iff feasible
};

FMResult fm_feasible(int nvars, std::vector<LinCons> cons);

}  // namespace tff::poly
