#pragma once

/* Constructive synthesis: given a facewise affine member of the rational
 * class, produce an explicit min-plus rational expression p2 - p1 equal to it
 * on its support, via an arrangement completion and a strictly convex
 * potential. */

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tff/pwa.hpp"

namespace tff::synth {

using cx::Arrangement;
using cx::ArrangementCompletion;
using trop::AffineForm;

/* Sum of absolute values of the arrangement forms, carried by the
 * arrangement complex; strictly convex there.  supports holds the exact
 * facewise sign choices: supports[cell][i] in {-1,0,1} is the sign of
 * hyperplane i on that cell. */
struct ConvexPotential {
  pwa::FacewiseAffine h;
  std::vector<std::vector<int>> signs;
};

ConvexPotential build_convex_potential(const Arrangement& arr);

/* Least integer lambda >= 1 with
 *   lambda*(pot[t] - pot[s]) >= fun[s] - fun[t]  on cell t, for all s, t.
 * Checked on generators; exact. */
Int compute_lambda(const cx::PolyhedralComplex& sigma_beta,
                   const std::vector<AffineForm>& pot, const std::vector<AffineForm>& fun);

struct SynthesisResult {
  trop::TropRationalExpr expression;
  Int lambda;
  ArrangementCompletion completion;
  /* Aligned with completion.sigma_beta.maximal(); only maximal cells carry
   * terms of the expression. */
  std::vector<AffineForm> pot_forms;
  std::vector<AffineForm> fun_forms;
};

struct SynthesisError {
  enum Kind { NotInRat, CapExceeded } kind;
  std::string detail;
  std::optional<pwa::RatWitness> witness;
};

using SynthesisOutcome = std::variant<SynthesisResult, SynthesisError>;

SynthesisOutcome synthesize(const pwa::FacewiseAffine& f, size_t max_hyperplanes = 64);

struct VerifyReport {
  bool ok = false;
  std::string detail;
  std::optional<QVec> witness;
};

/* Re-derives the attainment inequalities on generators, checks integrality
 * of every term, and compares the expression against f exactly on the
 * support. */
VerifyReport verify_synthesis(const pwa::FacewiseAffine& f, const SynthesisResult& r);

}  // namespace tff::synth
