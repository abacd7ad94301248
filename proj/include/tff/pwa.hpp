#pragma once

/* Piecewise affine functions carried by a polyhedral complex: one integral
 * affine form per maximal cell, matching on shared faces.  Membership in the
 * rational function class, convexity certificates, dominating scales and
 * exact equality tests live here. */

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tff/abstract.hpp"
#include "tff/complexes.hpp"
#include "tff/trop_core.hpp"

namespace tff::pwa {

using cx::PolyhedralComplex;
using poly::Polyhedron;
using trop::AffineForm;
using trop::QAffineForm;

/* Provenance for complexes realized from an abstract complex.  ancestor maps
 * each cell key (possibly of a refinement) to the Delta-element whose
 * realization contains the cell; it steers which half-lines count as
 * parallel. */
struct AbstractTag {
  std::shared_ptr<const cx::AbstractComplex> abs;
  std::map<std::string, size_t> ancestor;
};

class FacewiseAffine {
 public:
  /* pieces maps maximal-cell index to its form.  Fails (nullopt + issues)
   * when a maximal cell lacks a form or two forms disagree on a shared
   * face. */
  static std::optional<FacewiseAffine> make(std::shared_ptr<const PolyhedralComplex> cx,
                                            const std::map<size_t, AffineForm>& pieces,
                                            std::vector<std::string>& issues,
                                            std::optional<AbstractTag> tag = std::nullopt);

  const PolyhedralComplex& complex() const { return *cx_; }
  std::shared_ptr<const PolyhedralComplex> complex_ptr() const { return cx_; }
  const std::optional<AbstractTag>& tag() const { return tag_; }

  /* Form on any cell; lower faces inherit from a containing maximal cell. */
  const AffineForm& form_on(size_t cell) const { return piece_[cell]; }
  Rat eval(const QVec& u) const;  // throws std::domain_error off the support

  /* Slope along a recession direction of the given cell. */
  Rat slope_at_infinity(size_t cell, const ZVec& r) const;

 private:
  std::shared_ptr<const PolyhedralComplex> cx_;
  std::vector<AffineForm> piece_;
  std::optional<AbstractTag> tag_;
};

/* Two half-lines with a common direction on whose classes the slopes
 * disagree. */
struct RatWitness {
  size_t cell_a = 0, cell_b = 0;
  ZVec direction;
  Rat slope_a, slope_b;
};

struct RatResult {
  bool member = false;
  std::optional<RatWitness> witness;
};

/* Membership in the rational class: equal slopes along parallel half-lines.
 * Abstract-tagged inputs identify half-lines through the ancestor poset;
 * plain embedded inputs identify them by direction vector. */
RatResult rat_membership(const FacewiseAffine& f);

/* Convexity data: per cell a supporting affine form agreeing with the
 * function on that cell and lying (strictly) below it on every coface.
 * Support slopes may be genuinely rational even for integral input. */
struct SupportForm {
  size_t cell = 0;
  QAffineForm form;
  bool integral = false;
};

struct ConvexityCertificate {
  bool strict = false;
  std::vector<SupportForm> supports;  // one per cell
};

struct ConvexityViolation {
  size_t cell = 0;        // cell with no (strict) support
  std::string detail;
};

using ConvexityOutcome = std::variant<ConvexityCertificate, ConvexityViolation>;

ConvexityOutcome convexity_check(const FacewiseAffine& h, bool strict);
ConvexityOutcome concavity_check(const FacewiseAffine& h, bool strict);

/* Independent re-validation of a certificate by direct evaluation. */
bool certificate_valid(const FacewiseAffine& h, const ConvexityCertificate& cert);

/* Pointwise minimum of two functions on the common refinement of their
 * complexes; refines further where the leaders change. */
FacewiseAffine fa_tropical_add(const FacewiseAffine& f, const FacewiseAffine& g);

/* Pointwise sum on the common refinement. */
FacewiseAffine fa_sum(const FacewiseAffine& f, const FacewiseAffine& g);

FacewiseAffine fa_negate(const FacewiseAffine& f);

/* Restriction of f to the cells of a subcomplex of its carrier (w's support
 * must lie inside f's). */
FacewiseAffine fa_restrict(const FacewiseAffine& f, const PolyhedralComplex& w);

struct ScaleFound {
  Int n;                              // minimal positive integer scale
  std::optional<QVec> below_witness;  // point where scale n-1 fails, when n > 1
};

struct NoFiniteScale {
  size_t cell = 0;   // piece with a recession direction where f stays flat but g grows
  ZVec direction;
};

struct ScalePreconditionFailure {
  std::string detail;
  std::optional<QVec> witness;
};

using ScaleOutcome = std::variant<ScaleFound, NoFiniteScale, ScalePreconditionFailure>;

/* Minimal positive integer n with n*f strictly above g outside the inner
 * region, given f, g vanish on the inner region, f >= 0, and f concave
 * piecewise on its carrier.  Exact: verification is polyhedral containment
 * per piece, not sampling. */
ScaleOutcome dominating_scale(const FacewiseAffine& f, const FacewiseAffine& g,
                              const Polyhedron& inner);

/* For convex h on a complete complex: affine forms whose pointwise maximum
 * equals h.  Requires convexity; throws std::invalid_argument otherwise. */
std::vector<AffineForm> max_affine_representation(const FacewiseAffine& h);

struct EqualOnResult {
  bool equal = false;
  std::optional<QVec> witness;   // point where values differ
  Rat lhs, rhs;                  // values at the witness
};

using EqTarget = std::variant<trop::TropRationalExpr, FacewiseAffine>;

/* Exact equality of two functions over the support of w.  Splits w by the
 * linearity structure of both sides; no sampling. */
EqualOnResult equal_on(const PolyhedralComplex& w, const EqTarget& a, const EqTarget& b);

Rat eval_target(const EqTarget& t, const QVec& u);

}  // namespace tff::pwa
