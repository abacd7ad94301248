#pragma once

/* Polyhedral complexes: cell collections closed under faces whose pairwise
 * intersections are common faces.  Cells are stored sorted by canonical key,
 * so equal complexes have equal cell arrays. */

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tff/polyhedra.hpp"

namespace tff::cx {

using poly::Polyhedron;
using trop::AffineForm;

class PolyhedralComplex {
 public:
  PolyhedralComplex() = default;

  /* Dedupes, optionally closes under faces, checks the common-face condition
   * on maximal cells.  Returns nullopt and fills issues on violation. */
  static std::optional<PolyhedralComplex> validated(int ambient, std::vector<Polyhedron> cells,
                                                    bool close_faces,
                                                    std::vector<std::string>& issues);

  /* For constructions that are complexes by construction (arrangements,
   * refinements of valid complexes).  Closes under faces, skips the pairwise
   * check. */
  static PolyhedralComplex from_cells_unchecked(int ambient, std::vector<Polyhedron> cells);

  /* As above for cell lists already closed under faces; skips the closure. */
  static PolyhedralComplex from_closed_cells_unchecked(int ambient,
                                                       std::vector<Polyhedron> cells);

  int ambient() const { return ambient_; }
  size_t size() const { return cells_.size(); }
  const std::vector<Polyhedron>& cells() const { return cells_; }
  const Polyhedron& cell(size_t i) const { return cells_[i]; }

  const std::vector<size_t>& maximal() const { return maximal_; }
  bool leq(size_t a, size_t b) const { return leq_[a][b]; }  // a is a face of b
  std::vector<size_t> cofaces(size_t i) const;
  std::optional<size_t> find(const std::string& key) const;

  int dim() const;  // max cell dimension, -1 if no cells
  bool is_complete() const;
  std::optional<size_t> locate(const QVec& u) const;  // smallest cell containing u
  bool supports(const QVec& u) const { return locate(u).has_value(); }

 private:
  void index_cells();

  int ambient_ = 0;
  std::vector<Polyhedron> cells_;
  std::map<std::string, size_t> by_key_;
  std::vector<std::vector<bool>> leq_;
  std::vector<size_t> maximal_;
};

/* Sign of an affine form over a polyhedron from its generators:
 * 0 identically zero, +1 nonnegative, -1 nonpositive, 2 mixed. */
int sign_over(const AffineForm& f, const Polyhedron& p);

struct FanCheck {
  bool is_fan = false;
  PolyhedralComplex fan;   // valid iff is_fan
  std::string reason;      // offending pair on failure
};

FanCheck recession_fan(const PolyhedralComplex& sigma);

PolyhedralComplex common_refinement(const PolyhedralComplex& a, const PolyhedralComplex& b);

/* Hyperplanes are canonical: the (slope, constant) pair is jointly primitive
 * integral with the first nonzero entry positive, so proportional input forms
 * collapse. */
struct Arrangement {
  std::vector<AffineForm> hyperplanes;
  PolyhedralComplex complex;  // complete
};

AffineForm canonical_hyperplane(const AffineForm& f);
Arrangement arrangement_complex(int ambient, const std::vector<AffineForm>& hyperplanes,
                                size_t max_hyperplanes = 64);

struct ArrangementCompletion {
  Arrangement hat;
  PolyhedralComplex sigma_beta;     // faces of hat contained in the input support
  std::vector<size_t> beta_home;    // per sigma_beta cell: lowest maximal input cell containing it
};

ArrangementCompletion arrangement_completion(const PolyhedralComplex& sigma,
                                             size_t max_hyperplanes = 64);

/* Half-line classes of recession directions.  Embedded semantics: classes are
 * keyed by the primitive direction vector alone. */
struct ParallelClasses {
  std::vector<ZVec> directions;                                   // one per class
  std::vector<std::vector<std::pair<size_t, ZVec>>> members;      // (cell, generator)
};

ParallelClasses parallel_classes(const PolyhedralComplex& sigma);

}  // namespace tff::cx
