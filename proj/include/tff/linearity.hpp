#pragma once

/* Linearity structure of min-plus expressions: decompose a region into
 * full-dimensional pieces on which the expression is a single affine form,
 * and assemble the global linearity regions into a complete complex. */

#include <map>
#include <vector>

#include "tff/complexes.hpp"
#include "tff/trop_core.hpp"

namespace tff::trop {

struct Fragment {
  poly::Polyhedron region;
  AffineForm form;
};

/* Pieces covering region (equal dimension, disjoint interiors) with the
 * expression's affine form on each.  Throws TropError on expressions taking
 * infinite values over the region, CapExceeded past max_pieces. */
std::vector<Fragment> fragments_over(const ExprPtr& e, const poly::Polyhedron& region,
                                     size_t max_pieces = 4096);
std::vector<Fragment> fragments_over(const TropRationalExpr& e, const poly::Polyhedron& region,
                                     size_t max_pieces = 4096);

struct LinearityRegions {
  cx::PolyhedralComplex complex;          // complete
  std::map<size_t, AffineForm> forms;     // per maximal cell
};

/* Coarsest complete complex found whose maximal cells carry single affine
 * forms of the expression; adjacent cells get distinct forms. */
LinearityRegions linearity_regions(const TropRationalExpr& e, int dim,
                                   size_t max_pieces = 4096);

}  // namespace tff::trop
