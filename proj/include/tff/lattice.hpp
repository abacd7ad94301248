#pragma once

/* Integer lattices via row-style Hermite normal form.  A Lattice stores a
 * canonical basis: rows with positive pivots, entries above each pivot
 * reduced into [0, pivot).  Equal lattices have identical bases. */

#include <vector>

#include "tff/rational.hpp"

namespace tff::poly {

struct Lattice {
  int ambient = 0;
  std::vector<ZVec> basis;  // HNF canonical, one row per rank

  int rank() const { return (int)basis.size(); }
  bool operator==(const Lattice& o) const { return ambient == o.ambient && basis == o.basis; }
};

/* Canonical HNF of the row span (generators need not be independent). */
std::vector<ZVec> hnf_rows(std::vector<ZVec> rows, int ncols);

Lattice lattice_from_generators(int ambient, const std::vector<ZVec>& gens);

bool lattice_contains(const Lattice& L, const ZVec& v);
bool lattice_equal(const Lattice& a, const Lattice& b);

/* Basis of {x in Z^n : A x = 0}, rows of A given. */
std::vector<ZVec> integer_kernel(const std::vector<ZVec>& rows, int ncols);

/* span_Q(gens) intersected with Z^ambient. */
Lattice saturation(int ambient, const std::vector<ZVec>& gens);

/* Does the integer matrix (rows = target coordinates) map N bijectively onto
 * N2?  Checks rank preservation and image-lattice equality via HNF. */
bool is_unimodular(const std::vector<ZVec>& map_rows, const Lattice& N, const Lattice& N2);

ZVec apply_rows(const std::vector<ZVec>& map_rows, const ZVec& v);

}  // namespace tff::poly
