#pragma once

/* Barycentric subdivision of the finite part of a realized abstract complex,
 * its coordinate embedding, and the exactness checks: lattice preservation
 * per cell and faithfulness of cellwise affine maps. */

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tff/abstract.hpp"
#include "tff/pwa.hpp"

namespace tff::bary {

using cx::AbstractComplex;
using cx::PolyhedralComplex;
using cx::Realization;
using poly::Polyhedron;

/* A subdivision cell: a chain of Delta-elements together with a nested
 * family of nonempty infinite-vertex subsets of the chain's bottom.
 * Realized as the hull of the chain's barycenters plus one ray per subset.
 * Dimension is (chain length - 1) + (number of subsets). */
struct BaryCell {
  std::vector<size_t> chain;                 // Delta-element indices, strictly increasing in the poset
  std::vector<std::set<std::string>> sets;   // strictly nested, nonempty
  Polyhedron realized;
  size_t complex_cell = 0;                   // index into BarySubdivision::complex
};

struct BarySubdivision {
  std::shared_ptr<const Realization> base;
  std::vector<BaryCell> cells;
  PolyhedralComplex complex;                  // realizations of all cells
  std::map<std::string, size_t> cell_of_key;  // complex cell key -> cells index

  /* The subdivision as an abstract complex: finite vertices are the
   * barycenter labels, infinite vertices the subset labels. */
  AbstractComplex prime;

  /* Tag for the refined carrier: each cell's ancestor Delta-element (the top
   * of its chain). */
  pwa::AbstractTag tag;
};

QVec barycenter(const Realization& r, size_t delta_elem);

/* Throws trop::CapExceeded past max_cells. */
BarySubdivision barycentric_subdivision(const Realization& r, size_t max_cells = 20000);

/* Coordinate embedding: one image coordinate per Delta-element plus one per
 * occurring subset label.  Barycenters map to scaled unit vectors, subset
 * rays to unit vectors; on each cell the map is linear with an integer
 * matrix.  vertex_scale perturbs selected barycenter images (for negative
 * tests); entries of psi are then rational. */
struct Embedding {
  std::shared_ptr<const BarySubdivision> bary;
  std::vector<std::string> image_coords;
  PolyhedralComplex image;
  std::vector<std::vector<QVec>> psi;   // per bary cell: matrix rows, image_dim x source_dim
  std::vector<size_t> image_cell;       // per bary cell: index into image.cells()
};

Embedding embed_barycentric(const BarySubdivision& b,
                            const std::map<size_t, Rat>& vertex_scale = {});

struct LatticeCheck {
  bool ok = false;
  size_t cell = 0;      // first failing bary cell
  std::string detail;   // failing component
};

/* Per cell: integrality of the difference generators and of psi, equality of
 * the generated source lattice with the saturated cell lattice, same on the
 * image side, and unimodularity of psi between the two. */
LatticeCheck lattice_preservation_check(const Embedding& e);

/* Image coordinates as facewise affine functions on the subdivision,
 * tagged for half-line identification through the original complex.
 * Requires integral psi. */
std::vector<pwa::FacewiseAffine> coordinate_functions(const Embedding& e);

struct CellAffineMap {
  std::vector<QVec> a;   // rows
  QVec b;
};

std::vector<CellAffineMap> embedding_maps(const Embedding& e);  // per maximal cell of the carrier

struct FaithfulReport {
  bool ok = false;
  std::string detail;
  std::optional<std::pair<size_t, size_t>> pair;  // offending ordered maximal-cell pair
  std::optional<size_t> cell;                     // offending maximal cell
};

/* maps are indexed by position in sigma.maximal().  Checks per-cell
 * injectivity with lattice unimodularity, value agreement on shared faces,
 * and preimage exactness for ordered pairs.  Together these force every
 * image intersection to be the common face image(A meet B), so the images
 * form a valid complex whenever the report is ok. */
FaithfulReport faithfulness_check(const PolyhedralComplex& sigma,
                                  const std::vector<CellAffineMap>& maps, int image_dim);

}  // namespace tff::bary
