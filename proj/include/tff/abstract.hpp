#pragma once

/* Abstract extended polyhedral complexes: a finite poset with a vertex-label
 * map into finite and infinite vertices.  Required structure:
 *   (1) a unique minimum labelled by the empty set,
 *   (2) every singleton label is realized by exactly one element,
 *   (3) each lower interval [min, t] is boolean, isomorphic to the powerset
 *       of t's label via the label map,
 * and the label map is monotone.  Elements whose label meets the finite
 * vertex set form Delta; the rest (including the minimum) form Upsilon.
 * Delta-elements realize as products of a simplex on their finite vertices
 * with an orthant on their infinite vertices, glued along shared faces. */

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tff/complexes.hpp"

namespace tff::cx {

struct AbstractElement {
  std::string id;
  std::set<std::string> zeta;     // vertex labels
  std::vector<size_t> covers;     // indices of elements covered by this one
};

class AbstractComplex {
 public:
  static std::optional<AbstractComplex> make(std::vector<std::string> finite_vertices,
                                             std::vector<std::string> infinite_vertices,
                                             std::vector<AbstractElement> elements,
                                             std::vector<std::string>& issues);

  const std::vector<std::string>& finite_vertices() const { return vf_; }
  const std::vector<std::string>& infinite_vertices() const { return vi_; }
  const std::vector<AbstractElement>& elements() const { return elems_; }
  size_t size() const { return elems_.size(); }

  bool leq(size_t a, size_t b) const { return leq_[a][b]; }
  size_t minimum() const { return bottom_; }
  bool in_delta(size_t i) const { return delta_[i]; }
  std::vector<size_t> delta() const;
  std::vector<size_t> upsilon() const;

  /* The unique element of [min, t] carrying the given sub-label, if the
   * label is a subset of t's. */
  std::optional<size_t> interval_element(size_t t, const std::set<std::string>& sub) const;

  size_t index_of(const std::string& id) const;

 private:
  std::vector<std::string> vf_, vi_;
  std::vector<AbstractElement> elems_;
  std::vector<std::vector<bool>> leq_;
  std::vector<bool> delta_;
  std::map<std::string, size_t> by_id_;
  size_t bottom_ = 0;
};

/* Realization of a Delta-element t in R^(Vf+Vi): the set of u >= 0 supported
 * on t's label whose finite-vertex coordinates sum to 1. */
struct Realization {
  std::shared_ptr<const AbstractComplex> abs;
  PolyhedralComplex complex;
  std::vector<std::string> coords;           // axis labels, finite then infinite
  std::map<std::string, size_t> cell_elem;   // cell key -> Delta-element index
};

Realization realize_abstract(const AbstractComplex& a);

}  // namespace tff::cx
