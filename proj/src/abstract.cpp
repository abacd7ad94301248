#include "tff/abstract.hpp"

#include <algorithm>
#include <stdexcept>

namespace tff::cx {

namespace {

std::string set_str(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    if (!first) out += ",";
    out += x;
    first = false;
  }
  return out + "}";
}

}  // namespace

std::optional<AbstractComplex> AbstractComplex::make(std::vector<std::string> finite_vertices,
                                                     std::vector<std::string> infinite_vertices,
                                                     std::vector<AbstractElement> elements,
                                                     std::vector<std::string>& issues) {
  AbstractComplex a;
  a.vf_ = std::move(finite_vertices);
  a.vi_ = std::move(infinite_vertices);
  a.elems_ = std::move(elements);

  std::set<std::string> labels;
  for (const auto& v : a.vf_)
    if (!labels.insert(v).second) issues.push_back("duplicate vertex label " + v);
  for (const auto& v : a.vi_)
    if (!labels.insert(v).second) issues.push_back("duplicate vertex label " + v);

  size_t n = a.elems_.size();
  if (n == 0) {
    issues.push_back("no elements");
    return std::nullopt;
  }
  for (size_t i = 0; i < n; ++i) {
    const auto& e = a.elems_[i];
    if (!a.by_id_.emplace(e.id, i).second) issues.push_back("duplicate element id " + e.id);
    for (const auto& v : e.zeta)
      if (!labels.count(v)) issues.push_back("element " + e.id + " uses unknown vertex " + v);
    for (size_t c : e.covers)
      if (c >= n) issues.push_back("element " + e.id + " covers an out-of-range index");
  }
  if (!issues.empty()) return std::nullopt;

  /* Reflexive-transitive closure of the cover relation. */
  a.leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    a.leq_[i][i] = true;
    for (size_t c : a.elems_[i].covers) a.leq_[c][i] = true;
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (a.leq_[i][k])
        for (size_t j = 0; j < n; ++j)
          if (a.leq_[k][j]) a.leq_[i][j] = true;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (a.leq_[i][j] && a.leq_[j][i])
        issues.push_back("order cycle through " + a.elems_[i].id + " and " + a.elems_[j].id);
  if (!issues.empty()) return std::nullopt;

  /* Unique minimum with empty label set. */
  std::vector<size_t> minima;
  for (size_t i = 0; i < n; ++i) {
    bool least = true;
    for (size_t j = 0; j < n && least; ++j)
      if (!a.leq_[i][j]) least = false;
    if (least) minima.push_back(i);
  }
  if (minima.size() != 1) {
    issues.push_back("no unique minimum element");
    return std::nullopt;
  }
  a.bottom_ = minima[0];
  if (!a.elems_[a.bottom_].zeta.empty())
    issues.push_back("minimum element " + a.elems_[a.bottom_].id + " has nonempty label set");

  /* Monotone labels. */
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (a.leq_[i][j] && !std::includes(a.elems_[j].zeta.begin(), a.elems_[j].zeta.end(),
                                         a.elems_[i].zeta.begin(), a.elems_[i].zeta.end()))
        issues.push_back("labels of " + a.elems_[i].id + " not contained in those of " +
                         a.elems_[j].id + " above it");

  /* Every vertex is the label of exactly one element. */
  for (const auto& v : labels) {
    size_t cnt = 0;
    for (const auto& e : a.elems_)
      if (e.zeta.size() == 1 && *e.zeta.begin() == v) ++cnt;
    if (cnt != 1)
      issues.push_back("vertex " + v + " is the label set of " + std::to_string(cnt) +
                       " elements, expected exactly 1");
  }

  /* Boolean lower intervals matching the powerset of the label set. */
  for (size_t t = 0; t < n; ++t) {
    const auto& zt = a.elems_[t].zeta;
    if (zt.size() > 16) {
      issues.push_back("element " + a.elems_[t].id + " has too many vertices to validate");
      continue;
    }
    std::vector<size_t> below;
    for (size_t s = 0; s < n; ++s)
      if (a.leq_[s][t]) below.push_back(s);
    if (below.size() != ((size_t)1 << zt.size())) {
      issues.push_back("interval below " + a.elems_[t].id + " has " +
                       std::to_string(below.size()) + " elements, expected 2^" +
                       std::to_string(zt.size()));
      continue;
    }
    std::set<std::set<std::string>> seen;
    for (size_t s : below)
      if (!seen.insert(a.elems_[s].zeta).second)
        issues.push_back("label set " + set_str(a.elems_[s].zeta) +
                         " repeats below " + a.elems_[t].id);
    for (size_t s1 : below)
      for (size_t s2 : below)
        if (std::includes(a.elems_[s2].zeta.begin(), a.elems_[s2].zeta.end(),
                          a.elems_[s1].zeta.begin(), a.elems_[s1].zeta.end()) &&
            !a.leq_[s1][s2])
          issues.push_back("below " + a.elems_[t].id + ": " + a.elems_[s1].id +
                           " should precede " + a.elems_[s2].id);
  }
  if (!issues.empty()) return std::nullopt;

  std::set<std::string> vf_set(a.vf_.begin(), a.vf_.end());
  a.delta_.assign(n, false);
  for (size_t i = 0; i < n; ++i)
    for (const auto& v : a.elems_[i].zeta)
      if (vf_set.count(v)) a.delta_[i] = true;
  return a;
}

std::vector<size_t> AbstractComplex::delta() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < elems_.size(); ++i)
    if (delta_[i]) out.push_back(i);
  return out;
}

std::vector<size_t> AbstractComplex::upsilon() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < elems_.size(); ++i)
    if (!delta_[i]) out.push_back(i);
  return out;
}

std::optional<size_t> AbstractComplex::interval_element(size_t t,
                                                        const std::set<std::string>& sub) const {
  if (!std::includes(elems_[t].zeta.begin(), elems_[t].zeta.end(), sub.begin(), sub.end()))
    return std::nullopt;
  for (size_t s = 0; s < elems_.size(); ++s)
    if (leq_[s][t] && elems_[s].zeta == sub) return s;
  return std::nullopt;
}

size_t AbstractComplex::index_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw std::out_of_range("unknown element id " + id);
  return it->second;
}

Realization realize_abstract(const AbstractComplex& a) {
  auto abs = std::make_shared<AbstractComplex>(a);
  Realization r;
  r.abs = abs;
  for (const auto& v : a.finite_vertices()) r.coords.push_back(v);
  for (const auto& v : a.infinite_vertices()) r.coords.push_back(v);
  int dim = (int)r.coords.size();
  std::map<std::string, int> axis;
  for (int i = 0; i < dim; ++i) axis[r.coords[i]] = i;
  std::set<std::string> vf_set(a.finite_vertices().begin(), a.finite_vertices().end());

  /* Coordinates separate elements only when label sets are unique. */
  std::set<std::set<std::string>> zetas;
  for (const auto& e : a.elements())
    if (!zetas.insert(e.zeta).second)
      throw std::invalid_argument("complex is not realizable in vertex coordinates: label set " +
                                  set_str(e.zeta) + " repeats");

  std::vector<Polyhedron> cells;
  std::vector<size_t> owners;
  for (size_t t = 0; t < a.size(); ++t) {
    if (!a.in_delta(t)) continue;
    const auto& zeta = a.elements()[t].zeta;
    std::vector<poly::Constraint> cs;
    QVec sum(dim, 0);
    for (int i = 0; i < dim; ++i) {
      QVec e(dim, 0);
      e[i] = 1;
      if (zeta.count(r.coords[i])) {
        cs.push_back(poly::make_constraint(e, 0, false));  // u_i >= 0
        if (vf_set.count(r.coords[i])) sum[i] = 1;
      } else {
        cs.push_back(poly::make_constraint(e, 0, true));  // u_i == 0
      }
    }
    cs.push_back(poly::make_constraint(sum, -1, true));  // finite coordinates sum to 1
    cells.push_back(Polyhedron::from_constraints(dim, std::move(cs)));
    owners.push_back(t);
  }
  for (size_t i = 0; i < cells.size(); ++i) r.cell_elem[cells[i].key()] = owners[i];
  r.complex = PolyhedralComplex::from_cells_unchecked(dim, std::move(cells));
  for (const auto& c : r.complex.cells())
    if (!r.cell_elem.count(c.key()))
      throw std::logic_error("realized complex has a face with no abstract element");
  return r;
}

}  // namespace tff::cx
