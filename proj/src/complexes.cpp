#include "tff/complexes.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace tff::cx {

int sign_over(const AffineForm& f, const Polyhedron& p) {
  bool nonneg = true, nonpos = true;
  const auto& vr = p.vrep();
  for (const auto& v : vr.vertices) {
    Rat x = f.eval(v);
    if (x > 0) nonpos = false;
    if (x < 0) nonneg = false;
  }
  for (const auto& r : vr.rays) {
    Int s = dot(f.m, r);
    if (s > 0) nonpos = false;
    if (s < 0) nonneg = false;
  }
  for (const auto& l : vr.lineality) {
    if (dot(f.m, l) != 0) {
      nonneg = false;
      nonpos = false;
    }
  }
  if (nonneg && nonpos) return 0;
  if (nonneg) return 1;
  if (nonpos) return -1;
  return 2;
}

void PolyhedralComplex::index_cells() {
  std::sort(cells_.begin(), cells_.end(),
            [](const Polyhedron& a, const Polyhedron& b) { return a.key() < b.key(); });
  cells_.erase(std::unique(cells_.begin(), cells_.end(),
                           [](const Polyhedron& a, const Polyhedron& b) {
                             return a.key() == b.key();
                           }),
               cells_.end());
  by_key_.clear();
  size_t n = cells_.size();
  for (size_t i = 0; i < n; ++i) by_key_[cells_[i].key()] = i;

  std::vector<int> dims(n);
  for (size_t i = 0; i < n; ++i) dims[i] = cells_[i].dim();
  leq_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i == j) {
        leq_[i][j] = true;
        continue;
      }
      if (dims[i] > dims[j]) continue;
      leq_[i][j] = cells_[j].contains(cells_[i]);
    }
  maximal_.clear();
  for (size_t i = 0; i < n; ++i) {
    bool top = true;
    for (size_t j = 0; j < n && top; ++j)
      if (j != i && leq_[i][j]) top = false;
    if (top) maximal_.push_back(i);
  }
}

PolyhedralComplex PolyhedralComplex::from_cells_unchecked(int ambient,
                                                          std::vector<Polyhedron> cells) {
  PolyhedralComplex c;
  c.ambient_ = ambient;
  std::map<std::string, Polyhedron> pool;
  for (auto& p : cells) {
    if (p.empty()) continue;
    for (auto& f : p.faces()) {
      std::string k = f.key();
      pool.emplace(std::move(k), std::move(f));
    }
  }
  c.cells_.reserve(pool.size());
  for (auto& [k, p] : pool) c.cells_.push_back(std::move(p));
  c.index_cells();
  return c;
}

PolyhedralComplex PolyhedralComplex::from_closed_cells_unchecked(int ambient,
                                                                 std::vector<Polyhedron> cells) {
  PolyhedralComplex c;
  c.ambient_ = ambient;
  for (auto& p : cells)
    if (!p.empty()) c.cells_.push_back(std::move(p));
  c.index_cells();
  return c;
}

std::optional<PolyhedralComplex> PolyhedralComplex::validated(int ambient,
                                                              std::vector<Polyhedron> cells,
                                                              bool close_faces,
                                                              std::vector<std::string>& issues) {
  std::map<std::string, Polyhedron> pool;
  for (auto& p : cells) {
    if (p.ambient_dim() != ambient) {
      issues.push_back("cell with ambient dimension " + std::to_string(p.ambient_dim()) +
                       " in a complex of ambient dimension " + std::to_string(ambient));
      return std::nullopt;
    }
    if (p.empty()) continue;
    pool.emplace(p.key(), p);
  }
  std::vector<Polyhedron> base;
  base.reserve(pool.size());
  for (auto& [k, p] : pool) base.push_back(p);
  for (const auto& p : base) {
    for (auto& f : p.faces()) {
      std::string k = f.key();
      if (pool.count(k)) continue;
      if (close_faces) {
        pool.emplace(std::move(k), std::move(f));
      } else {
        issues.push_back("cell " + p.key() + " lacks its face " + k);
      }
    }
  }

  std::vector<const Polyhedron*> all;
  for (auto& [k, p] : pool) all.push_back(&p);
  std::vector<const Polyhedron*> tops;
  for (auto* p : all) {
    bool top = true;
    for (auto* q : all) {
      if (p == q) continue;
      if (p->dim() <= q->dim() && q->contains(*p) && q->key() != p->key()) {
        top = false;
        // containment that is not a face relation escapes the maximal-pair
        // scan below, so it has to be rejected here
        if (!q->has_face(*p)) {
          issues.push_back("cell " + p->key() + " lies inside cell " + q->key() +
                           " without being a face of it");
          return std::nullopt;
        }
      }
    }
    if (top) tops.push_back(p);
  }
  for (size_t i = 0; i < tops.size(); ++i)
    for (size_t j = i + 1; j < tops.size(); ++j) {
      Polyhedron meet = tops[i]->intersect(*tops[j]);
      if (meet.empty()) continue;
      if (!tops[i]->has_face(meet) || !tops[j]->has_face(meet))
        issues.push_back("cells " + tops[i]->key() + " and " + tops[j]->key() +
                         " meet in " + meet.key() + ", not a common face");
    }
  if (!issues.empty()) return std::nullopt;

  PolyhedralComplex c;
  c.ambient_ = ambient;
  for (auto& [k, p] : pool) c.cells_.push_back(std::move(p));
  c.index_cells();
  return c;
}

std::vector<size_t> PolyhedralComplex::cofaces(size_t i) const {
  std::vector<size_t> out;
  for (size_t j = 0; j < cells_.size(); ++j)
    if (leq_[i][j]) out.push_back(j);
  return out;
}

std::optional<size_t> PolyhedralComplex::find(const std::string& key) const {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

int PolyhedralComplex::dim() const {
  int d = -1;
  for (size_t i : maximal_) d = std::max(d, cells_[i].dim());
  return d;
}

bool PolyhedralComplex::is_complete() const {
  if (cells_.empty()) return false;
  int n = ambient_;
  if (n == 0) return true;
  for (size_t i : maximal_)
    if (cells_[i].dim() != n) return false;
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].dim() != n - 1) continue;
    int cnt = 0;
    for (size_t j : maximal_)
      if (j != i && leq_[i][j]) ++cnt;
    if (cnt < 2) return false;
  }
  return true;
}

std::optional<size_t> PolyhedralComplex::locate(const QVec& u) const {
  std::optional<size_t> best;
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (!cells_[i].contains(u)) continue;
    if (!best || cells_[i].dim() < cells_[*best].dim()) best = i;
  }
  return best;
}

FanCheck recession_fan(const PolyhedralComplex& sigma) {
  FanCheck out;
  std::vector<Polyhedron> cones;
  for (size_t i : sigma.maximal()) cones.push_back(sigma.cell(i).recession_cone());
  std::vector<std::string> issues;
  auto fan = PolyhedralComplex::validated(sigma.ambient(), std::move(cones), true, issues);
  if (!fan) {
    out.is_fan = false;
    out.reason = issues.empty() ? "invalid" : issues.front();
    return out;
  }
  out.is_fan = true;
  out.fan = std::move(*fan);
  return out;
}

PolyhedralComplex common_refinement(const PolyhedralComplex& a, const PolyhedralComplex& b) {
  std::vector<Polyhedron> cells;
  for (size_t i : a.maximal())
    for (size_t j : b.maximal()) {
      Polyhedron meet = a.cell(i).intersect(b.cell(j));
      if (!meet.empty()) cells.push_back(std::move(meet));
    }
  return PolyhedralComplex::from_cells_unchecked(a.ambient(), std::move(cells));
}

AffineForm canonical_hyperplane(const AffineForm& f) {
  int n = f.dim();
  Int d = f.g.get_den();
  ZVec w((size_t)n + 1);
  for (int i = 0; i < n; ++i) w[i] = f.m[i] * d;
  w[n] = f.g.get_num();
  w = primitive_line(std::move(w));
  ZVec m(w.begin(), w.begin() + n);
  if (is_zero(m)) throw std::invalid_argument("form with zero slope is not a hyperplane");
  return AffineForm(std::move(m), Rat(w[n]));
}

Arrangement arrangement_complex(int ambient, const std::vector<AffineForm>& hyperplanes,
                                size_t max_hyperplanes) {
  std::map<std::string, AffineForm> canon;
  for (const auto& h : hyperplanes) {
    AffineForm c = canonical_hyperplane(h);
    canon.emplace(trop::print(c), c);
  }
  if (canon.size() > max_hyperplanes)
    throw trop::CapExceeded("arrangement of " + std::to_string(canon.size()) +
                            " hyperplanes exceeds the cap of " +
                            std::to_string(max_hyperplanes));
  Arrangement a;
  for (auto& [k, h] : canon) a.hyperplanes.push_back(h);

  std::vector<Polyhedron> regions{Polyhedron::full(ambient)};
  for (const auto& h : a.hyperplanes) {
    std::vector<Polyhedron> next;
    AffineForm neg = af_scale(h, Int(-1));
    for (const auto& r : regions) {
      if (sign_over(h, r) == 2) {
        next.push_back(r.intersect(poly::Constraint(h)));
        next.push_back(r.intersect(poly::Constraint(neg)));
      } else {
        next.push_back(r);
      }
      if (next.size() > 100000) throw trop::CapExceeded("arrangement region explosion");
    }
    regions = std::move(next);
  }
  a.complex = PolyhedralComplex::from_cells_unchecked(ambient, std::move(regions));
  return a;
}

ArrangementCompletion arrangement_completion(const PolyhedralComplex& sigma,
                                             size_t max_hyperplanes) {
  std::vector<AffineForm> hps;
  for (const auto& cell : sigma.cells()) {
    const auto& mh = cell.min_hrep();
    for (const auto& f : mh.ineqs) hps.push_back(f);
    for (const auto& f : mh.eqs) hps.push_back(f);
  }
  ArrangementCompletion out;
  out.hat = arrangement_complex(sigma.ambient(), hps, max_hyperplanes);

  std::vector<Polyhedron> inside;
  for (const auto& f : out.hat.complex.cells()) {
    QVec p = f.relint_point();
    bool in = false;
    for (size_t i : sigma.maximal())
      if (sigma.cell(i).contains(p)) {
        in = true;
        break;
      }
    if (in) inside.push_back(f);
  }
  out.sigma_beta = PolyhedralComplex::from_cells_unchecked(sigma.ambient(), std::move(inside));
  out.beta_home.assign(out.sigma_beta.size(), 0);
  for (size_t c = 0; c < out.sigma_beta.size(); ++c) {
    QVec p = out.sigma_beta.cell(c).relint_point();
    bool found = false;
    for (size_t i : sigma.maximal())
      if (sigma.cell(i).contains(p)) {
        out.beta_home[c] = i;
        found = true;
        break;
      }
    if (!found) throw std::logic_error("completion cell escaped the support");
  }
  return out;
}

ParallelClasses parallel_classes(const PolyhedralComplex& sigma) {
  auto cmp = [](const ZVec& a, const ZVec& b) { return compare(a, b) < 0; };
  std::map<ZVec, std::vector<std::pair<size_t, ZVec>>, decltype(cmp)> classes(cmp);
  for (size_t i : sigma.maximal()) {
    const auto& vr = sigma.cell(i).vrep();
    for (const auto& r : vr.rays) classes[r].push_back({i, r});
    for (const auto& l : vr.lineality) {
      ZVec neg(l.size());
      for (size_t k = 0; k < l.size(); ++k) neg[k] = -l[k];
      classes[l].push_back({i, l});
      classes[neg].push_back({i, neg});
    }
  }
  ParallelClasses out;
  for (auto& [d, mem] : classes) {
    out.directions.push_back(d);
    out.members.push_back(std::move(mem));
  }
  return out;
}

}  // namespace tff::cx
