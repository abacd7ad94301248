#include "tff/polyhedra.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tff::poly {

namespace {

/* Reduced row echelon form over Q; zero rows dropped, pivots are 1. */
std::vector<QVec> rref(std::vector<QVec> rows) {
  if (rows.empty()) return rows;
  size_t n = rows[0].size(), r = 0;
  for (size_t c = 0; c < n && r < rows.size(); ++c) {
    size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rat inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (size_t j = 0; j < n; ++j) rows[i][j] -= f * rows[r][j];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

std::vector<size_t> pivot_cols(const std::vector<QVec>& rr) {
  std::vector<size_t> piv;
  for (const auto& row : rr) {
    size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    piv.push_back(c);
  }
  return piv;
}

/* Canonical coset representative modulo the row space of rr (RREF). */
void reduce_mod(QVec& v, const std::vector<QVec>& rr, const std::vector<size_t>& piv) {
  for (size_t k = 0; k < rr.size(); ++k) {
    if (v[piv[k]] == 0) continue;
    Rat f = v[piv[k]];
    for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rr[k][j];
  }
}

using Bits = std::vector<uint64_t>;

bool bits_subset(const Bits& a, const Bits& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if ((a[i] & ~b[i]) != 0) return false;
  return true;
}

Bits bits_and(const Bits& a, const Bits& b) {
  Bits r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] & b[i];
  return r;
}

struct DDState {
  int d;
  std::vector<QVec> lin;
  std::vector<QVec> rays;
  std::vector<std::pair<QVec, bool>> done;
  std::vector<Bits> tight;  // per ray, over processed constraints

  explicit DDState(int dim) : d(dim) {
    for (int i = 0; i < dim; ++i) {
      QVec e(dim, Rat(0));
      e[i] = 1;
      lin.push_back(std::move(e));
    }
  }

  Bits compute_tight(const QVec& r) const {
    Bits b((done.size() + 63) / 64, 0);
    for (size_t i = 0; i < done.size(); ++i)
      if (dot(done[i].first, r) == 0) b[i / 64] |= uint64_t(1) << (i % 64);
    return b;
  }

  void refresh_all_tight() {
    tight.clear();
    tight.reserve(rays.size());
    for (const auto& r : rays) tight.push_back(compute_tight(r));
  }

  static QVec normalize(const QVec& v) { return to_q(primitive(v)); }

  bool adjacent(size_t p, size_t n) const {
    Bits t = bits_and(tight[p], tight[n]);
    for (size_t k = 0; k < rays.size(); ++k) {
      if (k == p || k == n) continue;
      if (bits_subset(t, tight[k])) return false;
    }
    return true;
  }

  void add(const QVec& a, bool eq) {
    size_t w = lin.size();
    for (size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        w = i;
        break;
      }
    if (w < lin.size()) {
      QVec wv = lin[w];
      Rat aw = dot(a, wv);
      if (aw < 0) {
        for (auto& x : wv) x = -x;
        aw = -aw;
      }
      lin.erase(lin.begin() + w);
      for (auto& l : lin) {
        Rat c = dot(a, l) / aw;
        if (c != 0) l = normalize(sub(l, scale(wv, c)));
      }
      for (auto& r : rays) {
        Rat c = dot(a, r) / aw;
        if (c != 0) r = normalize(sub(r, scale(wv, c)));
      }
      done.emplace_back(a, eq);
      if (!eq) rays.push_back(normalize(wv));
      refresh_all_tight();
      return;
    }

    std::vector<Rat> val(rays.size());
    std::vector<size_t> P, Z, N;
    for (size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(a, rays[i]);
      if (val[i] > 0) P.push_back(i);
      else if (val[i] < 0) N.push_back(i);
      else Z.push_back(i);
    }
    done.emplace_back(a, eq);
    std::vector<QVec> nrays;
    std::vector<Bits> ntight;
    auto keep = [&](size_t i) {
      nrays.push_back(rays[i]);
      Bits b = tight[i];
      b.resize((done.size() + 63) / 64, 0);
      if (val[i] == 0) b[(done.size() - 1) / 64] |= uint64_t(1) << ((done.size() - 1) % 64);
      ntight.push_back(std::move(b));
    };
    if (!eq)
      for (size_t i : P) keep(i);
    for (size_t i : Z) keep(i);
    std::vector<QVec> combos;
    for (size_t p : P)
      for (size_t n : N)
        if (adjacent(p, n)) combos.push_back(normalize(sub(scale(rays[n], val[p]), scale(rays[p], val[n]))));
    rays = std::move(nrays);
    tight = std::move(ntight);
    for (auto& c : combos) {
      rays.push_back(c);
      tight.push_back(compute_tight(c));
    }
  }
};

std::string zvec_str(const ZVec& v) {
  std::string s;
  for (const auto& x : v) {
    s += x.get_str();
    s += ',';
  }
  return s;
}

}  // namespace

ConeGens dd_cone(int dim, const std::vector<std::pair<QVec, bool>>& constraints) {
  DDState st(dim);
  for (const auto& [a, eq] : constraints) {
    if (is_zero(a)) continue;  // 0 >= 0; the infeasible constant case is ambient-level
    st.add(a, eq);
  }
  ConeGens g;
  std::vector<QVec> lrr = rref(st.lin);
  auto piv = pivot_cols(lrr);
  for (const auto& l : lrr) g.lines.push_back(primitive_line(l));
  std::set<std::string> seen;
  for (auto r : st.rays) {
    reduce_mod(r, lrr, piv);
    ZVec z = primitive(r);
    if (is_zero(z)) continue;
    if (seen.insert(zvec_str(z)).second) g.rays.push_back(std::move(z));
  }
  std::sort(g.rays.begin(), g.rays.end(),
            [](const ZVec& a, const ZVec& b) { return compare(a, b) < 0; });
  return g;
}

int q_rank(const std::vector<QVec>& vecs) { return (int)rref(vecs).size(); }

Constraint make_constraint(const QVec& slope, const Rat& g, bool eq) {
  Int l = denom_lcm(slope);
  ZVec m(slope.size());
  for (size_t i = 0; i < slope.size(); ++i) {
    Rat s = slope[i] * Rat(l);
    s.canonicalize();
    m[i] = s.get_num();
  }
  Rat gg = g * Rat(l);
  Int gcd = vec_gcd(m);
  if (gcd > 1) {
    for (auto& x : m) x /= gcd;
    gg /= Rat(gcd);
  }
  return Constraint(AffineForm(std::move(m), std::move(gg)), eq);
}

Polyhedron Polyhedron::full(int dim) {
  Polyhedron p;
  p.ambient_ = dim;
  return p;
}

Polyhedron Polyhedron::empty_set(int dim) {
  Polyhedron p;
  p.ambient_ = dim;
  p.cons_.emplace_back(AffineForm::constant(dim, -1), false);
  return p;
}

Polyhedron Polyhedron::from_constraints(int dim, std::vector<Constraint> cs) {
  Polyhedron p;
  p.ambient_ = dim;
  for (auto& c : cs)
    if (c.f.dim() != dim) throw std::invalid_argument("constraint dimension mismatch");
  p.cons_ = std::move(cs);
  return p;
}

Polyhedron Polyhedron::from_known(int dim, std::vector<Constraint> cs, VRep vr) {
  Polyhedron p;
  p.ambient_ = dim;
  p.cons_ = std::move(cs);
  p.vrep_ = std::move(vr);
  return p;
}

Polyhedron Polyhedron::from_generators(int dim, const std::vector<QVec>& vertices,
                                       const std::vector<QVec>& rays,
                                       const std::vector<QVec>& lines) {
  if (vertices.empty()) return empty_set(dim);
  std::vector<std::pair<QVec, bool>> cs;
  for (const auto& v : vertices) {
    QVec a = v;
    a.push_back(1);
    cs.emplace_back(std::move(a), false);
  }
  for (const auto& r : rays) {
    QVec a = r;
    a.push_back(0);
    cs.emplace_back(std::move(a), false);
  }
  for (const auto& l : lines) {
    QVec a = l;
    a.push_back(0);
    cs.emplace_back(std::move(a), true);
  }
  ConeGens dual = dd_cone(dim + 1, cs);
  std::vector<Constraint> out;
  for (const auto& r : dual.rays) {
    ZVec m(r.begin(), r.end() - 1);
    if (is_zero(m)) continue;  // the trivial 1 >= 0 direction
    out.emplace_back(AffineForm(std::move(m), Rat(r.back())), false);
  }
  for (const auto& l : dual.lines) {
    ZVec m(l.begin(), l.end() - 1);
    if (is_zero(m)) continue;
    out.emplace_back(AffineForm(std::move(m), Rat(l.back())), true);
  }
  return from_constraints(dim, std::move(out));
}

void Polyhedron::compute_vrep() const {
  int d = ambient_ + 1;
  std::vector<std::pair<QVec, bool>> cs;
  bool absurd = false;
  for (const auto& c : cons_) {
    QVec a = to_q(c.f.m);
    a.push_back(c.f.g);
    if (is_zero(to_q(c.f.m))) {
      if ((c.eq && c.f.g != 0) || (!c.eq && c.f.g < 0)) absurd = true;
      continue;
    }
    cs.emplace_back(std::move(a), c.eq);
  }
  {
    QVec t(d, Rat(0));
    t[d - 1] = 1;
    cs.emplace_back(std::move(t), false);
  }
  VRep vr;
  if (!absurd) {
    ConeGens g = dd_cone(d, cs);
    std::vector<QVec> lq;
    for (const auto& l : g.lines) {
      if (l.back() != 0) throw std::logic_error("lineality with nonzero homogenization");
      lq.emplace_back(to_q(ZVec(l.begin(), l.end() - 1)));
    }
    std::vector<QVec> lrr = rref(lq);
    auto piv = pivot_cols(lrr);
    std::set<std::string> seen_v, seen_r;
    for (const auto& r : g.rays) {
      if (r.back() == 0) {
        QVec dir = to_q(ZVec(r.begin(), r.end() - 1));
        reduce_mod(dir, lrr, piv);
        ZVec z = primitive(dir);
        if (is_zero(z)) continue;
        if (seen_r.insert(zvec_str(z)).second) vr.rays.push_back(std::move(z));
      } else {
        QVec v(ambient_);
        Rat t = Rat(r.back());
        for (int i = 0; i < ambient_; ++i) {
          v[i] = Rat(r[i]) / t;
          v[i].canonicalize();
        }
        reduce_mod(v, lrr, piv);
        std::string k;
        for (const auto& q : v) k += rat_str(q) + ",";
        if (seen_v.insert(k).second) vr.vertices.push_back(std::move(v));
      }
    }
    for (const auto& l : lrr) vr.lineality.push_back(primitive_line(l));
    vr.empty = vr.vertices.empty();
  }
  if (vr.empty) {
    vr.vertices.clear();
    vr.rays.clear();
    vr.lineality.clear();
  }
  std::sort(vr.vertices.begin(), vr.vertices.end(),
            [](const QVec& a, const QVec& b) { return compare(a, b) < 0; });
  std::sort(vr.rays.begin(), vr.rays.end(),
            [](const ZVec& a, const ZVec& b) { return compare(a, b) < 0; });
  vrep_ = std::move(vr);
}

const VRep& Polyhedron::vrep() const {
  if (!vrep_) compute_vrep();
  return *vrep_;
}

const MinHRep& Polyhedron::min_hrep() const {
  if (min_hrep_) return *min_hrep_;
  MinHRep h;
  const VRep& vr = vrep();
  if (vr.empty) {
    h.ineqs.push_back(AffineForm::constant(ambient_, -1));
  } else {
    std::vector<std::pair<QVec, bool>> cs;
    for (const auto& v : vr.vertices) {
      QVec a = v;
      a.push_back(1);
      cs.emplace_back(std::move(a), false);
    }
    for (const auto& r : vr.rays) {
      QVec a = to_q(r);
      a.push_back(0);
      cs.emplace_back(std::move(a), false);
    }
    for (const auto& l : vr.lineality) {
      QVec a = to_q(l);
      a.push_back(0);
      cs.emplace_back(std::move(a), true);
    }
    ConeGens dual = dd_cone(ambient_ + 1, cs);
    for (const auto& r : dual.rays) {
      ZVec m(r.begin(), r.end() - 1);
      if (is_zero(m)) continue;
      h.ineqs.emplace_back(std::move(m), Rat(r.back()));
    }
    for (const auto& l : dual.lines) {
      ZVec m(l.begin(), l.end() - 1);
      if (is_zero(m)) continue;
      h.eqs.emplace_back(std::move(m), Rat(l.back()));
    }
    auto af_cmp = [](const AffineForm& a, const AffineForm& b) { return trop::af_less(a, b); };
    std::sort(h.ineqs.begin(), h.ineqs.end(), af_cmp);
    std::sort(h.eqs.begin(), h.eqs.end(), af_cmp);
  }
  min_hrep_ = std::move(h);
  return *min_hrep_;
}

int Polyhedron::dim() const {
  if (dim_) return *dim_;
  const VRep& vr = vrep();
  int d;
  if (vr.empty) {
    d = -1;
  } else {
    std::vector<QVec> dirs;
    for (size_t i = 1; i < vr.vertices.size(); ++i)
      dirs.push_back(sub(vr.vertices[i], vr.vertices[0]));
    for (const auto& r : vr.rays) dirs.push_back(to_q(r));
    for (const auto& l : vr.lineality) dirs.push_back(to_q(l));
    d = q_rank(dirs);
  }
  dim_ = d;
  return d;
}

bool Polyhedron::is_bounded() const {
  const VRep& vr = vrep();
  return !vr.empty ? vr.rays.empty() && vr.lineality.empty() : true;
}

bool Polyhedron::is_cone() const {
  const VRep& vr = vrep();
  if (vr.empty || vr.vertices.size() != 1) return false;
  return is_zero(vr.vertices[0]);
}

bool Polyhedron::contains(const QVec& point) const {
  if ((int)point.size() != ambient_) throw std::invalid_argument("point dimension mismatch");
  for (const auto& c : cons_) {
    Rat v = c.f.eval(point);
    if (c.eq ? v != 0 : v < 0) return false;
  }
  return !empty();
}

bool Polyhedron::contains_ray(const ZVec& dir) const {
  if (empty()) return false;
  for (const auto& c : cons_) {
    Rat v = dot(c.f.m, to_q(dir));
    if (c.eq ? v != 0 : v < 0) return false;
  }
  return true;
}

bool Polyhedron::contains_line(const ZVec& dir) const {
  if (empty()) return false;
  for (const auto& c : cons_)
    if (dot(c.f.m, to_q(dir)) != 0) return false;
  return true;
}

bool Polyhedron::contains(const Polyhedron& other) const {
  if (other.empty()) return true;
  const VRep& vr = other.vrep();
  for (const auto& v : vr.vertices)
    if (!contains(v)) return false;
  for (const auto& r : vr.rays)
    if (!contains_ray(r)) return false;
  for (const auto& l : vr.lineality)
    if (!contains_line(l)) return false;
  return true;
}

bool Polyhedron::same_set(const Polyhedron& other) const { return key() == other.key(); }

const std::string& Polyhedron::key() const {
  if (key_) return *key_;
  const VRep& vr = vrep();
  std::ostringstream os;
  if (vr.empty) {
    os << "empty" << ambient_;
  } else {
    os << "V:";
    for (const auto& v : vr.vertices) {
      for (const auto& q : v) os << rat_str(q) << ",";
      os << ";";
    }
    os << "R:";
    for (const auto& r : vr.rays) {
      for (const auto& x : r) os << x.get_str() << ",";
      os << ";";
    }
    os << "L:";
    for (const auto& l : vr.lineality) {
      for (const auto& x : l) os << x.get_str() << ",";
      os << ";";
    }
  }
  key_ = os.str();
  return *key_;
}

Polyhedron Polyhedron::intersect(const Polyhedron& o) const {
  if (ambient_ != o.ambient_) throw std::invalid_argument("ambient dimension mismatch");
  std::vector<Constraint> cs = cons_;
  cs.insert(cs.end(), o.cons_.begin(), o.cons_.end());
  return from_constraints(ambient_, std::move(cs));
}

Polyhedron Polyhedron::intersect(const Constraint& c) const {
  std::vector<Constraint> cs = cons_;
  cs.push_back(c);
  return from_constraints(ambient_, std::move(cs));
}

Polyhedron Polyhedron::recession_cone() const {
  if (empty()) throw std::logic_error("recession cone of the empty set");
  std::vector<Constraint> cs;
  for (const auto& c : cons_) cs.emplace_back(AffineForm(c.f.m, 0), c.eq);
  return from_constraints(ambient_, std::move(cs));
}

QVec Polyhedron::relint_point() const {
  const VRep& vr = vrep();
  if (vr.empty) throw std::logic_error("relative interior of the empty set");
  QVec p(ambient_, Rat(0));
  for (const auto& v : vr.vertices) p = add(p, v);
  Rat inv(1, (unsigned long)vr.vertices.size());
  p = scale(p, inv);
  for (const auto& r : vr.rays) p = add(p, to_q(r));
  return p;
}

std::vector<Polyhedron> Polyhedron::faces() const {
  std::vector<Polyhedron> out;
  if (empty()) return out;
  const VRep& vr = vrep();
  const MinHRep& mh = min_hrep();
  size_t nv = vr.vertices.size(), nr = vr.rays.size(), ng = nv + nr;
  size_t ni = mh.ineqs.size();
  std::vector<std::vector<bool>> inc(ni, std::vector<bool>(ng, false));
  for (size_t i = 0; i < ni; ++i) {
    for (size_t g = 0; g < nv; ++g) inc[i][g] = mh.ineqs[i].eval(vr.vertices[g]) == 0;
    for (size_t g = 0; g < nr; ++g)
      inc[i][nv + g] = dot(mh.ineqs[i].m, to_q(vr.rays[g])) == 0;
  }
  auto genkey = [](const std::vector<bool>& gs) {
    std::string k(gs.size(), '0');
    for (size_t i = 0; i < gs.size(); ++i)
      if (gs[i]) k[i] = '1';
    return k;
  };
  std::map<std::string, std::vector<bool>> found;
  std::vector<std::vector<bool>> queue;
  std::vector<bool> allg(ng, true);
  found[genkey(allg)] = allg;
  queue.push_back(allg);
  while (!queue.empty()) {
    std::vector<bool> gs = queue.back();
    queue.pop_back();
    for (size_t i = 0; i < ni; ++i) {
      std::vector<bool> sub(ng, false);
      bool any = false, shrunk = false;
      for (size_t g = 0; g < ng; ++g) {
        if (gs[g] && inc[i][g]) {
          sub[g] = true;
          any = true;
        } else if (gs[g]) {
          shrunk = true;
        }
      }
      if (!any || !shrunk) continue;
      std::string k = genkey(sub);
      if (found.count(k)) continue;
      found[k] = sub;
      queue.push_back(sub);
    }
  }
  for (const auto& [k, gs] : found) {
    VRep fvr;
    fvr.empty = false;
    for (size_t g = 0; g < nv; ++g)
      if (gs[g]) fvr.vertices.push_back(vr.vertices[g]);
    for (size_t g = 0; g < nr; ++g)
      if (gs[nv + g]) fvr.rays.push_back(vr.rays[g]);
    if (fvr.vertices.empty()) continue;  // faces of P all contain a vertex representative
    fvr.lineality = vr.lineality;
    std::vector<Constraint> cs = cons_;
    for (size_t i = 0; i < ni; ++i) {
      bool tight_all = true;
      for (size_t g = 0; g < ng && tight_all; ++g)
        if (gs[g] && !inc[i][g]) tight_all = false;
      if (tight_all) cs.emplace_back(mh.ineqs[i], true);
    }
    out.push_back(from_known(ambient_, std::move(cs), std::move(fvr)));
  }
  std::sort(out.begin(), out.end(),
            [](const Polyhedron& a, const Polyhedron& b) { return a.key() < b.key(); });
  return out;
}

std::vector<Polyhedron> Polyhedron::facets() const {
  std::vector<Polyhedron> out;
  int target = dim() - 1;
  for (auto& f : faces())
    if (f.dim() == target) out.push_back(std::move(f));
  return out;
}

Polyhedron Polyhedron::minimal_face_containing(const Polyhedron& sub) const {
  if (sub.empty()) throw std::invalid_argument("minimal face of an empty subset");
  if (!contains(sub)) throw std::invalid_argument("subset not contained in polyhedron");
  const VRep& vr = vrep();
  const MinHRep& mh = min_hrep();
  const VRep& sv = sub.vrep();
  std::vector<size_t> tight_idx;
  for (size_t i = 0; i < mh.ineqs.size(); ++i) {
    bool t = true;
    for (const auto& v : sv.vertices)
      if (mh.ineqs[i].eval(v) != 0) {
        t = false;
        break;
      }
    if (t)
      for (const auto& r : sv.rays)
        if (dot(mh.ineqs[i].m, to_q(r)) != 0) {
          t = false;
          break;
        }
    if (t) tight_idx.push_back(i);
  }
  VRep fvr;
  fvr.empty = false;
  fvr.lineality = vr.lineality;
  for (const auto& v : vr.vertices) {
    bool ok = true;
    for (size_t i : tight_idx)
      if (mh.ineqs[i].eval(v) != 0) {
        ok = false;
        break;
      }
    if (ok) fvr.vertices.push_back(v);
  }
  for (const auto& r : vr.rays) {
    bool ok = true;
    for (size_t i : tight_idx)
      if (dot(mh.ineqs[i].m, to_q(r)) != 0) {
        ok = false;
        break;
      }
    if (ok) fvr.rays.push_back(r);
  }
  std::vector<Constraint> cs = cons_;
  for (size_t i : tight_idx) cs.emplace_back(mh.ineqs[i], true);
  return from_known(ambient_, std::move(cs), std::move(fvr));
}

bool Polyhedron::has_face(const Polyhedron& candidate) const {
  if (candidate.empty() || !contains(candidate)) return false;
  return minimal_face_containing(candidate).same_set(candidate);
}

Polyhedron affine_image(const Polyhedron& p, const std::vector<QVec>& A, const QVec& b) {
  const VRep& vr = p.vrep();
  int target = (int)A.size();
  if (vr.empty) return Polyhedron::empty_set(target);
  auto apply_lin = [&](const QVec& u) {
    QVec r(target);
    for (int i = 0; i < target; ++i) r[i] = dot(A[i], u);
    return r;
  };
  std::vector<QVec> vs, rs, ls;
  for (const auto& v : vr.vertices) vs.push_back(add(apply_lin(v), b));
  for (const auto& r : vr.rays) {
    QVec d = apply_lin(to_q(r));
    if (!is_zero(d)) rs.push_back(std::move(d));
  }
  for (const auto& l : vr.lineality) {
    QVec d = apply_lin(to_q(l));
    if (!is_zero(d)) ls.push_back(std::move(d));
  }
  return Polyhedron::from_generators(target, vs, rs, ls);
}

Polyhedron affine_preimage(const Polyhedron& q, const std::vector<QVec>& A, const QVec& b,
                           int source_dim) {
  std::vector<Constraint> cs;
  for (const auto& c : q.constraints()) {
    QVec slope(source_dim, Rat(0));
    for (int i = 0; i < (int)A.size(); ++i)
      for (int j = 0; j < source_dim; ++j) slope[j] += Rat(c.f.m[i]) * A[i][j];
    Rat g = c.f.g;
    for (int i = 0; i < (int)A.size(); ++i) g += Rat(c.f.m[i]) * b[i];
    cs.push_back(make_constraint(slope, g, c.eq));
  }
  return Polyhedron::from_constraints(source_dim, std::move(cs));
}

}  // namespace tff::poly
