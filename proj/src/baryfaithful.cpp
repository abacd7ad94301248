#include "tff/baryfaithful.hpp"

#include <algorithm>
#include <functional>

#include "tff/lattice.hpp"

namespace tff::bary {

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

std::string pair_id(const AbstractComplex& a, const std::vector<size_t>& chain,
                    const std::vector<std::set<std::string>>& sets) {
  std::string s = "[";
  for (size_t i = 0; i < chain.size(); ++i) {
    if (i) s += "<";
    s += a.elements()[chain[i]].id;
  }
  s += ";";
  for (size_t j = 0; j < sets.size(); ++j) {
    if (j) s += "<";
    s += set_str(sets[j]);
  }
  return s + "]";
}

QVec indicator(const std::map<std::string, int>& axis, const std::set<std::string>& s, int dim) {
  QVec v((size_t)dim, 0);
  for (const auto& lbl : s) v[axis.at(lbl)] = 1;
  return v;
}

std::vector<ZVec> direction_gens(const poly::Polyhedron& p) {
  std::vector<ZVec> dirs;
  const auto& vr = p.vrep();
  for (size_t i = 1; i < vr.vertices.size(); ++i)
    dirs.push_back(primitive(sub(vr.vertices[i], vr.vertices[0])));
  for (const auto& r : vr.rays) dirs.push_back(r);
  for (const auto& l : vr.lineality) dirs.push_back(l);
  return dirs;
}

}  // namespace

QVec barycenter(const Realization& r, size_t delta_elem) {
  const AbstractComplex& a = *r.abs;
  const auto& zeta = a.elements()[delta_elem].zeta;
  std::set<std::string> vf(a.finite_vertices().begin(), a.finite_vertices().end());
  size_t nf = 0;
  for (const auto& v : zeta)
    if (vf.count(v)) ++nf;
  if (nf == 0) throw std::invalid_argument("barycenter of an element without finite vertices");
  QVec out(r.coords.size(), 0);
  Rat w(1, (long)nf);
  for (size_t i = 0; i < r.coords.size(); ++i)
    if (zeta.count(r.coords[i])) out[i] = w;
  return out;
}

BarySubdivision barycentric_subdivision(const Realization& r, size_t max_cells) {
  BarySubdivision b;
  b.base = std::make_shared<Realization>(r);
  const AbstractComplex& A = *r.abs;
  int dim = (int)r.coords.size();
  std::map<std::string, int> axis;
  for (int i = 0; i < dim; ++i) axis[r.coords[i]] = i;
  std::set<std::string> vinf(A.infinite_vertices().begin(), A.infinite_vertices().end());

  std::vector<QVec> bary_pt(A.size());
  for (size_t t = 0; t < A.size(); ++t)
    if (A.in_delta(t)) bary_pt[t] = barycenter(r, t);

  /* Chains of Delta-elements in increasing order. */
  std::vector<std::vector<size_t>> chains;
  std::function<void(std::vector<size_t>&)> grow = [&](std::vector<size_t>& cur) {
    chains.push_back(cur);
    size_t last = cur.back();
    for (size_t t = 0; t < A.size(); ++t) {
      if (t == last || !A.leq(last, t) || A.leq(t, last)) continue;
      cur.push_back(t);
      grow(cur);
      cur.pop_back();
    }
  };
  for (size_t t : A.delta()) {
    std::vector<size_t> cur{t};
    grow(cur);
  }

  /* Per chain: nested families of nonempty infinite-label subsets of the
   * bottom element. */
  for (const auto& chain : chains) {
    std::set<std::string> zinf;
    for (const auto& v : A.elements()[chain.front()].zeta)
      if (vinf.count(v)) zinf.insert(v);
    if (zinf.size() > 16) throw trop::CapExceeded("too many infinite vertices on one cell");
    std::vector<std::string> zl(zinf.begin(), zinf.end());
    std::vector<std::set<std::string>> subs;
    for (size_t mask = 1; mask < ((size_t)1 << zl.size()); ++mask) {
      std::set<std::string> s;
      for (size_t i = 0; i < zl.size(); ++i)
        if (mask & ((size_t)1 << i)) s.insert(zl[i]);
      subs.push_back(std::move(s));
    }
    std::vector<std::vector<std::set<std::string>>> fams{{}};
    std::function<void(std::vector<std::set<std::string>>&)> grow_fam =
        [&](std::vector<std::set<std::string>>& cur) {
          for (const auto& s : subs) {
            if (!cur.empty()) {
              const auto& last = cur.back();
              if (s.size() <= last.size() ||
                  !std::includes(s.begin(), s.end(), last.begin(), last.end()))
                continue;
            }
            cur.push_back(s);
            fams.push_back(cur);
            grow_fam(cur);
            cur.pop_back();
          }
        };
    std::vector<std::set<std::string>> cur;
    grow_fam(cur);

    for (const auto& fam : fams) {
      BaryCell cell;
      cell.chain = chain;
      cell.sets = fam;
      std::vector<QVec> verts;
      for (size_t t : chain) verts.push_back(bary_pt[t]);
      std::vector<QVec> rays;
      for (const auto& s : fam) rays.push_back(indicator(axis, s, dim));
      cell.realized = poly::Polyhedron::from_generators(dim, verts, rays, {});
      b.cells.push_back(std::move(cell));
      if (b.cells.size() > max_cells)
        throw trop::CapExceeded("subdivision exceeds the cell cap of " +
                                std::to_string(max_cells));
    }
  }

  std::vector<poly::Polyhedron> polys;
  for (const auto& c : b.cells) polys.push_back(c.realized);
  b.complex = PolyhedralComplex::from_cells_unchecked(dim, polys);
  if (b.complex.size() != b.cells.size())
    throw std::logic_error("subdivision cells are not closed under faces");
  for (size_t i = 0; i < b.cells.size(); ++i) {
    auto idx = b.complex.find(b.cells[i].realized.key());
    if (!idx) throw std::logic_error("subdivision cell lost");
    b.cells[i].complex_cell = *idx;
    b.cell_of_key[b.cells[i].realized.key()] = i;
  }

  /* The subdivision as an abstract complex over barycenter labels and
   * subset labels. */
  std::vector<std::string> vf2, vi2;
  for (size_t t : A.delta()) vf2.push_back("p." + A.elements()[t].id);
  std::set<std::string> occurring;
  for (const auto& c : b.cells)
    for (const auto& s : c.sets) occurring.insert("S." + set_str(s));
  vi2.assign(occurring.begin(), occurring.end());

  struct PrimeElem {
    std::vector<size_t> chain;
    std::vector<std::set<std::string>> sets;
  };
  std::map<std::string, PrimeElem> prime_pool;
  prime_pool.emplace(pair_id(A, {}, {}), PrimeElem{{}, {}});
  for (const auto& c : b.cells) {
    prime_pool.emplace(pair_id(A, c.chain, c.sets), PrimeElem{c.chain, c.sets});
    for (size_t j = 0; j < c.sets.size(); ++j) {
      /* Families only ever occur below cells; collect the chain-free
       * sub-pairs as well. */
      std::vector<std::set<std::string>> sub;
      for (size_t k = 0; k <= j; ++k) sub.push_back(c.sets[k]);
      prime_pool.emplace(pair_id(A, {}, sub), PrimeElem{{}, sub});
    }
  }
  /* Sub-pairs with a partial family need enumerating too: every subfamily of
   * an occurring family occurs with the same chains, which the loops above
   * already generate; chain-free elements need arbitrary subfamilies. */
  {
    std::vector<std::pair<std::string, PrimeElem>> snapshot(prime_pool.begin(),
                                                            prime_pool.end());
    for (const auto& [id, pe] : snapshot) {
      size_t l = pe.sets.size();
      for (size_t mask = 0; mask < ((size_t)1 << l); ++mask) {
        std::vector<std::set<std::string>> sub;
        for (size_t j = 0; j < l; ++j)
          if (mask & ((size_t)1 << j)) sub.push_back(pe.sets[j]);
        prime_pool.emplace(pair_id(A, {}, sub), PrimeElem{{}, sub});
      }
    }
  }

  std::vector<cx::AbstractElement> elems;
  std::map<std::string, size_t> prime_index;
  for (const auto& [id, pe] : prime_pool) {
    prime_index[id] = elems.size();
    cx::AbstractElement e;
    e.id = id;
    for (size_t t : pe.chain) e.zeta.insert("p." + A.elements()[t].id);
    for (const auto& s : pe.sets) e.zeta.insert("S." + set_str(s));
    elems.push_back(std::move(e));
  }
  for (auto& [id, pe] : prime_pool) {
    auto& e = elems[prime_index[id]];
    for (size_t i = 0; i < pe.chain.size(); ++i) {
      std::vector<size_t> sub = pe.chain;
      sub.erase(sub.begin() + (long)i);
      e.covers.push_back(prime_index.at(pair_id(A, sub, pe.sets)));
    }
    for (size_t j = 0; j < pe.sets.size(); ++j) {
      std::vector<std::set<std::string>> sub = pe.sets;
      sub.erase(sub.begin() + (long)j);
      e.covers.push_back(prime_index.at(pair_id(A, pe.chain, sub)));
    }
  }
  std::vector<std::string> issues;
  auto prime = cx::AbstractComplex::make(vf2, vi2, std::move(elems), issues);
  if (!prime)
    throw std::logic_error("subdivision poset is not an abstract complex: " + issues.front());
  b.prime = std::move(*prime);

  b.tag.abs = r.abs;
  for (const auto& c : b.cells) b.tag.ancestor[c.realized.key()] = c.chain.back();
  return b;
}

Embedding embed_barycentric(const BarySubdivision& b, const std::map<size_t, Rat>& vertex_scale) {
  Embedding e;
  e.bary = std::make_shared<BarySubdivision>(b);
  const AbstractComplex& A = *b.base->abs;
  const Realization& R = *b.base;
  int src_dim = (int)R.coords.size();
  std::map<std::string, int> src_axis;
  for (int i = 0; i < src_dim; ++i) src_axis[R.coords[i]] = i;
  std::set<std::string> vf(A.finite_vertices().begin(), A.finite_vertices().end());

  /* Image axes: one per Delta-element, then one per occurring subset. */
  std::map<size_t, int> delta_axis;
  for (size_t t : A.delta()) {
    delta_axis[t] = (int)e.image_coords.size();
    e.image_coords.push_back("P." + A.elements()[t].id);
  }
  std::map<std::string, int> set_axis;
  {
    std::set<std::string> occ;
    for (const auto& c : b.cells)
      for (const auto& s : c.sets) occ.insert(set_str(s));
    for (const auto& s : occ) {
      set_axis[s] = (int)e.image_coords.size();
      e.image_coords.push_back("S." + s);
    }
  }
  int img_dim = (int)e.image_coords.size();

  auto scale_of = [&](size_t t) -> Rat {
    auto it = vertex_scale.find(t);
    return it == vertex_scale.end() ? Rat(1) : it->second;
  };
  auto finite_count = [&](size_t t) {
    size_t nf = 0;
    for (const auto& v : A.elements()[t].zeta)
      if (vf.count(v)) ++nf;
    return nf;
  };
  auto phi_vertex = [&](size_t t) {
    QVec v((size_t)img_dim, 0);
    v[delta_axis.at(t)] = scale_of(t) / Rat((long)finite_count(t));
    return v;
  };

  /* Every image cell is a scaled simplex times an orthant on disjoint axes,
   * so both representations are written down directly, and the cell list is
   * face-closed because the bary cells are. */
  std::vector<poly::Polyhedron> img_polys;
  for (const auto& c : b.cells) {
    if (c.chain.empty()) throw std::logic_error("bary cell without chain");
    poly::VRep vr;
    vr.empty = false;
    std::vector<std::pair<int, Rat>> weights;  // axis, finite count / scale
    for (size_t t : c.chain) {
      vr.vertices.push_back(phi_vertex(t));
      weights.emplace_back(delta_axis.at(t), Rat((long)finite_count(t)) / scale_of(t));
    }
    std::vector<char> support((size_t)img_dim, 0);
    for (const auto& [ax, w] : weights) support[(size_t)ax] = 1;
    for (const auto& s : c.sets) {
      ZVec rz((size_t)img_dim, 0);
      int ax = set_axis.at(set_str(s));
      rz[(size_t)ax] = 1;
      support[(size_t)ax] = 1;
      vr.rays.push_back(std::move(rz));
    }
    std::sort(vr.vertices.begin(), vr.vertices.end(),
              [](const QVec& x, const QVec& y) { return compare(x, y) < 0; });
    std::sort(vr.rays.begin(), vr.rays.end(),
              [](const ZVec& x, const ZVec& y) { return compare(x, y) < 0; });

    Int den = 1;
    for (const auto& [ax, w] : weights) den = lcm(den, w.get_den());
    ZVec meq((size_t)img_dim, 0);
    for (const auto& [ax, w] : weights) meq[(size_t)ax] = w.get_num() * (den / w.get_den());
    std::vector<poly::Constraint> cons;
    cons.emplace_back(trop::AffineForm(std::move(meq), Rat(-den)), true);
    for (int i = 0; i < img_dim; ++i) {
      ZVec m((size_t)img_dim, 0);
      m[(size_t)i] = 1;
      cons.emplace_back(trop::AffineForm(std::move(m), Rat(0)), !support[(size_t)i]);
    }
    img_polys.push_back(poly::Polyhedron::from_known(img_dim, std::move(cons), std::move(vr)));
  }
  e.image = PolyhedralComplex::from_closed_cells_unchecked(img_dim, img_polys);
  e.image_cell.assign(b.cells.size(), 0);
  for (size_t i = 0; i < b.cells.size(); ++i) {
    auto idx = e.image.find(img_polys[i].key());
    if (!idx) throw std::logic_error("image cell lost");
    e.image_cell[i] = *idx;
  }

  /* Cellwise linear map: triangular column assignment sending the label
   * indicator of each chain element to its scaled image axis and each subset
   * indicator to its subset axis. */
  for (const auto& c : b.cells) {
    std::vector<QVec> rows((size_t)img_dim, QVec((size_t)src_dim, 0));
    auto set_col = [&](const std::string& src_label, const QVec& img_col) {
      int col = src_axis.at(src_label);
      for (int i = 0; i < img_dim; ++i) rows[i][col] = img_col[i];
    };
    auto axis_vec = [&](int idx, const Rat& val) {
      QVec v((size_t)img_dim, 0);
      v[idx] = val;
      return v;
    };

    std::set<std::string> prev;
    QVec prev_img((size_t)img_dim, 0);
    for (size_t j = 0; j < c.sets.size(); ++j) {
      const auto& s = c.sets[j];
      std::vector<std::string> fresh;
      std::set_difference(s.begin(), s.end(), prev.begin(), prev.end(),
                          std::back_inserter(fresh));
      if (fresh.empty()) throw std::logic_error("family not strictly nested");
      QVec img = axis_vec(set_axis.at(set_str(s)), 1);
      set_col(fresh.front(), sub(img, prev_img));
      prev = s;
      prev_img = img;
    }
    std::set<std::string> prev_chain = prev;  // covered source labels so far
    for (size_t i = 0; i < c.chain.size(); ++i) {
      size_t t = c.chain[i];
      const auto& zt = A.elements()[t].zeta;
      std::vector<std::string> fresh;
      std::set_difference(zt.begin(), zt.end(), prev_chain.begin(), prev_chain.end(),
                          std::back_inserter(fresh));
      if (fresh.empty()) throw std::logic_error("chain labels not strictly nested");
      QVec img = axis_vec(delta_axis.at(t), scale_of(t));
      set_col(fresh.front(), sub(img, prev_img));
      prev_chain = zt;
      prev_img = img;
    }
    e.psi.push_back(std::move(rows));
  }
  return e;
}

LatticeCheck lattice_preservation_check(const Embedding& e) {
  const BarySubdivision& b = *e.bary;
  int src_dim = b.complex.ambient();
  int img_dim = (int)e.image_coords.size();
  LatticeCheck out;
  for (size_t ci = 0; ci < b.cells.size(); ++ci) {
    const BaryCell& c = b.cells[ci];
    out.cell = ci;

    std::vector<ZVec> irows;
    bool integral = true;
    for (const auto& row : e.psi[ci]) {
      ZVec zr(row.size());
      for (size_t j = 0; j < row.size(); ++j) {
        if (row[j].get_den() != 1) {
          integral = false;
          break;
        }
        zr[j] = row[j].get_num();
      }
      if (!integral) break;
      irows.push_back(std::move(zr));
    }
    if (!integral) {
      out.detail = "cell map matrix is not integral";
      return out;
    }

    const auto& vr = c.realized.vrep();
    std::vector<ZVec> form_gens;
    for (size_t i = 0; i < vr.vertices.size(); ++i)
      for (size_t j = i + 1; j < vr.vertices.size(); ++j)
        form_gens.push_back(primitive(sub(vr.vertices[j], vr.vertices[i])));
    for (const auto& r : vr.rays) form_gens.push_back(r);
    poly::Lattice n_form = poly::lattice_from_generators(src_dim, form_gens);
    poly::Lattice n_geom = poly::saturation(src_dim, direction_gens(c.realized));
    if (!poly::lattice_equal(n_form, n_geom)) {
      out.detail = "difference generators span a different lattice than the cell";
      return out;
    }

    const auto& ivr = e.image.cell(e.image_cell[ci]).vrep();
    std::vector<ZVec> iform;
    for (size_t i = 0; i < ivr.vertices.size(); ++i)
      for (size_t j = i + 1; j < ivr.vertices.size(); ++j)
        iform.push_back(primitive(sub(ivr.vertices[j], ivr.vertices[i])));
    for (const auto& r : ivr.rays) iform.push_back(r);
    poly::Lattice n2_form = poly::lattice_from_generators(img_dim, iform);
    poly::Lattice n2_geom =
        poly::saturation(img_dim, direction_gens(e.image.cell(e.image_cell[ci])));
    if (!poly::lattice_equal(n2_form, n2_geom)) {
      out.detail = "image difference generators span a different lattice than the image cell";
      return out;
    }

    if (!poly::is_unimodular(irows, n_geom, n2_geom)) {
      out.detail = "cell map does not carry the cell lattice onto the image lattice";
      return out;
    }
  }
  out.ok = true;
  out.detail = "lattices preserved on every cell";
  out.cell = 0;
  return out;
}

std::vector<pwa::FacewiseAffine> coordinate_functions(const Embedding& e) {
  const BarySubdivision& b = *e.bary;
  int img_dim = (int)e.image_coords.size();
  auto carrier = std::make_shared<PolyhedralComplex>(b.complex);

  std::vector<pwa::FacewiseAffine> out;
  for (int i = 0; i < img_dim; ++i) {
    std::map<size_t, trop::AffineForm> pieces;
    for (size_t m : carrier->maximal()) {
      auto it = b.cell_of_key.find(carrier->cell(m).key());
      if (it == b.cell_of_key.end()) throw std::logic_error("carrier cell without origin");
      const QVec& row = e.psi[it->second][(size_t)i];
      ZVec zr(row.size());
      for (size_t j = 0; j < row.size(); ++j) {
        if (row[j].get_den() != 1)
          throw std::invalid_argument("cell maps are not integral; no coordinate functions");
        zr[j] = row[j].get_num();
      }
      pieces.emplace(m, trop::AffineForm(std::move(zr), 0));
    }
    std::vector<std::string> issues;
    auto f = pwa::FacewiseAffine::make(carrier, pieces, issues, b.tag);
    if (!f) throw std::logic_error("coordinate is not facewise: " + issues.front());
    out.push_back(std::move(*f));
  }
  return out;
}

std::vector<CellAffineMap> embedding_maps(const Embedding& e) {
  const BarySubdivision& b = *e.bary;
  int img_dim = (int)e.image_coords.size();
  std::vector<CellAffineMap> out;
  for (size_t m : b.complex.maximal()) {
    auto it = b.cell_of_key.find(b.complex.cell(m).key());
    if (it == b.cell_of_key.end()) throw std::logic_error("carrier cell without origin");
    CellAffineMap cm;
    cm.a = e.psi[it->second];
    cm.b = QVec((size_t)img_dim, 0);
    out.push_back(std::move(cm));
  }
  return out;
}

FaithfulReport faithfulness_check(const PolyhedralComplex& sigma,
                                  const std::vector<CellAffineMap>& maps, int image_dim) {
  FaithfulReport rep;
  const auto& tops = sigma.maximal();
  if (maps.size() != tops.size())
    throw std::invalid_argument("one map per maximal cell required");
  int n = sigma.ambient();

  // Per-cell checks first.  The image recession lattice is spanned by the
  // mapped direction generators, so no image conversion is needed for it.
  std::vector<poly::Polyhedron> images;
  for (size_t a = 0; a < tops.size(); ++a) {
    const poly::Polyhedron& A = sigma.cell(tops[a]);
    std::vector<ZVec> dirs = direction_gens(A);

    std::vector<QVec> qd, qi;
    for (const auto& d : dirs) {
      qd.push_back(to_q(d));
      QVec y((size_t)image_dim, 0);
      for (int i = 0; i < image_dim; ++i) y[(size_t)i] = dot(maps[a].a[(size_t)i], to_q(d));
      qi.push_back(std::move(y));
    }
    if (poly::q_rank(qd) != poly::q_rank(qi)) {
      rep.detail = "cell map is not injective on its cell";
      rep.cell = tops[a];
      return rep;
    }

    bool integral = true;
    std::vector<ZVec> irows;
    for (const auto& row : maps[a].a) {
      ZVec zr(row.size());
      for (size_t j = 0; j < row.size(); ++j) {
        if (row[j].get_den() != 1) {
          integral = false;
          break;
        }
        zr[j] = row[j].get_num();
      }
      if (!integral) break;
      irows.push_back(std::move(zr));
    }
    if (!integral) {
      rep.detail = "cell map is not integral";
      rep.cell = tops[a];
      return rep;
    }
    poly::Lattice nsrc = poly::saturation(n, dirs);
    std::vector<ZVec> idirs;
    for (const auto& y : qi) {
      ZVec z = primitive(y);
      if (!is_zero(z)) idirs.push_back(std::move(z));
    }
    poly::Lattice nimg = poly::saturation(image_dim, idirs);
    if (!poly::is_unimodular(irows, nsrc, nimg)) {
      rep.detail = "cell map does not identify the cell lattice with the image lattice";
      rep.cell = tops[a];
      return rep;
    }
    images.push_back(poly::affine_image(A, maps[a].a, maps[a].b));
  }

  for (size_t a = 0; a < tops.size(); ++a) {
    for (size_t bidx = 0; bidx < tops.size(); ++bidx) {
      if (a == bidx) continue;
      const poly::Polyhedron& A = sigma.cell(tops[a]);
      const poly::Polyhedron& B = sigma.cell(tops[bidx]);
      poly::Polyhedron meet = A.intersect(B);

      if (a < bidx && !meet.empty()) {
        const auto& vr = meet.vrep();
        auto apply = [&](const CellAffineMap& m, const QVec& x) {
          QVec y = m.b;
          for (int i = 0; i < image_dim; ++i) y[i] += dot(m.a[(size_t)i], x);
          return y;
        };
        bool agree = true;
        for (const auto& v : vr.vertices)
          if (compare(apply(maps[a], v), apply(maps[bidx], v)) != 0) agree = false;
        auto dir_agree = [&](const QVec& d) {
          for (int i = 0; i < image_dim; ++i)
            if (dot(maps[a].a[(size_t)i], d) != dot(maps[bidx].a[(size_t)i], d)) return false;
          return true;
        };
        for (const auto& r : vr.rays)
          if (!dir_agree(to_q(r))) agree = false;
        for (const auto& l : vr.lineality)
          if (!dir_agree(to_q(l))) agree = false;
        if (!agree) {
          rep.detail = "maps disagree on a shared face";
          rep.pair = {tops[a], tops[bidx]};
          return rep;
        }
      }

      /* meet is always inside back once shared-face agreement holds, so
       * exactness reduces to back being inside the meet's constraint set;
       * a nonempty violation shows up as a violated generator. */
      poly::Polyhedron pre = poly::affine_preimage(images[bidx], maps[a].a, maps[a].b, n);
      poly::Polyhedron back = A.intersect(pre);
      const auto& bvr = back.vrep();
      bool exact = true;
      auto sat = [&](const QVec& x, bool dir) {
        for (const auto& c : meet.constraints()) {
          Rat v = dir ? dot(c.f.m, x) : c.f.eval(x);
          if (c.eq ? v != 0 : v < 0) return false;
        }
        return true;
      };
      for (const auto& v : bvr.vertices)
        if (!sat(v, false)) exact = false;
      for (const auto& r : bvr.rays)
        if (!sat(to_q(r), true)) exact = false;
      for (const auto& l : bvr.lineality)
        for (const auto& c : meet.constraints())
          if (dot(c.f.m, to_q(l)) != 0) exact = false;
      if (!exact) {
        rep.detail = "preimage of a neighbor image exceeds the shared face";
        rep.pair = {tops[a], tops[bidx]};
        return rep;
      }
    }
  }

  // image(A) meet image(B) equals image_A(A meet B): pairwise exactness plus
  // injectivity identify it with a face of both images, so the images already
  // form a valid complex and no rebuild is required.
  rep.ok = true;
  rep.detail = "faithful";
  return rep;
}

}  // namespace tff::bary
