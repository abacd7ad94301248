#include "tff/linearity.hpp"

#include <algorithm>
#include <map>

namespace tff::trop {

namespace {

using poly::Polyhedron;

bool nonneg_over(const AffineForm& f, const Polyhedron& p) {
  int s = cx::sign_over(f, p);
  return s == 0 || s == 1;
}

/* f <= g everywhere on p */
bool dominates(const AffineForm& f, const AffineForm& g, const Polyhedron& p) {
  return nonneg_over(af_sub(g, f), p);
}

void check_cap(const std::vector<Fragment>& v, size_t cap) {
  if (v.size() > cap)
    throw CapExceeded("linearity decomposition exceeds " + std::to_string(cap) + " pieces");
}

std::vector<Fragment> frag_rec(const ExprPtr& e, const Polyhedron& region, size_t cap) {
  switch (e->kind) {
    case Expr::Kind::Affine:
      return {Fragment{region, e->affine}};
    case Expr::Kind::Inf:
      throw TropError("expression takes infinite values on the region");
    case Expr::Kind::Min: {
      /* Process likely leaders first: cheaper dominance pruning. */
      std::vector<ExprPtr> kids = e->kids;
      QVec probe = region.relint_point();
      std::stable_sort(kids.begin(), kids.end(), [&](const ExprPtr& a, const ExprPtr& b) {
        TropValue va = eval(a, probe), vb = eval(b, probe);
        if (va.inf != vb.inf) return vb.inf;
        if (va.inf) return false;
        return va.q < vb.q;
      });
      std::vector<Fragment> pieces = frag_rec(kids[0], region, cap);
      for (size_t i = 1; i < kids.size(); ++i) {
        std::vector<Fragment> next;
        for (const auto& pc : pieces) {
          for (auto& sub : frag_rec(kids[i], pc.region, cap)) {
            const AffineForm& f = pc.form;
            const AffineForm& g = sub.form;
            if (dominates(f, g, sub.region)) {
              next.push_back(Fragment{sub.region, f});
            } else if (dominates(g, f, sub.region)) {
              next.push_back(Fragment{sub.region, g});
            } else {
              AffineForm d = af_sub(f, g);
              next.push_back(
                  Fragment{sub.region.intersect(poly::Constraint(af_scale(d, Int(-1)))), f});
              next.push_back(Fragment{sub.region.intersect(poly::Constraint(d)), g});
            }
            check_cap(next, cap);
          }
        }
        pieces = std::move(next);
      }
      return pieces;
    }
    case Expr::Kind::Sum: {
      std::vector<Fragment> pieces{Fragment{region, AffineForm::constant(e->dim, 0)}};
      for (const auto& [sign, kid] : e->terms) {
        std::vector<Fragment> next;
        for (const auto& pc : pieces) {
          for (auto& sub : frag_rec(kid, pc.region, cap)) {
            AffineForm g = sign > 0 ? sub.form : af_scale(sub.form, Int(-1));
            next.push_back(Fragment{sub.region, af_add(pc.form, g)});
            check_cap(next, cap);
          }
        }
        pieces = std::move(next);
      }
      return pieces;
    }
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace

std::vector<Fragment> fragments_over(const ExprPtr& e, const Polyhedron& region,
                                     size_t max_pieces) {
  if (region.empty()) return {};
  if (e->dim != region.ambient_dim())
    throw std::invalid_argument("expression and region dimensions differ");
  return frag_rec(e, region, max_pieces);
}

std::vector<Fragment> fragments_over(const TropRationalExpr& e, const Polyhedron& region,
                                     size_t max_pieces) {
  auto num = fragments_over(e.num, region, max_pieces);
  if (!e.den) return num;
  std::vector<Fragment> out;
  for (const auto& pn : num) {
    for (auto& pd : fragments_over(e.den, pn.region, max_pieces)) {
      out.push_back(Fragment{pd.region, af_sub(pn.form, pd.form)});
      check_cap(out, max_pieces);
    }
  }
  return out;
}

LinearityRegions linearity_regions(const TropRationalExpr& e, int dim, size_t max_pieces) {
  Polyhedron full = Polyhedron::full(dim);
  auto frs = fragments_over(e, full, max_pieces);

  std::map<std::string, AffineForm> walls;
  for (const auto& fr : frs)
    for (const auto& f : fr.region.min_hrep().ineqs) {
      AffineForm c = cx::canonical_hyperplane(f);
      walls.emplace(print(c), c);
    }
  std::vector<AffineForm> hps;
  for (auto& [k, f] : walls) hps.push_back(f);
  cx::Arrangement arr = cx::arrangement_complex(dim, hps, max_pieces);

  auto form_at = [&](const QVec& p) -> const AffineForm& {
    for (const auto& fr : frs)
      if (fr.region.contains(p)) return fr.form;
    throw std::logic_error("point escaped the linearity decomposition");
  };

  /* Group the arrangement cells by form and try to merge each group into a
   * single hull; keep the merge only if the hulls still form a complex
   * pairwise (no group may capture full-dimensional territory of another). */
  std::map<std::string, std::pair<AffineForm, std::vector<size_t>>> groups;
  for (size_t i : arr.complex.maximal()) {
    const AffineForm& f = form_at(arr.complex.cell(i).relint_point());
    auto& g = groups[print(f)];
    g.first = f;
    g.second.push_back(i);
  }

  std::vector<Polyhedron> hulls;
  std::vector<AffineForm> hull_forms;
  for (auto& [k, g] : groups) {
    std::vector<QVec> verts;
    std::vector<QVec> rays, lines;
    for (size_t i : g.second) {
      const auto& vr = arr.complex.cell(i).vrep();
      for (const auto& v : vr.vertices) verts.push_back(v);
      for (const auto& r : vr.rays) rays.push_back(to_q(r));
      for (const auto& l : vr.lineality) lines.push_back(to_q(l));
    }
    hulls.push_back(Polyhedron::from_generators(dim, verts, rays, lines));
    hull_forms.push_back(g.first);
  }

  LinearityRegions out;
  std::vector<std::string> issues;
  auto merged = cx::PolyhedralComplex::validated(dim, hulls, true, issues);
  if (merged && merged->is_complete() && merged->maximal().size() == hulls.size()) {
    out.complex = std::move(*merged);
    for (size_t i = 0; i < hulls.size(); ++i) {
      auto idx = out.complex.find(hulls[i].key());
      if (!idx) throw std::logic_error("merged cell lost");
      out.forms.emplace(*idx, hull_forms[i]);
    }
  } else {
    out.complex = arr.complex;
    for (size_t i : out.complex.maximal())
      out.forms.emplace(i, form_at(out.complex.cell(i).relint_point()));
  }
  return out;
}

}  // namespace tff::trop
