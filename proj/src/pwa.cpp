#include "tff/pwa.hpp"

#include <algorithm>
#include <stdexcept>

#include "tff/linearity.hpp"

namespace tff::pwa {

namespace {

/* d identically zero on p, by generators. */
bool vanishes_on(const AffineForm& d, const Polyhedron& p) {
  return cx::sign_over(d, p) == 0;
}

bool nonneg_on(const AffineForm& d, const Polyhedron& p) {
  int s = cx::sign_over(d, p);
  return s == 0 || s == 1;
}

/* A generator-derived point of p where the affine form d is nonzero;
 * requires that d not vanish on p. */
QVec nonzero_point(const AffineForm& d, const Polyhedron& p) {
  const auto& vr = p.vrep();
  for (const auto& v : vr.vertices)
    if (d.eval(v) != 0) return v;
  const QVec& v0 = vr.vertices.front();
  for (const auto& r : vr.rays)
    if (dot(d.m, r) != 0) return add(v0, to_q(r));
  for (const auto& l : vr.lineality)
    if (dot(d.m, l) != 0) return add(v0, to_q(l));
  throw std::logic_error("form vanishes on every generator");
}

}  // namespace

std::optional<FacewiseAffine> FacewiseAffine::make(std::shared_ptr<const PolyhedralComplex> cx,
                                                   const std::map<size_t, AffineForm>& pieces,
                                                   std::vector<std::string>& issues,
                                                   std::optional<AbstractTag> tag) {
  FacewiseAffine f;
  f.cx_ = std::move(cx);
  f.tag_ = std::move(tag);
  const auto& C = *f.cx_;
  size_t n = C.size();
  f.piece_.assign(n, AffineForm());

  for (size_t i : C.maximal()) {
    auto it = pieces.find(i);
    if (it == pieces.end()) {
      issues.push_back("maximal cell " + std::to_string(i) + " has no affine form");
      continue;
    }
    if (it->second.dim() != C.ambient()) {
      issues.push_back("form on cell " + std::to_string(i) + " has wrong dimension");
      continue;
    }
    f.piece_[i] = it->second;
  }
  if (!issues.empty()) return std::nullopt;

  const auto& tops = C.maximal();
  for (size_t a = 0; a < tops.size(); ++a)
    for (size_t b = a + 1; b < tops.size(); ++b) {
      Polyhedron meet = C.cell(tops[a]).intersect(C.cell(tops[b]));
      if (meet.empty()) continue;
      AffineForm d = af_sub(f.piece_[tops[a]], f.piece_[tops[b]]);
      if (!vanishes_on(d, meet))
        issues.push_back("forms on cells " + std::to_string(tops[a]) + " and " +
                         std::to_string(tops[b]) + " disagree on their shared face");
    }
  if (!issues.empty()) return std::nullopt;

  /* Lower faces inherit from the first containing maximal cell. */
  for (size_t i = 0; i < n; ++i) {
    bool top = std::find(tops.begin(), tops.end(), i) != tops.end();
    if (top) continue;
    for (size_t j : tops)
      if (C.leq(i, j)) {
        f.piece_[i] = f.piece_[j];
        break;
      }
  }
  return f;
}

Rat FacewiseAffine::eval(const QVec& u) const {
  auto c = cx_->locate(u);
  if (!c) throw std::domain_error("point lies outside the carrier of the function");
  return piece_[*c].eval(u);
}

Rat FacewiseAffine::slope_at_infinity(size_t cell, const ZVec& r) const {
  if (!cx_->cell(cell).contains_ray(r))
    throw std::invalid_argument("direction is not a recession direction of the cell");
  return Rat(dot(piece_[cell].m, r));
}

RatResult rat_membership(const FacewiseAffine& f) {
  /* Parallel half-lines carry equal direction vectors.  For realizations of
   * an abstract complex the direction determines the poset element at
   * infinity (label sets are unique on realizable complexes), so the same
   * grouping applies with or without the tag. */
  cx::ParallelClasses pc = cx::parallel_classes(f.complex());
  for (size_t k = 0; k < pc.directions.size(); ++k) {
    const auto& mem = pc.members[k];
    for (size_t i = 1; i < mem.size(); ++i) {
      Rat s0 = Rat(dot(f.form_on(mem[0].first).m, pc.directions[k]));
      Rat si = Rat(dot(f.form_on(mem[i].first).m, pc.directions[k]));
      if (s0 != si) {
        RatResult r;
        r.member = false;
        RatWitness w;
        w.cell_a = mem[0].first;
        w.cell_b = mem[i].first;
        w.direction = pc.directions[k];
        w.slope_a = s0;
        w.slope_b = si;
        r.witness = w;
        return r;
      }
    }
  }
  return RatResult{true, std::nullopt};
}

FacewiseAffine fa_tropical_add(const FacewiseAffine& f, const FacewiseAffine& g) {
  const auto& A = f.complex();
  const auto& B = g.complex();
  std::vector<Polyhedron> cells;
  std::vector<AffineForm> forms;
  for (size_t i : A.maximal())
    for (size_t j : B.maximal()) {
      Polyhedron meet = A.cell(i).intersect(B.cell(j));
      if (meet.empty()) continue;
      const AffineForm& ff = f.form_on(i);
      const AffineForm& gg = g.form_on(j);
      AffineForm d = af_sub(ff, gg);
      int s = cx::sign_over(d, meet);
      if (s == 0 || s == -1) {
        cells.push_back(std::move(meet));
        forms.push_back(ff);
      } else if (s == 1) {
        cells.push_back(std::move(meet));
        forms.push_back(gg);
      } else {
        cells.push_back(meet.intersect(poly::Constraint(af_scale(d, Int(-1)))));
        forms.push_back(ff);
        cells.push_back(meet.intersect(poly::Constraint(d)));
        forms.push_back(gg);
      }
    }
  auto cx_out = std::make_shared<cx::PolyhedralComplex>(
      cx::PolyhedralComplex::from_cells_unchecked(A.ambient(), cells));
  std::map<std::string, const AffineForm*> by_key;
  for (size_t i = 0; i < cells.size(); ++i) by_key[cells[i].key()] = &forms[i];
  std::map<size_t, AffineForm> pieces;
  for (size_t i : cx_out->maximal()) {
    auto it = by_key.find(cx_out->cell(i).key());
    if (it == by_key.end()) throw std::logic_error("refinement cell lost its form");
    pieces.emplace(i, *it->second);
  }
  std::vector<std::string> issues;
  auto out = FacewiseAffine::make(cx_out, pieces, issues);
  if (!out) throw std::logic_error("tropical sum is not facewise: " + issues.front());
  return *out;
}

namespace {

FacewiseAffine combine_sum(const FacewiseAffine& f, const FacewiseAffine& g, int sign_g) {
  const auto& A = f.complex();
  const auto& B = g.complex();
  std::vector<Polyhedron> cells;
  std::vector<AffineForm> forms;
  for (size_t i : A.maximal())
    for (size_t j : B.maximal()) {
      Polyhedron meet = A.cell(i).intersect(B.cell(j));
      if (meet.empty()) continue;
      AffineForm gg = sign_g > 0 ? g.form_on(j) : af_scale(g.form_on(j), Int(-1));
      cells.push_back(std::move(meet));
      forms.push_back(af_add(f.form_on(i), gg));
    }
  auto cx_out = std::make_shared<cx::PolyhedralComplex>(
      cx::PolyhedralComplex::from_cells_unchecked(A.ambient(), cells));
  std::map<std::string, const AffineForm*> by_key;
  for (size_t i = 0; i < cells.size(); ++i) by_key[cells[i].key()] = &forms[i];
  std::map<size_t, AffineForm> pieces;
  for (size_t i : cx_out->maximal()) {
    auto it = by_key.find(cx_out->cell(i).key());
    if (it == by_key.end()) throw std::logic_error("refinement cell lost its form");
    pieces.emplace(i, *it->second);
  }
  std::vector<std::string> issues;
  auto out = FacewiseAffine::make(cx_out, pieces, issues);
  if (!out) throw std::logic_error("sum is not facewise: " + issues.front());
  return *out;
}

}  // namespace

FacewiseAffine fa_sum(const FacewiseAffine& f, const FacewiseAffine& g) {
  return combine_sum(f, g, +1);
}

FacewiseAffine fa_negate(const FacewiseAffine& f) {
  std::map<size_t, AffineForm> pieces;
  for (size_t i : f.complex().maximal()) pieces.emplace(i, af_scale(f.form_on(i), Int(-1)));
  std::vector<std::string> issues;
  auto out = FacewiseAffine::make(f.complex_ptr(), pieces, issues, f.tag());
  if (!out) throw std::logic_error("negation failed: " + issues.front());
  return *out;
}

FacewiseAffine fa_restrict(const FacewiseAffine& f, const PolyhedralComplex& w) {
  const auto& A = f.complex();
  std::vector<Polyhedron> cells;
  std::vector<AffineForm> forms;
  for (size_t j : w.maximal()) {
    bool covered = false;
    for (size_t i : A.maximal()) {
      Polyhedron meet = A.cell(i).intersect(w.cell(j));
      if (meet.empty()) continue;
      covered = true;
      cells.push_back(std::move(meet));
      forms.push_back(f.form_on(i));
    }
    if (!covered)
      throw std::domain_error("restriction target reaches outside the carrier");
  }
  auto cx_out = std::make_shared<cx::PolyhedralComplex>(
      cx::PolyhedralComplex::from_cells_unchecked(A.ambient(), cells));
  std::map<std::string, const AffineForm*> by_key;
  for (size_t i = 0; i < cells.size(); ++i) by_key[cells[i].key()] = &forms[i];
  std::map<size_t, AffineForm> pieces;
  for (size_t i : cx_out->maximal()) {
    auto it = by_key.find(cx_out->cell(i).key());
    if (it == by_key.end()) throw std::logic_error("restriction cell lost its form");
    pieces.emplace(i, *it->second);
  }
  std::vector<std::string> issues;
  auto out = FacewiseAffine::make(cx_out, pieces, issues);
  if (!out) throw std::logic_error("restriction is not facewise: " + issues.front());
  return *out;
}

ScaleOutcome dominating_scale(const FacewiseAffine& f, const FacewiseAffine& g,
                              const Polyhedron& inner) {
  const auto& C = f.complex();
  if (&g.complex() != &C && !(g.complex().size() == C.size() && [&] {
        for (size_t i = 0; i < C.size(); ++i)
          if (C.cell(i).key() != g.complex().cell(i).key()) return false;
        return true;
      }()))
    return ScalePreconditionFailure{"the two functions live on different complexes", {}};

  /* Preconditions: both vanish on the inner region, f is nonnegative with
   * zero set inside it, and f is concave piecewise. */
  for (size_t i : C.maximal()) {
    const Polyhedron& P = C.cell(i);
    Polyhedron inside = P.intersect(inner);
    if (!inside.empty()) {
      if (!vanishes_on(f.form_on(i), inside))
        return ScalePreconditionFailure{"f does not vanish on the inner region",
                                        nonzero_point(f.form_on(i), inside)};
      if (!vanishes_on(g.form_on(i), inside))
        return ScalePreconditionFailure{"g does not vanish on the inner region",
                                        nonzero_point(g.form_on(i), inside)};
    }
    if (!nonneg_on(f.form_on(i), P))
      return ScalePreconditionFailure{"f is negative somewhere", {}};
    Polyhedron zero = P.intersect(poly::Constraint(f.form_on(i), true));
    if (!zero.empty() && !inner.contains(zero))
      return ScalePreconditionFailure{"the zero set of f leaves the inner region",
                                      zero.relint_point()};
  }
  if (std::holds_alternative<ConvexityViolation>(concavity_check(f, false)))
    return ScalePreconditionFailure{"f is not concave on its carrier", {}};

  /* Scan bound from generators, plus detection of directions along which f
   * stays flat while g grows. */
  Int n0 = 1;
  for (size_t i : C.maximal()) {
    const Polyhedron& P = C.cell(i);
    const AffineForm& ff = f.form_on(i);
    const AffineForm& gg = g.form_on(i);
    const auto& vr = P.vrep();
    for (const auto& v : vr.vertices) {
      if (inner.contains(v)) continue;
      Rat fv = ff.eval(v), gv = gg.eval(v);
      if (fv == 0) continue;  // zero set is inside inner, checked above
      /* least integer n with n*fv > gv */
      Rat q = gv / fv;
      Int fl;
      mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      Int cand = fl + 1;
      if (cand > n0) n0 = cand;
    }
    auto ray_bound = [&](const ZVec& r) -> std::optional<NoFiniteScale> {
      Int sf = dot(ff.m, r), sg = dot(gg.m, r);
      if (sf == 0 && sg > 0) return NoFiniteScale{i, r};
      if (sf > 0 && sg > 0) {
        Rat q = Rat(sg) / Rat(sf);
        Int ce;
        mpz_cdiv_q(ce.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
        if (ce > n0) n0 = ce;
      }
      return std::nullopt;
    };
    for (const auto& r : vr.rays)
      if (auto bad = ray_bound(r)) return *bad;
    for (const auto& l : vr.lineality) {
      ZVec neg(l.size());
      for (size_t k = 0; k < l.size(); ++k) neg[k] = -l[k];
      if (auto bad = ray_bound(l)) return *bad;
      if (auto bad = ray_bound(neg)) return *bad;
    }
  }

  /* Exact test: scale n strictly dominates off the inner region iff every
   * piece's nonpositivity locus of n*f - g sits inside it. */
  auto verify = [&](const Int& n) -> std::optional<QVec> {
    for (size_t i : C.maximal()) {
      AffineForm d = af_sub(af_scale(f.form_on(i), n), g.form_on(i));
      Polyhedron bad = C.cell(i).intersect(poly::Constraint(af_scale(d, Int(-1))));
      if (bad.empty() || inner.contains(bad)) continue;
      /* A point of the locus outside the inner region. */
      const auto& vr = bad.vrep();
      for (const auto& v : vr.vertices)
        if (!inner.contains(v)) return v;
      for (const auto& v : vr.vertices) {
        auto escape = [&](const ZVec& r) -> std::optional<QVec> {
          if (inner.contains_ray(r)) return std::nullopt;
          Rat t = 1;
          for (int step = 0; step < 128; ++step, t *= 2) {
            QVec p = add(v, scale(to_q(r), t));
            if (!inner.contains(p)) return p;
          }
          return std::nullopt;
        };
        for (const auto& r : vr.rays)
          if (auto p = escape(r)) return p;
        for (const auto& l : vr.lineality) {
          if (auto p = escape(l)) return p;
          ZVec neg(l.size());
          for (size_t k = 0; k < l.size(); ++k) neg[k] = -l[k];
          if (auto p = escape(neg)) return p;
        }
      }
      throw std::logic_error("locus not inside the inner region but no escape point found");
    }
    return std::nullopt;
  };

  Int n = n0;
  std::optional<QVec> fail_at_n = verify(n);
  std::optional<QVec> below;
  if (fail_at_n) {
    below = fail_at_n;  // witness against n0 itself
    n = n0 + 1;
    if (auto w = verify(n))
      throw std::logic_error("scale bound overshoot; generator scan is inconsistent");
  } else if (n0 > 1) {
    below = verify(n0 - 1);
    if (!below) throw std::logic_error("scan bound not tight and no witness below");
  }
  return ScaleFound{n, below};
}

std::vector<AffineForm> max_affine_representation(const FacewiseAffine& h) {
  if (!h.complex().is_complete())
    throw std::invalid_argument("carrier does not cover the whole space");
  auto conv = convexity_check(h, false);
  if (std::holds_alternative<ConvexityViolation>(conv))
    throw std::invalid_argument("function is not convex: " +
                                std::get<ConvexityViolation>(conv).detail);
  std::vector<AffineForm> out;
  for (size_t i : h.complex().maximal()) {
    const AffineForm& f = h.form_on(i);
    bool seen = false;
    for (const auto& o : out)
      if (o == f) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(f);
  }
  return out;
}

Rat eval_target(const EqTarget& t, const QVec& u) {
  if (std::holds_alternative<trop::TropRationalExpr>(t))
    return trop::eval(std::get<trop::TropRationalExpr>(t), u);
  return std::get<FacewiseAffine>(t).eval(u);
}

namespace {

std::vector<trop::Fragment> target_fragments(const EqTarget& t, const Polyhedron& region) {
  if (std::holds_alternative<trop::TropRationalExpr>(t))
    return trop::fragments_over(std::get<trop::TropRationalExpr>(t), region);
  const auto& f = std::get<FacewiseAffine>(t);
  std::vector<trop::Fragment> out;
  for (size_t i : f.complex().maximal()) {
    Polyhedron meet = f.complex().cell(i).intersect(region);
    if (!meet.empty()) out.push_back(trop::Fragment{std::move(meet), f.form_on(i)});
  }
  if (out.empty()) throw std::domain_error("region lies outside the carrier");
  return out;
}

}  // namespace

EqualOnResult equal_on(const PolyhedralComplex& w, const EqTarget& a, const EqTarget& b) {
  for (size_t c : w.maximal()) {
    const Polyhedron& R = w.cell(c);
    for (const auto& fa : target_fragments(a, R)) {
      for (const auto& fb : target_fragments(b, fa.region)) {
        AffineForm d = af_sub(fa.form, fb.form);
        if (vanishes_on(d, fb.region)) continue;
        QVec x = nonzero_point(d, fb.region);
        EqualOnResult r;
        r.equal = false;
        r.witness = x;
        r.lhs = eval_target(a, x);
        r.rhs = eval_target(b, x);
        return r;
      }
    }
  }
  return EqualOnResult{true, std::nullopt, 0, 0};
}

}  // namespace tff::pwa
