#include "tff/synthesis.hpp"

#include <algorithm>
#include <map>

#include "tff/linearity.hpp"

namespace tff::synth {

using cx::PolyhedralComplex;
using poly::Polyhedron;
using pwa::FacewiseAffine;

ConvexPotential build_convex_potential(const Arrangement& arr) {
  const auto& C = arr.complex;
  ConvexPotential out;
  out.signs.assign(C.size(), {});
  std::map<size_t, AffineForm> pieces;
  for (size_t c = 0; c < C.size(); ++c) {
    std::vector<int> sg(arr.hyperplanes.size(), 0);
    AffineForm acc = AffineForm::constant(C.ambient(), 0);
    for (size_t i = 0; i < arr.hyperplanes.size(); ++i) {
      int s = cx::sign_over(arr.hyperplanes[i], C.cell(c));
      if (s == 2)
        throw std::logic_error("hyperplane changes sign on an arrangement cell");
      sg[i] = s;
      if (s == 1)
        acc = af_add(acc, arr.hyperplanes[i]);
      else if (s == -1)
        acc = af_add(acc, af_scale(arr.hyperplanes[i], Int(-1)));
    }
    out.signs[c] = std::move(sg);
    pieces.emplace(c, std::move(acc));
  }
  std::map<size_t, AffineForm> top_pieces;
  for (size_t i : C.maximal()) top_pieces.emplace(i, pieces.at(i));
  std::vector<std::string> issues;
  auto h = FacewiseAffine::make(std::make_shared<PolyhedralComplex>(C), top_pieces, issues);
  if (!h) throw std::logic_error("potential is not facewise: " + issues.front());
  out.h = std::move(*h);
  return out;
}

Int compute_lambda(const PolyhedralComplex& sigma_beta, const std::vector<AffineForm>& pot,
                   const std::vector<AffineForm>& fun) {
  const auto& M = sigma_beta.maximal();
  if (pot.size() != M.size() || fun.size() != M.size())
    throw std::invalid_argument("forms misaligned with the maximal cells");
  Int lambda = 1;
  auto raise_to = [&lambda](const Rat& num, const Rat& den) {
    Rat q = num / den;
    Int ce;
    mpz_cdiv_q(ce.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (ce > lambda) lambda = ce;
  };
  for (size_t a = 0; a < M.size(); ++a) {
    const Polyhedron& tau = sigma_beta.cell(M[a]);
    const auto& vr = tau.vrep();
    for (size_t b = 0; b < M.size(); ++b) {
      if (a == b) continue;
      AffineForm agap = af_sub(pot[a], pot[b]);  // >= 0 on tau, zero exactly on cell b
      AffineForm bgap = af_sub(fun[b], fun[a]);
      for (const auto& v : vr.vertices) {
        Rat av = agap.eval(v);
        Rat bv = bgap.eval(v);
        if (av == 0) {
          if (bv > 0)
            throw std::logic_error("potential gap vanishes where the function gap does not");
          continue;
        }
        if (av < 0) throw std::logic_error("potential gap negative on its own cell");
        if (bv > 0) raise_to(bv, av);
      }
      auto slope_pair = [&](const ZVec& r) {
        Int as = dot(agap.m, r);
        Int bs = dot(bgap.m, r);
        if (as == 0) {
          if (bs > 0)
            throw std::logic_error("potential gap flat along a direction of function growth");
          return;
        }
        if (as < 0) throw std::logic_error("potential gap decreasing along a cell direction");
        if (bs > 0) raise_to(Rat(bs), Rat(as));
      };
      for (const auto& r : vr.rays) slope_pair(r);
      for (const auto& l : vr.lineality) {
        slope_pair(l);
        ZVec neg(l.size());
        for (size_t k = 0; k < l.size(); ++k) neg[k] = -l[k];
        slope_pair(neg);
      }
    }
  }
  return lambda;
}

SynthesisOutcome synthesize(const pwa::FacewiseAffine& f, size_t max_hyperplanes) {
  pwa::RatResult rat = pwa::rat_membership(f);
  if (!rat.member) {
    SynthesisError e;
    e.kind = SynthesisError::NotInRat;
    e.detail = "slopes disagree along parallel half-lines";
    e.witness = rat.witness;
    return e;
  }
  SynthesisResult r;
  try {
    r.completion = cx::arrangement_completion(f.complex(), max_hyperplanes);
  } catch (const trop::CapExceeded& ex) {
    return SynthesisError{SynthesisError::CapExceeded, ex.what(), std::nullopt};
  }
  int n = f.complex().ambient();
  const auto& beta = r.completion.sigma_beta;
  const auto& M = beta.maximal();

  ConvexPotential pot = build_convex_potential(r.completion.hat);
  for (size_t k = 0; k < M.size(); ++k) {
    auto hat_idx = r.completion.hat.complex.find(beta.cell(M[k]).key());
    if (!hat_idx) throw std::logic_error("completion cell missing from the arrangement");
    const auto& sg = pot.signs[*hat_idx];
    AffineForm lp = AffineForm::constant(n, 0);
    for (size_t i = 0; i < r.completion.hat.hyperplanes.size(); ++i) {
      if (sg[i] == 1)
        lp = af_add(lp, r.completion.hat.hyperplanes[i]);
      else if (sg[i] == -1)
        lp = af_add(lp, af_scale(r.completion.hat.hyperplanes[i], Int(-1)));
    }
    r.pot_forms.push_back(std::move(lp));
    r.fun_forms.push_back(f.form_on(r.completion.beta_home[M[k]]));
  }

  r.lambda = compute_lambda(beta, r.pot_forms, r.fun_forms);

  if (M.size() == 1 && r.completion.hat.hyperplanes.empty()) {
    r.expression = trop::make_ratexpr(trop::expr_affine(r.fun_forms[0]), trop::expr_const(n, 0));
    return r;
  }

  std::vector<trop::ExprPtr> terms;
  std::map<std::string, bool> seen;
  for (size_t k = 0; k < M.size(); ++k) {
    AffineForm a = af_add(af_scale(r.pot_forms[k], r.lambda), r.fun_forms[k]);
    AffineForm neg = af_scale(a, Int(-1));
    std::string key = trop::print(neg);
    if (seen.emplace(key, true).second) terms.push_back(trop::expr_affine(neg));
  }
  trop::ExprPtr p1 = terms.size() == 1 ? terms[0] : trop::expr_min(std::move(terms));

  trop::ExprPtr p2 = trop::expr_const(n, 0);
  bool first = true;
  for (const auto& l : r.completion.hat.hyperplanes) {
    trop::ExprPtr factor = trop::expr_min(
        {trop::expr_affine(af_scale(l, r.lambda)), trop::expr_affine(af_scale(l, -r.lambda))});
    p2 = first ? factor : trop::expr_sum(p2, factor);
    first = false;
  }
  r.expression = trop::make_ratexpr(std::move(p2), std::move(p1));
  return r;
}

VerifyReport verify_synthesis(const pwa::FacewiseAffine& f, const SynthesisResult& r) {
  VerifyReport rep;
  const auto& beta = r.completion.sigma_beta;
  const auto& M = beta.maximal();
  if (r.lambda < 1) {
    rep.detail = "scale factor below one";
    return rep;
  }

  /* Attainment: on each maximal completion cell its own term dominates. */
  for (size_t a = 0; a < M.size(); ++a) {
    AffineForm own = af_add(af_scale(r.pot_forms[a], r.lambda), r.fun_forms[a]);
    for (size_t b = 0; b < M.size(); ++b) {
      if (a == b) continue;
      AffineForm other = af_add(af_scale(r.pot_forms[b], r.lambda), r.fun_forms[b]);
      AffineForm d = af_sub(own, other);
      int s = cx::sign_over(d, beta.cell(M[a]));
      if (s != 0 && s != 1) {
        rep.detail = "term of cell " + std::to_string(M[b]) +
                     " overtakes the leader on cell " + std::to_string(M[a]);
        const auto& vr = beta.cell(M[a]).vrep();
        for (const auto& v : vr.vertices)
          if (d.eval(v) < 0) rep.witness = v;
        return rep;
      }
    }
  }

  /* Exact global comparison over the carrier. */
  pwa::EqualOnResult eq =
      pwa::equal_on(f.complex(), pwa::EqTarget(r.expression), pwa::EqTarget(f));
  if (!eq.equal) {
    rep.detail = "expression deviates from the function";
    rep.witness = eq.witness;
    return rep;
  }

  /* Spot probes through the printed-form evaluator, far along every ray. */
  std::vector<Rat> ts{Rat(1), Rat(1 << 10), Rat(Int(1) << 20)};
  for (size_t c : f.complex().maximal()) {
    const auto& vr = f.complex().cell(c).vrep();
    std::vector<QVec> probes = vr.vertices;
    probes.push_back(f.complex().cell(c).relint_point());
    for (const auto& v : vr.vertices)
      for (const auto& ray : vr.rays)
        for (const auto& t : ts) probes.push_back(add(v, scale(to_q(ray), t)));
    for (const auto& p : probes) {
      if (trop::eval(r.expression, p) != f.eval(p)) {
        rep.detail = "probe disagreement";
        rep.witness = p;
        return rep;
      }
    }
  }
  rep.ok = true;
  rep.detail = "verified";
  return rep;
}

}  // namespace tff::synth
