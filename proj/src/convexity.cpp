#include <algorithm>

#include "tff/fm.hpp"
#include "tff/lattice.hpp"
#include "tff/pwa.hpp"

namespace tff::pwa {

namespace {

/* One support condition: val - <w, vec> must be >= 0 (or > 0). */
struct SupportCons {
  QVec vec;
  Rat val;
};

/* Integer direction generators spanning lin(aff(cell)). */
std::vector<ZVec> cell_directions(const Polyhedron& p) {
  std::vector<ZVec> dirs;
  const auto& vr = p.vrep();
  for (size_t i = 1; i < vr.vertices.size(); ++i)
    dirs.push_back(primitive(sub(vr.vertices[i], vr.vertices[0])));
  for (const auto& r : vr.rays) dirs.push_back(r);
  for (const auto& l : vr.lineality) dirs.push_back(l);
  return dirs;
}

bool satisfies(const std::vector<SupportCons>& cons, const QVec& w, bool strict) {
  for (const auto& c : cons) {
    Rat lhs = c.val - dot(w, c.vec);
    if (strict ? !(lhs > 0) : !(lhs >= 0)) return false;
  }
  return true;
}

}  // namespace

ConvexityOutcome convexity_check(const FacewiseAffine& h, bool strict) {
  const auto& C = h.complex();
  int n = C.ambient();
  ConvexityCertificate cert;
  cert.strict = strict;

  for (size_t c = 0; c < C.size(); ++c) {
    const Polyhedron& sigma = C.cell(c);
    const AffineForm& hs = h.form_on(c);
    const QVec& v0 = sigma.vrep().vertices.front();

    std::vector<SupportCons> cons;
    std::vector<QVec> candidates{QVec((size_t)n, 0)};
    for (size_t eta : C.cofaces(c)) {
      if (eta == c) continue;
      bool not_max = std::find(C.maximal().begin(), C.maximal().end(), eta) == C.maximal().end();
      if (not_max) continue;  // constraints from lower cofaces are implied by maximal ones
      const AffineForm& he = h.form_on(eta);
      AffineForm d = af_sub(he, hs);
      const auto& vr = C.cell(eta).vrep();
      for (const auto& v : vr.vertices) {
        if (sigma.contains(v)) continue;
        cons.push_back(SupportCons{sub(v, v0), d.eval(v)});
      }
      for (const auto& r : vr.rays) {
        if (sigma.contains_ray(r)) continue;
        cons.push_back(SupportCons{to_q(r), Rat(dot(d.m, r))});
      }
      if (!is_zero(d.m)) candidates.push_back(to_q(d.m));
    }

    std::optional<QVec> w;
    for (const auto& cand : candidates)
      if (satisfies(cons, cand, strict)) {
        w = cand;
        break;
      }

    if (!w && !cons.empty()) {
      std::vector<ZVec> dirs = cell_directions(sigma);
      std::vector<ZVec> basis;
      if (dirs.empty()) {
        for (int i = 0; i < n; ++i) {
          ZVec e((size_t)n, 0);
          e[i] = 1;
          basis.push_back(std::move(e));
        }
      } else {
        basis = poly::integer_kernel(dirs, n);
      }
      size_t K = basis.size();
      if (K > 0) {
        std::vector<poly::LinCons> lp;
        for (const auto& sc : cons) {
          poly::LinCons lc;
          lc.a.resize(K);
          for (size_t k = 0; k < K; ++k) lc.a[k] = -dot(basis[k], sc.vec);
          lc.b = sc.val;
          lc.strict = strict;
          lp.push_back(std::move(lc));
        }
        poly::FMResult fm = poly::fm_feasible((int)K, std::move(lp));
        if (fm.feasible) {
          QVec ww((size_t)n, 0);
          for (size_t k = 0; k < K; ++k)
            for (int i = 0; i < n; ++i) ww[i] += fm.witness[k] * Rat(basis[k][i]);
          w = std::move(ww);
        }
      }
    }

    if (!w) {
      ConvexityViolation bad;
      bad.cell = c;
      bad.detail = "no " + std::string(strict ? "strict " : "") +
                   "supporting form exists at cell " + std::to_string(c);
      return bad;
    }

    SupportForm sf;
    sf.cell = c;
    QVec m = to_q(hs.m);
    for (int i = 0; i < n; ++i) m[i] += (*w)[i];
    sf.form = QAffineForm(std::move(m), hs.g - dot(*w, v0));
    sf.integral = sf.form.is_integral();
    cert.supports.push_back(std::move(sf));
  }
  return cert;
}

ConvexityOutcome concavity_check(const FacewiseAffine& h, bool strict) {
  ConvexityOutcome res = convexity_check(fa_negate(h), strict);
  if (std::holds_alternative<ConvexityViolation>(res)) return res;
  auto& cert = std::get<ConvexityCertificate>(res);
  for (auto& s : cert.supports) {
    for (auto& x : s.form.m) x = -x;
    s.form.g = -s.form.g;
  }
  return cert;
}

bool certificate_valid(const FacewiseAffine& h, const ConvexityCertificate& cert) {
  const auto& C = h.complex();
  if (cert.supports.size() != C.size()) return false;
  for (size_t c = 0; c < C.size(); ++c) {
    const auto& s = cert.supports[c];
    if (s.cell != c) return false;
    const Polyhedron& sigma = C.cell(c);
    const AffineForm& hs = h.form_on(c);
    const auto& vr = sigma.vrep();
    for (const auto& v : vr.vertices)
      if (hs.eval(v) != s.form.eval(v)) return false;
    QVec dm = to_q(hs.m);
    for (int i = 0; i < C.ambient(); ++i) dm[i] -= s.form.m[i];
    for (const auto& r : vr.rays)
      if (dot(dm, to_q(r)) != 0) return false;
    for (const auto& l : vr.lineality)
      if (dot(dm, to_q(l)) != 0) return false;

    for (size_t eta : C.cofaces(c)) {
      if (eta == c) continue;
      const AffineForm& he = h.form_on(eta);
      const auto& vre = C.cell(eta).vrep();
      for (const auto& v : vre.vertices) {
        if (sigma.contains(v)) continue;
        Rat gap = he.eval(v) - s.form.eval(v);
        if (cert.strict ? !(gap > 0) : !(gap >= 0)) return false;
      }
      QVec em = to_q(he.m);
      for (int i = 0; i < C.ambient(); ++i) em[i] -= s.form.m[i];
      for (const auto& r : vre.rays) {
        if (sigma.contains_ray(r)) continue;
        Rat gap = dot(em, to_q(r));
        if (cert.strict ? !(gap > 0) : !(gap >= 0)) return false;
      }
    }
  }
  return true;
}

}  // namespace tff::pwa
