#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "tff/linearity.hpp"
#include "tff/pwa.hpp"

using namespace tff;
using namespace tff::pwa;
using poly::Constraint;
using poly::Polyhedron;
using trop::AffineForm;

static std::shared_ptr<const PolyhedralComplex> line_split_at(std::vector<Rat> cuts) {
  // complete complex on R with breakpoints at the cuts
  std::vector<Polyhedron> cells;
  std::sort(cuts.begin(), cuts.end());
  cells.push_back(Polyhedron::from_generators(1, {QVec{cuts.front()}}, {QVec{-1}}, {}));
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    cells.push_back(Polyhedron::from_generators(1, {QVec{cuts[i]}, QVec{cuts[i + 1]}}, {}, {}));
  cells.push_back(Polyhedron::from_generators(1, {QVec{cuts.back()}}, {QVec{1}}, {}));
  std::vector<std::string> issues;
  auto c = PolyhedralComplex::validated(1, cells, true, issues);
  REQUIRE(c.has_value());
  return std::make_shared<const PolyhedralComplex>(*c);
}

static size_t maximal_containing(const PolyhedralComplex& c, const QVec& u) {
  for (size_t m : c.maximal())
    if (c.cell(m).contains(u)) return m;
  FAIL("point not on any maximal cell");
  return 0;
}

static FacewiseAffine fa_from(std::shared_ptr<const PolyhedralComplex> c,
                              std::vector<std::pair<QVec, AffineForm>> probes) {
  std::map<size_t, AffineForm> pieces;
  for (auto& [u, f] : probes) pieces[maximal_containing(*c, u)] = f;
  std::vector<std::string> issues;
  auto fa = FacewiseAffine::make(std::move(c), pieces, issues);
  REQUIRE_MESSAGE(fa.has_value(), (issues.empty() ? std::string() : issues.front()));
  return *fa;
}

static FacewiseAffine abs_of_x() {
  auto c = line_split_at({0});
  return fa_from(c, {{QVec{-1}, AffineForm(ZVec{-1}, 0)}, {QVec{1}, AffineForm(ZVec{1}, 0)}});
}

TEST_CASE("facewise construction enforces agreement on shared faces") {
  auto c = line_split_at({0});
  std::map<size_t, AffineForm> pieces;
  pieces[maximal_containing(*c, QVec{-1})] = AffineForm(ZVec{-1}, 0);
  pieces[maximal_containing(*c, QVec{1})] = AffineForm(ZVec{1}, 1);  // jumps at 0
  std::vector<std::string> issues;
  auto fa = FacewiseAffine::make(c, pieces, issues);
  CHECK(!fa.has_value());
  REQUIRE(!issues.empty());
  CHECK(issues.front().find("disagree") != std::string::npos);

  issues.clear();
  std::map<size_t, AffineForm> missing;
  missing[maximal_containing(*c, QVec{-1})] = AffineForm(ZVec{-1}, 0);
  CHECK(!FacewiseAffine::make(c, missing, issues).has_value());
}

TEST_CASE("evaluation and slopes at infinity") {
  auto f = abs_of_x();
  CHECK(f.eval(QVec{-3}) == 3);
  CHECK(f.eval(QVec{rat(5, 2)}) == rat(5, 2));
  CHECK(f.eval(QVec{0}) == 0);

  size_t right = maximal_containing(f.complex(), QVec{1});
  CHECK(f.slope_at_infinity(right, ZVec{1}) == 1);

  auto bounded_cx = [&] {
    std::vector<std::string> issues;
    auto seg = Polyhedron::from_generators(1, {QVec{0}, QVec{1}}, {}, {});
    auto c = PolyhedralComplex::validated(1, {seg}, true, issues);
    return std::make_shared<const PolyhedralComplex>(*c);
  }();
  auto g = fa_from(bounded_cx, {{QVec{rat(1, 2)}, AffineForm(ZVec{1}, 0)}});
  CHECK_THROWS_AS(g.eval(QVec{2}), std::domain_error);
}

TEST_CASE("membership in the rational class") {
  SUBCASE("matching slopes on parallel rays pass") {
    auto f = abs_of_x();
    auto r = rat_membership(f);
    CHECK(r.member);
    CHECK(!r.witness.has_value());
  }

  SUBCASE("two parallel rays with different slopes fail with a witness") {
    // disconnected support: rays x <= -1 and x >= 1 both recede... the first
    // recedes in -1; use two upward rays in the plane instead
    std::vector<std::string> issues;
    auto a = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{0, 1}}, {});
    auto b = Polyhedron::from_generators(2, {QVec{1, 0}}, {QVec{0, 1}}, {});
    auto c = PolyhedralComplex::validated(2, {a, b}, true, issues);
    REQUIRE(c.has_value());
    auto cc = std::make_shared<const PolyhedralComplex>(*c);
    auto f = fa_from(cc, {{QVec{0, 5}, AffineForm(ZVec{0, 1}, 0)},
                          {QVec{1, 5}, AffineForm(ZVec{0, 2}, 0)}});
    auto r = rat_membership(f);
    CHECK(!r.member);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->direction == ZVec{0, 1});
    CHECK(r.witness->slope_a != r.witness->slope_b);
  }
}

TEST_CASE("convexity certificates") {
  SUBCASE("absolute value is convex, not strictly supportable at the kink by an edge form") {
    auto f = abs_of_x();
    auto out = convexity_check(f, false);
    auto* cert = std::get_if<ConvexityCertificate>(&out);
    REQUIRE(cert != nullptr);
    CHECK(cert->supports.size() == f.complex().size());
    CHECK(certificate_valid(f, *cert));
  }

  SUBCASE("negated absolute value is rejected at the kink") {
    auto f = abs_of_x();
    auto g = fa_negate(f);
    auto out = convexity_check(g, false);
    auto* bad = std::get_if<ConvexityViolation>(&out);
    REQUIRE(bad != nullptr);
    CHECK(g.complex().cell(bad->cell).dim() == 0);

    auto conc = concavity_check(g, false);
    CHECK(std::get_if<ConvexityCertificate>(&conc) != nullptr);
  }

  SUBCASE("strict support may need rational slope") {
    // max(x, 2x - 1): kink at x = 1; strict support there needs slope in (1, 2)
    auto c = line_split_at({1});
    auto f = fa_from(c, {{QVec{0}, AffineForm(ZVec{1}, 0)}, {QVec{2}, AffineForm(ZVec{2}, -1)}});
    auto out = convexity_check(f, true);
    auto* cert = std::get_if<ConvexityCertificate>(&out);
    REQUIRE(cert != nullptr);
    bool saw_fractional = false;
    for (const auto& s : cert->supports)
      if (!s.integral) {
        saw_fractional = true;
        CHECK(!s.form.is_integral());
      }
    CHECK(saw_fractional);
    CHECK(certificate_valid(f, *cert));
  }

  SUBCASE("forged certificate is rejected") {
    auto f = abs_of_x();
    auto out = convexity_check(f, false);
    auto cert = std::get<ConvexityCertificate>(out);
    cert.supports[0].form.g += 1;  // now lies above the function somewhere
    CHECK(!certificate_valid(f, cert));
  }
}

TEST_CASE("pointwise minimum and sum") {
  auto f = abs_of_x();                       // |x|
  auto c = line_split_at({0});
  auto g = fa_from(c, {{QVec{-1}, AffineForm(ZVec{0}, 1)}, {QVec{1}, AffineForm(ZVec{0}, 1)}});

  auto m = fa_tropical_add(f, g);            // min(|x|, 1): breakpoints -1, 0, 1
  CHECK(m.eval(QVec{-5}) == 1);
  CHECK(m.eval(QVec{rat(-1, 2)}) == rat(1, 2));
  CHECK(m.eval(QVec{0}) == 0);
  CHECK(m.eval(QVec{rat(3, 4)}) == rat(3, 4));
  CHECK(m.eval(QVec{2}) == 1);
  CHECK(m.complex().maximal().size() == 4);

  auto s = fa_sum(f, g);                     // |x| + 1
  CHECK(s.eval(QVec{-2}) == 3);
  CHECK(s.eval(QVec{0}) == 1);

  auto neg = fa_negate(s);
  CHECK(neg.eval(QVec{-2}) == -3);
}

TEST_CASE("restriction to a subcomplex") {
  auto f = abs_of_x();
  std::vector<std::string> issues;
  auto right = Polyhedron::from_generators(1, {QVec{0}}, {QVec{1}}, {});
  auto w = PolyhedralComplex::validated(1, {right}, true, issues);
  REQUIRE(w.has_value());
  auto g = fa_restrict(f, *w);
  CHECK(g.eval(QVec{3}) == 3);
  CHECK_THROWS_AS(g.eval(QVec{-1}), std::domain_error);
}

TEST_CASE("dominating scale") {
  // carrier: [0, inf) split at 1; inner region is the origin
  auto origin = Polyhedron::from_generators(1, {QVec{0}}, {}, {});
  std::vector<std::string> issues;
  auto halfline = Polyhedron::from_generators(1, {QVec{0}}, {QVec{1}}, {});
  auto hc = std::make_shared<const PolyhedralComplex>(
      *PolyhedralComplex::validated(1, {halfline}, true, issues));

  SUBCASE("scale six with a witness below") {
    auto f = fa_from(hc, {{QVec{1}, AffineForm(ZVec{1}, 0)}});   // x
    auto g = fa_from(hc, {{QVec{1}, AffineForm(ZVec{5}, 0)}});   // 5x
    auto out = dominating_scale(f, g, origin);
    auto* found = std::get_if<ScaleFound>(&out);
    REQUIRE(found != nullptr);
    CHECK(found->n == 6);
    REQUIRE(found->below_witness.has_value());
    const QVec& w = *found->below_witness;
    CHECK(5 * f.eval(w) <= g.eval(w));  // scale five is not strictly above there
  }

  SUBCASE("already dominating gives one and no witness") {
    auto seg = Polyhedron::from_generators(1, {QVec{0}, QVec{1}}, {}, {});
    auto tail = Polyhedron::from_generators(1, {QVec{1}}, {QVec{1}}, {});
    auto cells = std::vector<Polyhedron>{seg, tail};
    auto cc = std::make_shared<const PolyhedralComplex>(
        *PolyhedralComplex::validated(1, cells, true, issues));
    auto f = fa_from(cc, {{QVec{rat(1, 2)}, AffineForm(ZVec{1}, 0)},
                          {QVec{2}, AffineForm(ZVec{0}, 1)}});   // min(x, 1)
    auto g = fa_from(cc, {{QVec{rat(1, 2)}, AffineForm(ZVec{-2}, 0)},
                          {QVec{2}, AffineForm(ZVec{-2}, 0)}});  // -2x
    auto out = dominating_scale(f, g, origin);
    auto* found = std::get_if<ScaleFound>(&out);
    REQUIRE(found != nullptr);
    CHECK(found->n == 1);
    CHECK(!found->below_witness.has_value());
  }

  SUBCASE("no finite scale when f flattens out but g grows") {
    auto seg = Polyhedron::from_generators(1, {QVec{0}, QVec{1}}, {}, {});
    auto tail = Polyhedron::from_generators(1, {QVec{1}}, {QVec{1}}, {});
    auto cells = std::vector<Polyhedron>{seg, tail};
    auto cc = std::make_shared<const PolyhedralComplex>(
        *PolyhedralComplex::validated(1, cells, true, issues));
    auto f = fa_from(cc, {{QVec{rat(1, 2)}, AffineForm(ZVec{1}, 0)},
                          {QVec{2}, AffineForm(ZVec{0}, 1)}});  // min(x, 1)
    auto g = fa_from(cc, {{QVec{rat(1, 2)}, AffineForm(ZVec{1}, 0)},
                          {QVec{2}, AffineForm(ZVec{1}, 0)}});  // x
    auto out = dominating_scale(f, g, origin);
    auto* nofin = std::get_if<NoFiniteScale>(&out);
    REQUIRE(nofin != nullptr);
    CHECK(nofin->direction == ZVec{1});
  }
}

TEST_CASE("maximum representation of a convex function") {
  auto f = abs_of_x();
  auto forms = max_affine_representation(f);
  REQUIRE(forms.size() >= 2);
  for (Rat x : {rat(-3), rat(-1, 2), rat(0), rat(2)}) {
    Rat best = forms[0].eval(QVec{x});
    for (const auto& g : forms) best = std::max(best, g.eval(QVec{x}));
    CHECK(best == f.eval(QVec{x}));
  }
  CHECK_THROWS_AS(max_affine_representation(fa_negate(f)), std::invalid_argument);
}

TEST_CASE("exact equality over a region") {
  std::vector<std::string> issues;
  auto all = PolyhedralComplex::validated(1, {Polyhedron::full(1)}, true, issues);
  REQUIRE(all.has_value());

  SUBCASE("quotient identity") {
    auto lhs = trop::parse_expr("min(2*x1, 0) - min(x1, 0)");
    auto rhs = trop::parse_expr("min(x1, 0)");
    auto r = equal_on(*all, EqTarget(lhs), EqTarget(rhs));
    CHECK(r.equal);
  }

  SUBCASE("differing functions produce an evaluated witness") {
    auto lhs = trop::parse_expr("x1");
    auto rhs = trop::parse_expr("min(x1, 0)");
    auto r = equal_on(*all, EqTarget(lhs), EqTarget(rhs));
    CHECK(!r.equal);
    REQUIRE(r.witness.has_value());
    CHECK(r.lhs != r.rhs);
    CHECK(trop::eval(lhs, *r.witness) == r.lhs);
    CHECK(trop::eval(rhs, *r.witness) == r.rhs);
  }

  SUBCASE("expression against a facewise function") {
    auto f = abs_of_x();
    auto e = trop::parse_expr("0 - min(x1, 0 - x1)");  // quotient form of |x|
    auto r = equal_on(*all, EqTarget(e), EqTarget(f));
    CHECK(r.equal);
  }

  SUBCASE("restriction matters") {
    auto lhs = trop::parse_expr("x1");
    auto rhs = trop::parse_expr("min(x1, 0)");
    auto neg = Polyhedron::from_generators(1, {QVec{0}}, {QVec{-1}}, {});
    auto w = PolyhedralComplex::validated(1, {neg}, true, issues);
    REQUIRE(w.has_value());
    auto r = equal_on(*w, EqTarget(lhs), EqTarget(rhs));
    CHECK(r.equal);  // they agree on x <= 0
  }
}
