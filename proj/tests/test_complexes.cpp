#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "tff/abstract.hpp"
#include "tff/complexes.hpp"

using namespace tff;
using namespace tff::cx;
using poly::Constraint;
using poly::Polyhedron;

static Polyhedron tri(QVec a, QVec b, QVec c) {
  return Polyhedron::from_generators(2, {std::move(a), std::move(b), std::move(c)}, {}, {});
}

TEST_CASE("complex validation") {
  std::vector<std::string> issues;

  SUBCASE("two triangles sharing an edge") {
    auto t1 = tri({0, 0}, {1, 0}, {0, 1});
    auto t2 = tri({1, 0}, {0, 1}, {1, 1});
    auto c = PolyhedralComplex::validated(2, {t1, t2}, true, issues);
    REQUIRE(c.has_value());
    CHECK(issues.empty());
    CHECK(c->maximal().size() == 2);
    // 4 vertices + 5 edges + 2 triangles
    CHECK(c->size() == 11);
    CHECK(c->dim() == 2);
  }

  SUBCASE("overlapping squares are rejected with the offending pair") {
    auto s1 = Polyhedron::from_generators(2, {QVec{0, 0}, QVec{2, 0}, QVec{0, 2}, QVec{2, 2}}, {}, {});
    auto s2 = Polyhedron::from_generators(2, {QVec{1, 1}, QVec{3, 1}, QVec{1, 3}, QVec{3, 3}}, {}, {});
    auto c = PolyhedralComplex::validated(2, {s1, s2}, true, issues);
    CHECK(!c.has_value());
    REQUIRE(!issues.empty());
    bool names_violation = issues[0].find("not a common face") != std::string::npos ||
                           issues[0].find("without being a face") != std::string::npos;
    CHECK(names_violation);
  }

  SUBCASE("touching at a non-face point is rejected") {
    auto s1 = Polyhedron::from_generators(2, {QVec{0, 0}, QVec{2, 0}, QVec{2, 2}, QVec{0, 2}}, {}, {});
    auto e = Polyhedron::from_generators(2, {QVec{1, 2}, QVec{3, 2}}, {}, {});
    auto c = PolyhedralComplex::validated(2, {s1, e}, true, issues);
    CHECK(!c.has_value());
  }

  SUBCASE("strict mode reports missing faces instead of closing") {
    auto t1 = tri({0, 0}, {1, 0}, {0, 1});
    auto c = PolyhedralComplex::validated(2, {t1}, false, issues);
    CHECK(!c.has_value());
    REQUIRE(!issues.empty());
    CHECK(issues[0].find("lacks its face") != std::string::npos);

    issues.clear();
    auto closed = PolyhedralComplex::validated(2, {t1}, true, issues);
    REQUIRE(closed.has_value());
    CHECK(closed->size() == 7);
    std::vector<Polyhedron> all(closed->cells());
    auto again = PolyhedralComplex::validated(2, all, false, issues);
    CHECK(again.has_value());
  }

  SUBCASE("duplicate cells collapse") {
    auto t1 = tri({0, 0}, {1, 0}, {0, 1});
    auto c = PolyhedralComplex::validated(2, {t1, t1}, true, issues);
    REQUIRE(c.has_value());
    CHECK(c->maximal().size() == 1);
  }
}

TEST_CASE("face relation and location") {
  std::vector<std::string> issues;
  auto t1 = tri({0, 0}, {1, 0}, {0, 1});
  auto t2 = tri({1, 0}, {0, 1}, {1, 1});
  auto c = *PolyhedralComplex::validated(2, {t1, t2}, true, issues);

  auto inside = c.locate(QVec{rat(1, 4), rat(1, 4)});
  REQUIRE(inside.has_value());
  CHECK(c.cell(*inside).dim() == 2);

  auto on_shared = c.locate(QVec{rat(1, 2), rat(1, 2)});
  REQUIRE(on_shared.has_value());
  CHECK(c.cell(*on_shared).dim() == 1);
  CHECK(c.cofaces(*on_shared).size() == 3);  // both triangles and itself

  CHECK(!c.locate(QVec{5, 5}).has_value());
  CHECK(!c.is_complete());

  size_t top = *c.find(t1.key());
  for (const auto& f : t1.faces()) {
    auto fi = c.find(f.key());
    REQUIRE(fi.has_value());
    CHECK(c.leq(*fi, top));
  }
}

TEST_CASE("sign of a form over a cell") {
  auto sq = Polyhedron::from_generators(2, {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{1, 1}}, {}, {});
  CHECK(sign_over(AffineForm(ZVec{1, 0}, 0), sq) == 1);
  CHECK(sign_over(AffineForm(ZVec{-1, 0}, 0), sq) == -1);
  CHECK(sign_over(AffineForm(ZVec{1, -1}, 0), sq) == 2);
  CHECK(sign_over(AffineForm(ZVec{0, 0}, 0), sq) == 0);
  auto wedge = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{1, 1}, QVec{-1, 1}}, {});
  CHECK(sign_over(AffineForm(ZVec{0, 1}, 0), wedge) == 1);
  CHECK(sign_over(AffineForm(ZVec{1, 0}, 0), wedge) == 2);
}

TEST_CASE("recession fan") {
  std::vector<std::string> issues;

  SUBCASE("compatible recession cones assemble") {
    auto w1 = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{1, 0}}, {});
    auto w2 = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{0, 1}}, {});
    auto origin = Polyhedron::from_generators(2, {QVec{0, 0}}, {}, {});
    auto c = *PolyhedralComplex::validated(2, {w1, w2, origin}, true, issues);
    auto fc = recession_fan(c);
    REQUIRE(fc.is_fan);
    CHECK(fc.fan.maximal().size() == 2);
  }

  SUBCASE("recession cones need not form a fan") {
    // a horizontal ray under a full horizontal line: the cells are disjoint,
    // but the ray's recession cone is not a face of the line's
    auto r = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{1, 0}}, {});
    auto l = Polyhedron::from_generators(2, {QVec{0, 1}}, {}, {QVec{1, 0}});
    auto c = PolyhedralComplex::validated(2, {r, l}, true, issues);
    REQUIRE(c.has_value());
    auto fc = recession_fan(*c);
    CHECK(!fc.is_fan);
    CHECK(!fc.reason.empty());
  }
}

TEST_CASE("common refinement") {
  std::vector<std::string> issues;
  auto sq = Polyhedron::from_generators(2, {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{1, 1}}, {}, {});
  auto c = *PolyhedralComplex::validated(2, {sq}, true, issues);

  SUBCASE("refinement with itself is identity") {
    auto r = common_refinement(c, c);
    CHECK(r.size() == c.size());
    CHECK(r.maximal().size() == 1);
  }

  SUBCASE("diagonal split") {
    auto t1 = tri({0, 0}, {1, 0}, {1, 1});
    auto t2 = tri({0, 0}, {1, 1}, {0, 1});
    auto d = *PolyhedralComplex::validated(2, {t1, t2}, true, issues);
    auto r = common_refinement(c, d);
    CHECK(r.maximal().size() == 2);
    for (size_t m : r.maximal()) CHECK(r.cell(m).dim() == 2);
    CHECK(r.size() == d.size());
  }
}

TEST_CASE("hyperplane arrangements") {
  SUBCASE("canonical form of a hyperplane") {
    auto h = canonical_hyperplane(AffineForm(ZVec{-2, 4}, rat(6, 1)));
    CHECK(h.m == ZVec{1, -2});
    CHECK(h.g == -3);
    CHECK(canonical_hyperplane(AffineForm(ZVec{0, 3}, 0)).m == ZVec{0, 1});
  }

  SUBCASE("square grid") {
    // x1 = 0, x1 = 1, x2 = 0, x2 = 1 cut the plane into 9 regions
    auto arr = arrangement_complex(2, {AffineForm(ZVec{1, 0}, 0), AffineForm(ZVec{1, 0}, -1),
                                       AffineForm(ZVec{0, 1}, 0), AffineForm(ZVec{0, 1}, -1)});
    CHECK(arr.hyperplanes.size() == 4);
    size_t full = 0;
    for (size_t m : arr.complex.maximal())
      if (arr.complex.cell(m).dim() == 2) full++;
    CHECK(full == 9);
    CHECK(arr.complex.is_complete());
  }

  SUBCASE("three generic lines make seven regions") {
    auto arr = arrangement_complex(2, {AffineForm(ZVec{1, 0}, 0), AffineForm(ZVec{0, 1}, 0),
                                       AffineForm(ZVec{1, 1}, -1)});
    size_t full = 0;
    for (size_t m : arr.complex.maximal())
      if (arr.complex.cell(m).dim() == 2) full++;
    CHECK(full == 7);
  }

  SUBCASE("proportional input forms collapse") {
    auto arr = arrangement_complex(1, {AffineForm(ZVec{2}, 4), AffineForm(ZVec{-1}, -2)});
    CHECK(arr.hyperplanes.size() == 1);
  }
}

TEST_CASE("arrangement completion of a ray") {
  std::vector<std::string> issues;
  auto ray = Polyhedron::from_generators(1, {QVec{0}}, {QVec{1}}, {});
  auto c = *PolyhedralComplex::validated(1, {ray}, true, issues);
  auto comp = arrangement_completion(c);

  REQUIRE(comp.hat.hyperplanes.size() == 1);
  CHECK(comp.hat.hyperplanes[0] == AffineForm(ZVec{1}, 0));
  CHECK(comp.hat.complex.maximal().size() == 2);
  CHECK(comp.hat.complex.is_complete());

  // the part inside the support: the ray and its endpoint
  CHECK(comp.sigma_beta.maximal().size() == 1);
  CHECK(comp.sigma_beta.size() == 2);
  REQUIRE(comp.beta_home.size() == comp.sigma_beta.size());
  for (size_t i = 0; i < comp.sigma_beta.size(); ++i) {
    const auto& home = c.cell(comp.beta_home[i]);
    CHECK(home.contains(comp.sigma_beta.cell(i)));
  }
}

TEST_CASE("parallel classes of rays") {
  std::vector<std::string> issues;
  auto r1 = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{1, 0}}, {});
  auto r2 = Polyhedron::from_generators(2, {QVec{0, 1}}, {QVec{2, 0}}, {});  // same direction
  auto seg = Polyhedron::from_generators(2, {QVec{0, 0}, QVec{0, 1}}, {}, {});
  auto up = Polyhedron::from_generators(2, {QVec{0, 1}}, {QVec{0, 1}}, {});
  auto c = PolyhedralComplex::validated(2, {r1, r2, seg, up}, true, issues);
  REQUIRE(c.has_value());
  auto pc = parallel_classes(*c);
  REQUIRE(pc.directions.size() == 2);
  bool saw_e1 = false, saw_e2 = false;
  for (size_t k = 0; k < pc.directions.size(); ++k) {
    if (pc.directions[k] == ZVec{1, 0}) {
      saw_e1 = true;
      CHECK(pc.members[k].size() == 2);  // r1 and r2 carry it
    }
    if (pc.directions[k] == ZVec{0, 1}) saw_e2 = true;
  }
  CHECK(saw_e1);
  CHECK(saw_e2);
}

TEST_CASE("abstract complexes") {
  auto el = [](std::string id, std::set<std::string> z, std::vector<size_t> covers) {
    return AbstractElement{std::move(id), std::move(z), std::move(covers)};
  };
  std::vector<std::string> issues;

  SUBCASE("segment with a ray on one end") {
    // elements: 0:{} 1:{v1} 2:{v2} 3:{r} 4:{v1,v2} 5:{v2,r}
    auto a = AbstractComplex::make(
        {"v1", "v2"}, {"r"},
        {el("0", {}, {}), el("a", {"v1"}, {0}), el("b", {"v2"}, {0}), el("c", {"r"}, {0}),
         el("e", {"v1", "v2"}, {1, 2}), el("f", {"v2", "r"}, {2, 3})},
        issues);
    REQUIRE(a.has_value());
    CHECK(issues.empty());
    CHECK(a->minimum() == 0);
    CHECK(a->delta().size() == 4);           // a, b, e, f
    CHECK(a->upsilon().size() == 2);         // bottom and the pure ray c
    CHECK(a->leq(1, 4));
    CHECK(!a->leq(3, 4));
    auto sub = a->interval_element(5, {"r"});
    REQUIRE(sub.has_value());
    CHECK(a->elements()[*sub].id == "c");

    auto r = realize_abstract(*a);
    CHECK(r.coords == std::vector<std::string>{"v1", "v2", "r"});
    CHECK(r.complex.maximal().size() == 2);
    CHECK(r.complex.dim() == 1);
    // realization of e: the segment from e_v1 to e_v2
    bool saw_segment = false, saw_ray = false;
    for (size_t m : r.complex.maximal()) {
      const auto& v = r.complex.cell(m).vrep();
      if (v.rays.empty() && v.vertices.size() == 2) saw_segment = true;
      if (v.rays.size() == 1 && v.vertices.size() == 1) {
        CHECK(v.rays[0] == ZVec{0, 0, 1});
        CHECK(v.vertices[0] == QVec{0, 1, 0});
        saw_ray = true;
      }
    }
    CHECK(saw_segment);
    CHECK(saw_ray);
  }

  SUBCASE("missing bottom is rejected") {
    auto a = AbstractComplex::make({"v1"}, {}, {el("a", {"v1"}, {})}, issues);
    CHECK(!a.has_value());
    CHECK(!issues.empty());
  }

  SUBCASE("vertex label used by two elements is rejected") {
    auto a = AbstractComplex::make(
        {"v1"}, {},
        {el("0", {}, {}), el("a", {"v1"}, {0}), el("b", {"v1"}, {0})}, issues);
    CHECK(!a.has_value());
  }

  SUBCASE("non boolean lower interval is rejected") {
    // top covers bottom directly but carries a two-vertex label
    auto a = AbstractComplex::make(
        {"v1", "v2"}, {},
        {el("0", {}, {}), el("a", {"v1"}, {0}), el("b", {"v2"}, {0}),
         el("e", {"v1", "v2"}, {0})},
        issues);
    CHECK(!a.has_value());
  }

  SUBCASE("unused declared vertex is rejected") {
    auto a = AbstractComplex::make({"v1", "v2"}, {},
                                   {el("0", {}, {}), el("a", {"v1"}, {0})}, issues);
    CHECK(!a.has_value());
  }
}
