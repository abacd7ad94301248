#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <memory>

#include "tff/baryfaithful.hpp"
#include "tff/lattice.hpp"
#include "tff/pwa.hpp"

using namespace tff;
using namespace tff::bary;
using cx::AbstractComplex;
using cx::AbstractElement;
using poly::Polyhedron;

/* Powerset poset on A (finite) and B (infinite): the extended simplex with
 * every subset present, element ids joining vertex names with '+'. */
static AbstractComplex extended_simplex(const std::vector<std::string>& A,
                                        const std::vector<std::string>& B) {
  std::vector<std::string> all = A;
  all.insert(all.end(), B.begin(), B.end());
  size_t n = all.size();
  std::vector<AbstractElement> els(1ull << n);
  for (size_t mask = 0; mask < (1ull << n); ++mask) {
    AbstractElement& e = els[mask];
    e.id = mask == 0 ? "0" : "";
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) {
        e.zeta.insert(all[i]);
        e.id += (e.id.empty() ? "" : "+") + all[i];
        e.covers.push_back(mask & ~(1ull << i));
      }
  }
  std::vector<std::string> issues;
  auto a = AbstractComplex::make(A, B, std::move(els), issues);
  REQUIRE_MESSAGE(a.has_value(), (issues.empty() ? std::string() : issues.front()));
  return std::move(*a);
}

static size_t coord_index(const Embedding& e, const std::string& label) {
  auto it = std::find(e.image_coords.begin(), e.image_coords.end(), label);
  REQUIRE(it != e.image_coords.end());
  return (size_t)(it - e.image_coords.begin());
}

static std::vector<ZVec> integral_rows(const std::vector<QVec>& rows) {
  std::vector<ZVec> out;
  for (const auto& row : rows) {
    ZVec zr(row.size());
    for (size_t j = 0; j < row.size(); ++j) {
      REQUIRE(row[j].get_den() == 1);
      zr[j] = row[j].get_num();
    }
    out.push_back(std::move(zr));
  }
  return out;
}

TEST_CASE("barycenters") {
  auto a = extended_simplex({"v1", "v2"}, {"r"});
  auto r = cx::realize_abstract(a);
  CHECK(r.coords == std::vector<std::string>{"v1", "v2", "r"});

  CHECK(barycenter(r, a.index_of("v1")) == QVec{1, 0, 0});
  CHECK(barycenter(r, a.index_of("v1+v2")) == QVec{rat(1, 2), rat(1, 2), 0});
  CHECK(barycenter(r, a.index_of("v1+v2+r")) == QVec{rat(1, 2), rat(1, 2), rat(1, 2)});
  CHECK(barycenter(r, a.index_of("v2+r")) == QVec{0, 1, 1});
  CHECK_THROWS_AS(barycenter(r, a.index_of("r")), std::invalid_argument);
}

TEST_CASE("subdivision of a segment with one ray") {
  auto a = extended_simplex({"v1", "v2"}, {"r"});
  CHECK(a.size() == 8);
  CHECK(a.delta().size() == 6);
  auto r = cx::realize_abstract(a);
  CHECK(r.complex.maximal().size() == 1);

  auto b = barycentric_subdivision(r);

  SUBCASE("cell dimensions and counts") {
    size_t v = 0, e = 0, f = 0, unbounded_e = 0, unbounded_f = 0;
    for (const auto& c : b.cells) {
      int d = (int)c.chain.size() - 1 + (int)c.sets.size();
      CHECK(c.realized.dim() == d);
      if (d == 0) ++v;
      if (d == 1) {
        ++e;
        if (!c.realized.is_bounded()) ++unbounded_e;
      }
      if (d == 2) {
        ++f;
        if (!c.realized.is_bounded()) ++unbounded_f;
      }
    }
    CHECK(v == 6);
    CHECK(e == 12);
    CHECK(f == 6);
    CHECK(unbounded_e == 3);
    CHECK(unbounded_f == 2);
    CHECK(b.cells.size() == 24);
    CHECK(b.complex.size() == b.cells.size());
  }

  SUBCASE("the subdivision is a strictly valid complex") {
    std::vector<Polyhedron> cells(b.complex.cells());
    std::vector<std::string> issues;
    auto ok = cx::PolyhedralComplex::validated(b.complex.ambient(), cells, false, issues);
    CHECK_MESSAGE(ok.has_value(), (issues.empty() ? std::string() : issues.front()));
  }

  SUBCASE("chains and sets are strictly increasing") {
    for (const auto& c : b.cells) {
      for (size_t i = 0; i + 1 < c.chain.size(); ++i) {
        CHECK(a.leq(c.chain[i], c.chain[i + 1]));
        CHECK(c.chain[i] != c.chain[i + 1]);
      }
      for (size_t i = 0; i + 1 < c.sets.size(); ++i) {
        CHECK(c.sets[i].size() < c.sets[i + 1].size());
        CHECK(std::includes(c.sets[i + 1].begin(), c.sets[i + 1].end(), c.sets[i].begin(),
                            c.sets[i].end()));
      }
    }
  }

  SUBCASE("ancestor tag points at the top of each chain") {
    for (const auto& c : b.cells) {
      REQUIRE(!c.chain.empty());
      CHECK(b.tag.ancestor.at(b.complex.cell(c.complex_cell).key()) == c.chain.back());
    }
  }

  SUBCASE("prime complex carries one label per barycenter and subset") {
    CHECK(b.prime.finite_vertices().size() == 6);
    CHECK(b.prime.infinite_vertices().size() == 1);
    CHECK(b.prime.infinite_vertices()[0] == "S.{r}");
    CHECK(b.prime.size() >= b.cells.size());
  }

  SUBCASE("cell cap is enforced") {
    CHECK_THROWS_AS(barycentric_subdivision(r, 5), trop::CapExceeded);
  }
}

TEST_CASE("subdivision of bounded simplices counts barycenters") {
  for (size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> names;
    for (size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i + 1));
    auto a = extended_simplex(names, {});
    auto r = cx::realize_abstract(a);
    auto b = barycentric_subdivision(r);
    size_t verts = 0;
    for (const auto& c : b.cells)
      if (c.chain.size() == 1 && c.sets.empty()) ++verts;
    CHECK(verts == (1ull << n) - 1);
    for (const auto& c : b.cells) CHECK(c.realized.is_bounded());
  }
}

TEST_CASE("embedding of the subdivided segment with ray") {
  auto a = extended_simplex({"v1", "v2"}, {"r"});
  auto r = cx::realize_abstract(a);
  auto b = barycentric_subdivision(r);
  auto emb = embed_barycentric(b);

  SUBCASE("one axis per barycenter plus one per subset label") {
    CHECK(emb.image_coords.size() == 7);
    size_t pcount = 0, scount = 0;
    for (const auto& s : emb.image_coords) {
      if (s.rfind("P.", 0) == 0) ++pcount;
      if (s.rfind("S.", 0) == 0) ++scount;
    }
    CHECK(pcount == 6);
    CHECK(scount == 1);
  }

  SUBCASE("lattices are preserved on every cell") {
    auto lc = lattice_preservation_check(emb);
    CHECK_MESSAGE(lc.ok, lc.detail);
  }

  SUBCASE("edge between nested barycenters maps to the expected generator") {
    size_t iv1 = a.index_of("v1");
    size_t ie = a.index_of("v1+v2");
    size_t jv1 = coord_index(emb, "P.v1");
    size_t je = coord_index(emb, "P.v1+v2");
    bool seen = false;
    for (size_t ci = 0; ci < b.cells.size(); ++ci) {
      const auto& c = b.cells[ci];
      if (!c.sets.empty() || c.chain != std::vector<size_t>{iv1, ie}) continue;
      seen = true;
      const auto& vr = c.realized.vrep();
      REQUIRE(vr.vertices.size() == 2);
      REQUIRE(vr.rays.empty());
      ZVec d = primitive(sub(vr.vertices[1], vr.vertices[0]));
      ZVec img = poly::apply_rows(integral_rows(emb.psi[ci]), d);
      ZVec want(emb.image_coords.size(), 0);
      want[jv1] = 2;
      want[je] = -1;
      ZVec neg = want;
      for (auto& x : neg) x = -x;
      CHECK((img == want || img == neg));
    }
    CHECK(seen);
  }

  SUBCASE("vertex scaling by two breaks unimodularity") {
    auto bad = embed_barycentric(b, {{a.index_of("v1+v2"), Rat(2)}});
    auto lc = lattice_preservation_check(bad);
    CHECK(!lc.ok);
    CHECK(lc.detail.find("lattice") != std::string::npos);
  }

  SUBCASE("vertex scaling by a third breaks integrality") {
    auto bad = embed_barycentric(b, {{a.index_of("v1+v2"), rat(1, 3)}});
    auto lc = lattice_preservation_check(bad);
    CHECK(!lc.ok);
    CHECK(lc.detail.find("integral") != std::string::npos);
  }
}

TEST_CASE("coordinate functions of the embedding") {
  auto a = extended_simplex({"v1", "v2"}, {"r"});
  auto r = cx::realize_abstract(a);
  auto b = barycentric_subdivision(r);
  auto emb = embed_barycentric(b);
  auto coords = coordinate_functions(emb);
  REQUIRE(coords.size() == emb.image_coords.size());

  SUBCASE("every coordinate lies in the rational class") {
    for (const auto& fn : coords) {
      auto rm = pwa::rat_membership(fn);
      CHECK(rm.member);
    }
  }

  SUBCASE("barycenter coordinates separate their own barycenter") {
    size_t jv1 = coord_index(emb, "P.v1");
    const auto& fv1 = coords[jv1];
    CHECK(fv1.eval(barycenter(r, a.index_of("v1"))) == 1);
    CHECK(fv1.eval(barycenter(r, a.index_of("v2"))) == 0);
    CHECK(fv1.eval(barycenter(r, a.index_of("v1+v2"))) == 0);
    // halfway to the v1 corner along the bary edge
    QVec mid = scale(add(barycenter(r, a.index_of("v1")), barycenter(r, a.index_of("v1+v2"))),
                     rat(1, 2));
    CHECK(fv1.eval(mid) == rat(1, 2));
  }
}

TEST_CASE("faithfulness of the embedding maps") {
  auto a = extended_simplex({"v1", "v2"}, {"r"});
  auto r = cx::realize_abstract(a);
  auto b = barycentric_subdivision(r);
  auto emb = embed_barycentric(b);
  auto maps = embedding_maps(emb);
  int image_dim = (int)emb.image_coords.size();
  REQUIRE(maps.size() == b.complex.maximal().size());

  SUBCASE("the untouched maps are faithful") {
    auto rep = faithfulness_check(b.complex, maps, image_dim);
    CHECK_MESSAGE(rep.ok, rep.detail);
  }

  SUBCASE("map count must match the maximal cells") {
    auto short_maps = maps;
    short_maps.pop_back();
    CHECK_THROWS_AS(faithfulness_check(b.complex, short_maps, image_dim), std::invalid_argument);
  }

  SUBCASE("dropping the subset coordinate is caught") {
    // the last axis is the subset one; its direction lies inside unbounded
    // cells, so removing it merges distinct points
    REQUIRE(emb.image_coords.back().rfind("S.", 0) == 0);
    auto bad = maps;
    for (auto& m : bad) {
      m.a.pop_back();
      m.b.pop_back();
    }
    auto rep = faithfulness_check(b.complex, bad, image_dim - 1);
    CHECK(!rep.ok);
  }

  SUBCASE("doubling the subset coordinate is caught") {
    auto bad = maps;
    for (auto& m : bad)
      for (auto& x : m.a.back()) x *= 2;
    auto rep = faithfulness_check(b.complex, bad, image_dim);
    CHECK(!rep.ok);
    CHECK(rep.detail.find("lattice") != std::string::npos);
  }

  SUBCASE("dropping a barycenter coordinate leaves a faithful embedding") {
    // no cell direction points along a barycenter axis, so the projection
    // away from it is injective on every cell and carries the cell lattices
    size_t j = coord_index(emb, "P.v1");
    auto thinned = maps;
    for (auto& m : thinned) {
      m.a.erase(m.a.begin() + (long)j);
      m.b.erase(m.b.begin() + (long)j);
    }
    auto rep = faithfulness_check(b.complex, thinned, image_dim - 1);
    CHECK_MESSAGE(rep.ok, rep.detail);
  }
}

TEST_CASE("pairwise difference generators saturate the cell span") {
  // consecutive differences alone can generate a strict sublattice (the
  // two-step chains do), so the generator set must run over all vertex pairs;
  // with all pairs the generated lattice is exactly span intersect Z^n
  auto a = extended_simplex({"v1", "v2", "v3"}, {"r"});
  auto r = cx::realize_abstract(a);
  auto b = barycentric_subdivision(r);
  int n = b.complex.ambient();
  bool consecutive_was_coarser = false;
  for (const auto& c : b.cells) {
    const auto& vr = c.realized.vrep();
    std::vector<ZVec> all_pairs, consecutive, dirs;
    for (size_t i = 0; i < vr.vertices.size(); ++i)
      for (size_t j = i + 1; j < vr.vertices.size(); ++j)
        all_pairs.push_back(primitive(sub(vr.vertices[j], vr.vertices[i])));
    for (size_t i = 0; i + 1 < vr.vertices.size(); ++i)
      consecutive.push_back(primitive(sub(vr.vertices[i + 1], vr.vertices[i])));
    dirs = all_pairs;
    for (const auto& ray : vr.rays) {
      all_pairs.push_back(ray);
      consecutive.push_back(ray);
      dirs.push_back(ray);
    }
    auto L = poly::lattice_from_generators(n, all_pairs);
    auto S = poly::saturation(n, dirs);
    CHECK(poly::lattice_equal(L, S));
    if (!poly::lattice_equal(poly::lattice_from_generators(n, consecutive), S))
      consecutive_was_coarser = true;
  }
  CHECK(consecutive_was_coarser);
}

TEST_CASE("subdivision of the triangle with ray finds the golden cell") {
  auto a = extended_simplex({"v1", "v2", "v3"}, {"r"});
  auto r = cx::realize_abstract(a);
  auto b = barycentric_subdivision(r);
  CHECK(b.cells.size() == 148);

  std::vector<QVec> want = {QVec{1, 0, 0, 0},
                            QVec{rat(1, 2), 0, rat(1, 2), 0},
                            QVec{rat(1, 3), rat(1, 3), rat(1, 3), 0},
                            QVec{rat(1, 3), rat(1, 3), rat(1, 3), rat(1, 3)}};
  auto tet = Polyhedron::from_generators(4, want, {}, {});
  CHECK(b.cell_of_key.count(tet.key()) == 1);

  auto emb = embed_barycentric(b);
  auto lc = lattice_preservation_check(emb);
  CHECK_MESSAGE(lc.ok, lc.detail);
}
