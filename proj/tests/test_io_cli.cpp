#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "tff/io.hpp"

using namespace tff;
using io::json;
using poly::Polyhedron;
using trop::AffineForm;

#ifndef TFF_CLI_PATH
#define TFF_CLI_PATH "./build/tffc"
#endif

namespace {

std::string g_dir;

std::string path_of(const std::string& name) { return g_dir + "/" + name; }

void ensure_dir() {
  if (!g_dir.empty()) return;
  char tmpl[] = "/tmp/tff_cli_XXXXXX";
  char* d = mkdtemp(tmpl);
  REQUIRE(d != nullptr);
  g_dir = d;
}

int run_cli(const std::string& args) {
  ensure_dir();
  std::string cmd = std::string(TFF_CLI_PATH) + " " + args + " > " + path_of("stdout.txt") +
                    " 2> " + path_of("stderr.txt");
  int st = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(st));
  return WEXITSTATUS(st);
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string cli_stdout() { return slurp(path_of("stdout.txt")); }

cx::PolyhedralComplex ray_complex() {
  std::vector<std::string> issues;
  auto ray = Polyhedron::from_generators(1, {QVec{0}}, {QVec{1}}, {});
  return *cx::PolyhedralComplex::validated(1, {ray}, true, issues);
}

pwa::FacewiseAffine ramp_function() {
  // 0 left of 1, then slope 2: the two-piece synthesis example
  std::vector<std::string> issues;
  auto left = Polyhedron::from_generators(1, {QVec{1}}, {QVec{-1}}, {});
  auto right = Polyhedron::from_generators(1, {QVec{1}}, {QVec{1}}, {});
  auto c = std::make_shared<const cx::PolyhedralComplex>(
      *cx::PolyhedralComplex::validated(1, {left, right}, true, issues));
  std::map<size_t, AffineForm> pieces;
  for (size_t m : c->maximal())
    pieces[m] = c->cell(m).contains(QVec{2}) ? AffineForm(ZVec{2}, -2) : AffineForm(ZVec{0}, 0);
  return *pwa::FacewiseAffine::make(c, pieces, issues);
}

cx::AbstractComplex segment_with_ray() {
  // full powerset poset on {v1, v2, r}
  std::vector<std::string> all{"v1", "v2", "r"};
  std::vector<cx::AbstractElement> els(8);
  for (size_t mask = 0; mask < 8; ++mask) {
    auto& e = els[mask];
    e.id = mask == 0 ? "0" : "";
    for (size_t i = 0; i < 3; ++i)
      if (mask & (1ull << i)) {
        e.zeta.insert(all[i]);
        e.id += (e.id.empty() ? "" : "+") + all[i];
        e.covers.push_back(mask & ~(1ull << i));
      }
  }
  std::vector<std::string> issues;
  return *cx::AbstractComplex::make({"v1", "v2"}, {"r"}, std::move(els), issues);
}

}  // namespace

TEST_CASE("json round trips are canonical") {
  SUBCASE("rationals") {
    CHECK(io::rat_to_json(rat(3, 2)) == json("3/2"));
    CHECK(io::rat_to_json(Rat(-7)) == json("-7"));
    CHECK(io::rat_from_json(json("3/2")) == rat(3, 2));
    CHECK(io::rat_from_json(json(5)) == 5);
    CHECK(io::rat_from_json(json("10/4")) == rat(5, 2));
    CHECK_THROWS_AS(io::rat_from_json(json("3/0")), io::IoError);
    CHECK_THROWS_AS(io::rat_from_json(json("abc")), io::IoError);
  }

  SUBCASE("affine forms") {
    AffineForm f(ZVec{3, -1}, rat(1, 2));
    auto j = io::affine_to_json(f);
    CHECK(io::affine_from_json(j) == f);
    CHECK(j.dump() == io::affine_to_json(io::affine_from_json(j)).dump());
  }

  SUBCASE("polyhedra") {
    auto sq =
        Polyhedron::from_generators(2, {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{1, 1}}, {}, {});
    auto j = io::poly_to_json(sq);
    CHECK(io::poly_from_json(j).same_set(sq));
    CHECK(io::poly_to_json(io::poly_from_json(j)).dump() == j.dump());

    auto none = Polyhedron::empty_set(3);
    auto je = io::poly_to_json(none);
    CHECK(je.contains("empty"));
    CHECK(io::poly_from_json(je).empty());
  }

  SUBCASE("complexes serialize byte-identically") {
    auto c = ray_complex();
    auto j = io::complex_to_json(c);
    std::vector<std::string> issues;
    auto back = io::complex_from_json(j, false, issues);
    REQUIRE(back.has_value());
    CHECK(io::complex_to_json(*back).dump() == j.dump());
    CHECK(back->size() == c.size());
  }

  SUBCASE("abstract complexes") {
    auto a = segment_with_ray();
    auto j = io::abstract_to_json(a);
    std::vector<std::string> issues;
    auto back = io::abstract_from_json(j, issues);
    REQUIRE(back.has_value());
    CHECK(io::abstract_to_json(*back).dump() == j.dump());
    CHECK(back->delta().size() == a.delta().size());
  }

  SUBCASE("facewise functions") {
    auto f = ramp_function();
    auto j = io::facewise_to_json(f);
    std::vector<std::string> issues;
    auto back = io::facewise_from_json(j, false, issues);
    REQUIRE_MESSAGE(back.has_value(), (issues.empty() ? std::string() : issues.front()));
    CHECK(io::facewise_to_json(*back).dump() == j.dump());
    CHECK(back->eval(QVec{3}) == 4);
  }

  SUBCASE("expressions print canonically") {
    auto e = trop::parse_expr("min(x2 - 1, x1 + 2, x1 + 2, min(x2, x1)) - min(x1, 0)");
    auto j = io::expr_to_json(e);
    auto back = io::expr_from_json(j);
    CHECK(io::expr_to_json(back).dump() == j.dump());
    CHECK(trop::print(back) == trop::print(e));
  }

  SUBCASE("malformed input raises io errors") {
    CHECK_THROWS_AS(io::poly_from_json(json::parse("{\"ineqs\":[]}")), io::IoError);
    CHECK_THROWS_AS(io::affine_from_json(json::parse("{\"m\":\"x\",\"g\":0}")), io::IoError);
    CHECK_THROWS_AS(io::expr_from_json(json("min(x1,")), io::IoError);
    CHECK_THROWS_AS(io::read_json_file("/nonexistent/file.json"), io::IoError);
  }
}

TEST_CASE("cli fixtures") {
  ensure_dir();
  io::write_json_file(path_of("cx.json"), io::complex_to_json(ray_complex()));
  io::write_json_file(path_of("fn.json"), io::facewise_to_json(ramp_function()));
  io::write_json_file(path_of("abs.json"), io::abstract_to_json(segment_with_ray()));
  io::write_json_file(path_of("expr.json"),
                      io::expr_to_json(trop::parse_expr("min(x1, 0)")));
  {
    std::ofstream bad(path_of("bad.json"));
    bad << "{ not json";
  }
  {
    // two parallel rays with different slopes: outside the rational class
    std::vector<std::string> issues;
    auto a = Polyhedron::from_generators(2, {QVec{0, 0}}, {QVec{0, 1}}, {});
    auto b = Polyhedron::from_generators(2, {QVec{1, 0}}, {QVec{0, 1}}, {});
    auto c = std::make_shared<const cx::PolyhedralComplex>(
        *cx::PolyhedralComplex::validated(2, {a, b}, true, issues));
    std::map<size_t, AffineForm> pieces;
    for (size_t m : c->maximal())
      pieces[m] = c->cell(m).contains(QVec{0, 0}) ? AffineForm(ZVec{0, 1}, 0)
                                                  : AffineForm(ZVec{0, 2}, 0);
    auto f = *pwa::FacewiseAffine::make(c, pieces, issues);
    io::write_json_file(path_of("nonrat.json"), io::facewise_to_json(f));
  }
  {
    // bounded carrier for off-support evaluation
    std::vector<std::string> issues;
    auto seg = Polyhedron::from_generators(1, {QVec{0}, QVec{1}}, {}, {});
    auto c = std::make_shared<const cx::PolyhedralComplex>(
        *cx::PolyhedralComplex::validated(1, {seg}, true, issues));
    std::map<size_t, AffineForm> pieces{{*c->find(seg.key()), AffineForm(ZVec{1}, 0)}};
    auto f = *pwa::FacewiseAffine::make(c, pieces, issues);
    io::write_json_file(path_of("bounded.json"), io::facewise_to_json(f));
  }

  SUBCASE("exit code contract") {
    CHECK(run_cli("validate " + path_of("cx.json")) == 0);
    CHECK(run_cli("validate " + path_of("fn.json")) == 0);
    CHECK(run_cli("validate " + path_of("abs.json")) == 0);
    CHECK(run_cli("validate " + path_of("bad.json")) == 1);
    CHECK(run_cli("validate " + path_of("missing.json")) == 1);
    CHECK(run_cli("rat-check " + path_of("fn.json")) == 0);
    CHECK(run_cli("rat-check " + path_of("nonrat.json")) == 3);
    CHECK(run_cli("validate --max-dim 0 " + path_of("cx.json")) == 4);
  }

  SUBCASE("invalid complexes are reported with diagnostics") {
    std::vector<std::string> issues;
    auto s1 =
        Polyhedron::from_generators(2, {QVec{0, 0}, QVec{2, 0}, QVec{0, 2}, QVec{2, 2}}, {}, {});
    auto s2 =
        Polyhedron::from_generators(2, {QVec{1, 1}, QVec{3, 1}, QVec{1, 3}, QVec{3, 3}}, {}, {});
    json j;
    j["dim"] = 2;
    j["cells"] = json::array({io::poly_to_json(s1), io::poly_to_json(s2)});
    io::write_json_file(path_of("overlap.json"), j);
    CHECK(run_cli("validate " + path_of("overlap.json")) == 2);
    auto rep = json::parse(slurp(path_of("stdout.txt")));
    CHECK(rep["valid"] == false);
    CHECK(!rep["issues"].empty());
  }

  SUBCASE("evaluation") {
    CHECK(run_cli("eval " + path_of("fn.json") + " 5") == 0);
    CHECK(json::parse(cli_stdout())["value"] == "8");
    CHECK(run_cli("eval " + path_of("fn.json") + " 1/2") == 0);
    CHECK(json::parse(cli_stdout())["value"] == "0");
    CHECK(run_cli("eval " + path_of("expr.json") + " -3/2") == 0);
    CHECK(json::parse(cli_stdout())["value"] == "-3/2");
    CHECK(run_cli("eval " + path_of("bounded.json") + " 2") == 2);
    CHECK(run_cli("eval " + path_of("fn.json") + " 1,2") == 1);  // wrong arity
  }

  SUBCASE("synthesis round trip through files") {
    CHECK(run_cli("synthesize " + path_of("fn.json") + " --out " + path_of("syn.json")) == 0);
    auto syn = json::parse(slurp(path_of("syn.json")));
    CHECK(syn["lambda"] == "1");
    CHECK(syn["expression"] ==
          "min(-x1 + 1, x1 - 1) - min(-3*x1 + 3, x1 - 1)");
    CHECK(run_cli("verify " + path_of("fn.json") + " " + path_of("syn.json")) == 0);
    CHECK(run_cli("verify " + path_of("fn.json") + " " + path_of("expr.json")) == 2);
    auto rep = json::parse(cli_stdout());
    CHECK(rep["equal"] == false);
    CHECK(rep.contains("witness"));
    CHECK(run_cli("synthesize " + path_of("nonrat.json")) == 3);
  }

  SUBCASE("refinement") {
    CHECK(run_cli("refine " + path_of("cx.json") + " " + path_of("cx.json") + " --out " +
                  path_of("ref.json")) == 0);
    auto rep = json::parse(slurp(path_of("ref.json")));
    CHECK(rep["cells"].size() == 2);  // the ray and its endpoint
  }

  SUBCASE("subdivision pipeline") {
    CHECK(run_cli("bary " + path_of("abs.json") + " --out " + path_of("bary.json")) == 0);
    auto rep = json::parse(slurp(path_of("bary.json")));
    CHECK(rep["f_vector"] == json::array({6, 12, 6}));
    CHECK(run_cli("bary --max-cells 5 " + path_of("abs.json")) == 4);

    CHECK(run_cli("embed " + path_of("abs.json") + " --out " + path_of("emb.json")) == 0);
    auto emb = json::parse(slurp(path_of("emb.json")));
    CHECK(emb["lattice_check"]["ok"] == true);
    CHECK(emb["image_coords"].size() == 7);

    CHECK(run_cli("embed --perturb v1+v2=2 " + path_of("abs.json")) == 2);
    CHECK(run_cli("embed --perturb v1+v2=1/3 " + path_of("abs.json")) == 2);

    CHECK(run_cli("faithful " + path_of("abs.json")) == 0);
    auto fj = json::parse(cli_stdout());
    CHECK(fj["faithful"] == true);
    // the last image coordinate is the subset axis: dropping or doubling it
    // breaks the certificate, while a barycenter axis is harmless to drop
    CHECK(run_cli("faithful --corrupt double=6 " + path_of("abs.json")) == 2);
    CHECK(run_cli("faithful --corrupt drop=6 " + path_of("abs.json")) == 2);
    CHECK(run_cli("faithful --corrupt drop=0 " + path_of("abs.json")) == 0);
  }

  SUBCASE("arrangement completion matches the golden shape") {
    CHECK(run_cli("complete " + path_of("cx.json") + " --out " + path_of("comp.json")) == 0);
    auto rep = json::parse(slurp(path_of("comp.json")));
    CHECK(rep["hyperplanes"].size() == 1);
    CHECK(rep["hat"]["cells"].size() == 3);        // both half-lines and the origin
    CHECK(rep["sigma_beta"]["cells"].size() == 2);  // the ray and the origin
  }

  SUBCASE("output bytes are deterministic") {
    CHECK(run_cli("complete " + path_of("cx.json") + " --out " + path_of("c1.json")) == 0);
    CHECK(run_cli("complete " + path_of("cx.json") + " --out " + path_of("c2.json")) == 0);
    CHECK(slurp(path_of("c1.json")) == slurp(path_of("c2.json")));
    CHECK(run_cli("bary " + path_of("abs.json") + " --out " + path_of("b1.json")) == 0);
    CHECK(run_cli("bary " + path_of("abs.json") + " --out " + path_of("b2.json")) == 0);
    CHECK(slurp(path_of("b1.json")) == slurp(path_of("b2.json")));
  }

  SUBCASE("oracle recheck paths agree") {
    CHECK(run_cli("validate --oracle " + path_of("cx.json")) == 0);
    CHECK(run_cli("rat-check --oracle " + path_of("fn.json")) == 0);
    CHECK(run_cli("rat-check --oracle " + path_of("nonrat.json")) == 3);
    CHECK(run_cli("synthesize --oracle --seed 7 " + path_of("fn.json")) == 0);
    CHECK(run_cli("bary --oracle " + path_of("abs.json")) == 0);
    CHECK(run_cli("faithful --oracle " + path_of("abs.json")) == 0);
  }

  SUBCASE("plots") {
    std::vector<std::string> issues;
    auto sq =
        Polyhedron::from_generators(2, {QVec{0, 0}, QVec{1, 0}, QVec{0, 1}, QVec{1, 1}}, {}, {});
    auto wedge = Polyhedron::from_generators(2, {QVec{1, 1}}, {QVec{1, 0}, QVec{0, 1}}, {});
    auto c = *cx::PolyhedralComplex::validated(2, {sq, wedge}, true, issues);
    io::write_json_file(path_of("sq.json"), io::complex_to_json(c));
    CHECK(run_cli("plot " + path_of("sq.json") + " --out " + path_of("sq.svg")) == 0);
    auto svg = slurp(path_of("sq.svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polygon") != std::string::npos);

    auto cube_pt = Polyhedron::from_generators(3, {QVec{0, 0, 0}}, {}, {});
    auto c3 = *cx::PolyhedralComplex::validated(3, {cube_pt}, true, issues);
    io::write_json_file(path_of("threed.json"), io::complex_to_json(c3));
    CHECK(run_cli("plot " + path_of("threed.json")) == 4);
  }
}
