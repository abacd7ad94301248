#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tff/baryfaithful.hpp"
#include "tff/io.hpp"
#include "tff/lattice.hpp"
#include "tff/linearity.hpp"
#include "tff/synthesis.hpp"

using namespace tff;
using io::json;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_INPUT = 1;     // unreadable or unparsable input
constexpr int EXIT_CERT = 2;      // validation or certificate failure
constexpr int EXIT_NOT_RAT = 3;   // function outside the rational class
constexpr int EXIT_CAPS = 4;      // resource cap hit

struct Options {
  std::string out;
  unsigned long seed = 0;
  int max_dim = 16;
  size_t max_cells = 20000;
  bool strict = false;
  bool oracle = false;
};

void emit(const Options& opt, const json& j) {
  if (opt.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    io::write_json_file(opt.out, j);
  }
}

void emit_text(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw io::IoError("cannot write " + opt.out);
    f << text;
  }
}

QVec parse_point(const std::string& s) {
  QVec u;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto r = parse_rat(item);
    if (!r) throw io::IoError("bad coordinate \"" + item + "\"");
    u.push_back(*r);
  }
  if (u.empty()) throw io::IoError("empty point");
  return u;
}

void check_dim(const Options& opt, int dim) {
  if (dim > opt.max_dim)
    throw trop::CapExceeded("ambient dimension " + std::to_string(dim) +
                            " exceeds --max-dim " + std::to_string(opt.max_dim));
}

cx::PolyhedralComplex load_complex(const Options& opt, const std::string& path,
                                   std::vector<std::string>& issues) {
  json j = io::read_json_file(path);
  auto c = io::complex_from_json(j, !opt.strict, issues);
  if (!c) return cx::PolyhedralComplex();
  check_dim(opt, c->ambient());
  if (c->size() > opt.max_cells)
    throw trop::CapExceeded("complex exceeds --max-cells");
  return std::move(*c);
}

pwa::FacewiseAffine load_facewise(const Options& opt, const std::string& fn_path,
                                  const std::string& cx_path) {
  json j = io::read_json_file(fn_path);
  if (!cx_path.empty()) {
    json cj = io::read_json_file(cx_path);
    j["complex"] = cj;
  }
  std::vector<std::string> issues;
  auto f = io::facewise_from_json(j, !opt.strict, issues);
  if (!f) {
    json rep;
    rep["valid"] = false;
    rep["issues"] = issues;
    std::cout << rep.dump(2) << "\n";
    throw trop::TropError("invalid facewise function");
  }
  check_dim(opt, f->complex().ambient());
  return std::move(*f);
}

json rat_witness_json(const pwa::RatWitness& w) {
  json j;
  j["cell_a"] = w.cell_a;
  j["cell_b"] = w.cell_b;
  j["direction"] = io::zvec_to_json(w.direction);
  j["slope_a"] = rat_str(w.slope_a);
  j["slope_b"] = rat_str(w.slope_b);
  return j;
}

/* Slow-path slope comparison along parallel rays via two far probes. */
bool rat_oracle(const pwa::FacewiseAffine& f, const Options& opt) {
  const auto& c = f.complex();
  Rat t1 = Rat(Int(1) << 10), t2 = Rat(Int(1) << 20);
  std::map<std::string, std::optional<Rat>> cls;
  bool member = true;
  for (size_t m : c.maximal()) {
    const auto& vr = c.cell(m).vrep();
    std::vector<ZVec> dirs = vr.rays;
    for (const auto& l : vr.lineality) {
      dirs.push_back(l);
      ZVec neg = l;
      for (auto& x : neg) x = -x;
      dirs.push_back(neg);
    }
    for (const auto& r : dirs) {
      QVec u = c.cell(m).relint_point();
      QVec a = u, b = u;
      for (size_t i = 0; i < u.size(); ++i) {
        a[i] += t1 * r[i];
        b[i] += t2 * r[i];
      }
      Rat slope = (f.eval(b) - f.eval(a)) / (t2 - t1);
      std::string key;
      for (const auto& x : r) key += x.get_str() + ",";
      auto& slot = cls[key];
      if (slot && *slot != slope) member = false;
      if (!slot) slot = slope;
    }
  }
  (void)opt;
  return member;
}

int cmd_validate(const Options& opt, const std::string& path) {
  json j = io::read_json_file(path);
  json rep;
  if (j.contains("pieces")) {
    std::vector<std::string> issues;
    auto f = io::facewise_from_json(j, !opt.strict, issues);
    rep["kind"] = "function";
    rep["valid"] = f.has_value();
    if (!f) {
      rep["issues"] = issues;
      emit(opt, rep);
      return EXIT_CERT;
    }
    check_dim(opt, f->complex().ambient());
    rep["cells"] = f->complex().size();
    rep["maximal"] = f->complex().maximal().size();
    emit(opt, rep);
    return EXIT_OK;
  }
  if (j.contains("elements")) {
    std::vector<std::string> issues;
    auto a = io::abstract_from_json(j, issues);
    rep["kind"] = "abstract";
    rep["valid"] = a.has_value();
    if (!a) {
      rep["issues"] = issues;
      emit(opt, rep);
      return EXIT_CERT;
    }
    rep["elements"] = a->size();
    rep["delta"] = a->delta().size();
    emit(opt, rep);
    return EXIT_OK;
  }
  std::vector<std::string> issues;
  auto c = io::complex_from_json(j, !opt.strict, issues);
  rep["kind"] = "complex";
  rep["valid"] = c.has_value();
  if (!c) {
    rep["issues"] = issues;
    emit(opt, rep);
    return EXIT_CERT;
  }
  check_dim(opt, c->ambient());
  if (opt.oracle) {
    /* Slow path: pairwise intersections located by linear scan. */
    for (size_t a = 0; a < c->size(); ++a)
      for (size_t b = a + 1; b < c->size(); ++b) {
        auto meet = c->cell(a).intersect(c->cell(b));
        if (meet.empty()) continue;
        bool found = false;
        for (size_t k = 0; k < c->size(); ++k)
          if (c->cell(k).same_set(meet)) found = true;
        if (!found) {
          rep["valid"] = false;
          rep["issues"] = {"oracle: intersection of cells " + std::to_string(a) + " and " +
                           std::to_string(b) + " is not a cell"};
          emit(opt, rep);
          return EXIT_CERT;
        }
      }
  }
  rep["cells"] = c->size();
  rep["maximal"] = c->maximal().size();
  rep["complete"] = c->is_complete();
  emit(opt, rep);
  return EXIT_OK;
}

int cmd_refine(const Options& opt, const std::string& pa, const std::string& pb) {
  std::vector<std::string> ia, ib;
  auto a = load_complex(opt, pa, ia);
  auto b = load_complex(opt, pb, ib);
  if (!ia.empty() || !ib.empty()) {
    json rep;
    rep["valid"] = false;
    rep["issues"] = ia.empty() ? ib : ia;
    emit(opt, rep);
    return EXIT_CERT;
  }
  auto r = cx::common_refinement(a, b);
  emit(opt, io::complex_to_json(r));
  return EXIT_OK;
}

int cmd_rat_check(const Options& opt, const std::string& fn, const std::string& cx_path) {
  auto f = load_facewise(opt, fn, cx_path);
  auto res = pwa::rat_membership(f);
  json rep;
  rep["member"] = res.member;
  if (res.witness) rep["witness"] = rat_witness_json(*res.witness);
  if (opt.oracle) {
    bool slow = rat_oracle(f, opt);
    rep["oracle_member"] = slow;
    if (slow != res.member) {
      rep["issues"] = {"oracle disagrees with the certificate"};
      emit(opt, rep);
      return EXIT_CERT;
    }
  }
  emit(opt, rep);
  return res.member ? EXIT_OK : EXIT_NOT_RAT;
}

int cmd_synthesize(const Options& opt, const std::string& fn, const std::string& cx_path) {
  auto f = load_facewise(opt, fn, cx_path);
  auto out = synth::synthesize(f);
  if (auto* err = std::get_if<synth::SynthesisError>(&out)) {
    json rep;
    rep["error"] = err->kind == synth::SynthesisError::NotInRat ? "not_in_rat" : "cap_exceeded";
    rep["detail"] = err->detail;
    if (err->witness) rep["witness"] = rat_witness_json(*err->witness);
    emit(opt, rep);
    return err->kind == synth::SynthesisError::NotInRat ? EXIT_NOT_RAT : EXIT_CAPS;
  }
  auto& r = std::get<synth::SynthesisResult>(out);
  std::cout << print(r.expression) << "\n";
  auto rep = io::synthesis_to_json(r);
  auto ver = synth::verify_synthesis(f, r);
  rep["verified"] = ver.ok;
  if (!ver.ok) rep["detail"] = ver.detail;
  if (opt.oracle && ver.ok) {
    std::mt19937_64 rng(opt.seed);
    const auto& c = f.complex();
    for (size_t m : c.maximal()) {
      const auto& vr = c.cell(m).vrep();
      for (int probe = 0; probe < 8 && ver.ok; ++probe) {
        QVec u(vr.vertices[0].size(), 0);
        Rat total = 0;
        for (const auto& v : vr.vertices) {
          Rat w((long)(rng() % 7 + 1));
          total += w;
          for (size_t i = 0; i < u.size(); ++i) u[i] += w * v[i];
        }
        for (auto& x : u) x /= total;
        for (const auto& ray : vr.rays) {
          Rat s((long)(rng() % 9));
          for (size_t i = 0; i < u.size(); ++i) u[i] += s * ray[i];
        }
        if (trop::eval(r.expression, u) != f.eval(u)) {
          ver.ok = false;
          rep["verified"] = false;
          rep["detail"] = "oracle: value mismatch at a sampled point";
        }
      }
    }
  }
  emit(opt, rep);
  return ver.ok ? EXIT_OK : EXIT_CERT;
}

int cmd_verify(const Options& opt, const std::string& fn, const std::string& expr_path,
               const std::string& cx_path) {
  auto f = load_facewise(opt, fn, cx_path);
  json ej = io::read_json_file(expr_path);
  trop::TropRationalExpr e =
      ej.contains("expression")
          ? io::expr_from_json(json(ej.at("expression").get<std::string>()))
          : io::expr_from_json(ej);
  if (e.dim() != f.complex().ambient())
    throw io::IoError("expression dimension does not match the complex");
  auto res = pwa::equal_on(f.complex(), pwa::EqTarget(e), pwa::EqTarget(f));
  json rep;
  rep["equal"] = res.equal;
  if (!res.equal && res.witness) {
    rep["witness"] = io::qvec_to_json(*res.witness);
    rep["lhs"] = rat_str(res.lhs);
    rep["rhs"] = rat_str(res.rhs);
  }
  emit(opt, rep);
  return res.equal ? EXIT_OK : EXIT_CERT;
}

struct AbstractPipeline {
  cx::AbstractComplex abs;
  cx::Realization real;
  bary::BarySubdivision sub;
};

AbstractPipeline run_bary(const Options& opt, const std::string& path) {
  json j = io::read_json_file(path);
  std::vector<std::string> issues;
  auto a = io::abstract_from_json(j, issues);
  if (!a) {
    json rep;
    rep["valid"] = false;
    rep["issues"] = issues;
    std::cout << rep.dump(2) << "\n";
    throw trop::TropError("invalid abstract complex");
  }
  AbstractPipeline p{std::move(*a), {}, {}};
  p.real = cx::realize_abstract(p.abs);
  check_dim(opt, p.real.complex.ambient());
  p.sub = bary::barycentric_subdivision(p.real, opt.max_cells);
  return p;
}

json bary_json(const AbstractPipeline& p) {
  json rep;
  std::map<int, size_t> fv;
  for (const auto& c : p.sub.cells) ++fv[c.realized.dim()];
  json fvec = json::array();
  for (auto& [d, n] : fv) fvec.push_back(n);
  rep["f_vector"] = std::move(fvec);
  json cells = json::array();
  for (const auto& c : p.sub.cells) {
    json cj;
    json chain = json::array();
    for (size_t t : c.chain) chain.push_back(p.abs.elements()[t].id);
    cj["chain"] = std::move(chain);
    json sets = json::array();
    for (const auto& s : c.sets) sets.push_back(std::vector<std::string>(s.begin(), s.end()));
    cj["sets"] = std::move(sets);
    cj["dim"] = c.realized.dim();
    cj["bounded"] = c.realized.is_bounded();
    cells.push_back(std::move(cj));
  }
  rep["cells"] = std::move(cells);
  rep["complex"] = io::complex_to_json(p.sub.complex);
  rep["prime"] = io::abstract_to_json(p.sub.prime);
  return rep;
}

int cmd_bary(const Options& opt, const std::string& path) {
  auto p = run_bary(opt, path);
  emit(opt, bary_json(p));
  if (opt.oracle) {
    /* Support sampling: barycenters of original cells lie in the
     * subdivision; subdivision relint points lie in the original. */
    for (size_t i = 0; i < p.real.complex.size(); ++i)
      if (!p.sub.complex.locate(p.real.complex.cell(i).relint_point()))
        return EXIT_CERT;
    for (size_t i = 0; i < p.sub.complex.size(); ++i)
      if (!p.real.complex.locate(p.sub.complex.cell(i).relint_point()))
        return EXIT_CERT;
  }
  return EXIT_OK;
}

std::map<size_t, Rat> parse_perturb(const cx::AbstractComplex& a, const std::string& spec) {
  std::map<size_t, Rat> scale;
  if (spec.empty()) return scale;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto pos = item.find('=');
    if (pos == std::string::npos) throw io::IoError("--perturb wants id=a/b");
    auto r = parse_rat(item.substr(pos + 1));
    if (!r) throw io::IoError("--perturb wants id=a/b");
    scale[a.index_of(item.substr(0, pos))] = *r;
  }
  return scale;
}

int cmd_embed(const Options& opt, const std::string& path, const std::string& perturb) {
  auto p = run_bary(opt, path);
  auto emb = bary::embed_barycentric(p.sub, parse_perturb(p.abs, perturb));
  auto lc = bary::lattice_preservation_check(emb);
  json rep;
  rep["image_coords"] = emb.image_coords;
  rep["image"] = io::complex_to_json(emb.image);
  json psis = json::array();
  for (const auto& m : emb.psi) {
    json rows = json::array();
    for (const auto& row : m) rows.push_back(io::qvec_to_json(row));
    psis.push_back(std::move(rows));
  }
  rep["psi"] = std::move(psis);
  json lj;
  lj["ok"] = lc.ok;
  if (!lc.ok) {
    lj["cell"] = lc.cell;
    lj["detail"] = lc.detail;
  }
  rep["lattice_check"] = std::move(lj);
  emit(opt, rep);
  return lc.ok ? EXIT_OK : EXIT_CERT;
}

int cmd_faithful(const Options& opt, const std::string& path, const std::string& perturb,
                 const std::string& corrupt) {
  auto p = run_bary(opt, path);
  auto emb = bary::embed_barycentric(p.sub, parse_perturb(p.abs, perturb));
  auto lc = bary::lattice_preservation_check(emb);
  json rep;
  rep["lattice_ok"] = lc.ok;
  if (!lc.ok) rep["lattice_detail"] = lc.detail;

  auto maps = bary::embedding_maps(emb);
  int img_dim = (int)emb.image_coords.size();
  if (!corrupt.empty()) {
    auto pos = corrupt.find('=');
    std::string kind = corrupt.substr(0, pos);
    size_t idx = pos == std::string::npos ? 0 : (size_t)std::stoul(corrupt.substr(pos + 1));
    if (kind == "drop") {
      if (idx >= (size_t)img_dim) throw io::IoError("--corrupt index out of range");
      for (auto& m : maps) {
        m.a.erase(m.a.begin() + (long)idx);
        m.b.erase(m.b.begin() + (long)idx);
      }
      --img_dim;
    } else if (kind == "double") {
      if (idx >= (size_t)img_dim) throw io::IoError("--corrupt index out of range");
      for (auto& m : maps)
        for (auto& x : m.a[idx]) x *= 2;
    } else {
      throw io::IoError("--corrupt wants drop=i or double=i");
    }
  }
  auto rf = bary::faithfulness_check(p.sub.complex, maps, img_dim);
  rep["faithful"] = rf.ok;
  rep["detail"] = rf.detail;
  if (rf.pair) rep["pair"] = {rf.pair->first, rf.pair->second};
  if (rf.cell) rep["cell"] = *rf.cell;

  if (opt.oracle && rf.ok) {
    /* Injectivity sampling: distinct relint points must map apart. */
    const auto& tops = p.sub.complex.maximal();
    std::vector<QVec> pts, imgs;
    for (size_t i = 0; i < tops.size(); ++i) {
      QVec u = p.sub.complex.cell(tops[i]).relint_point();
      QVec y((size_t)img_dim, 0);
      for (int k = 0; k < img_dim; ++k) y[(size_t)k] = dot(maps[i].a[(size_t)k], u) + maps[i].b[(size_t)k];
      pts.push_back(u);
      imgs.push_back(y);
    }
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        if (compare(pts[i], pts[j]) != 0 && compare(imgs[i], imgs[j]) == 0) {
          rep["faithful"] = false;
          rep["detail"] = "oracle: two distinct points share an image";
          emit(opt, rep);
          return EXIT_CERT;
        }
  }
  emit(opt, rep);
  return (lc.ok && rf.ok) ? EXIT_OK : EXIT_CERT;
}

int cmd_eval(const Options& opt, const std::string& path, const std::string& point) {
  QVec u = parse_point(point);
  check_dim(opt, (int)u.size());
  json j = io::read_json_file(path);
  json rep;
  if (j.is_object() && j.contains("pieces")) {
    std::vector<std::string> issues;
    auto f = io::facewise_from_json(j, !opt.strict, issues);
    if (!f) {
      rep["valid"] = false;
      rep["issues"] = issues;
      emit(opt, rep);
      return EXIT_CERT;
    }
    if ((int)u.size() != f->complex().ambient()) throw io::IoError("point dimension mismatch");
    try {
      rep["value"] = rat_str(f->eval(u));
    } catch (const std::domain_error&) {
      rep["error"] = "point is outside the support";
      emit(opt, rep);
      return EXIT_CERT;
    }
    emit(opt, rep);
    return EXIT_OK;
  }
  auto e = io::expr_from_json(j);
  if (e.dim() != (int)u.size()) throw io::IoError("point dimension mismatch");
  if (!e.den) {
    auto v = trop::eval(e.num, u);
    rep["value"] = trop_str(v);
  } else {
    rep["value"] = rat_str(trop::eval(e, u));
  }
  emit(opt, rep);
  return EXIT_OK;
}

int cmd_complete(const Options& opt, const std::string& path) {
  std::vector<std::string> issues;
  auto c = load_complex(opt, path, issues);
  if (!issues.empty()) {
    json rep;
    rep["valid"] = false;
    rep["issues"] = issues;
    emit(opt, rep);
    return EXIT_CERT;
  }
  auto ac = cx::arrangement_completion(c);
  json rep;
  json hs = json::array();
  for (const auto& h : ac.hat.hyperplanes) hs.push_back(print(h));
  rep["hyperplanes"] = std::move(hs);
  rep["hat"] = io::complex_to_json(ac.hat.complex);
  rep["sigma_beta"] = io::complex_to_json(ac.sigma_beta);
  emit(opt, rep);
  return EXIT_OK;
}

/* ---- plotting ---- */

double approx(const Rat& r) { return r.get_d(); }

struct Box {
  double x0 = -1, y0 = -1, x1 = 1, y1 = 1;
};

std::string svg_plot(const cx::PolyhedralComplex& c, const pwa::FacewiseAffine* fn) {
  int n = c.ambient();
  Box box;
  bool any = false;
  for (size_t i = 0; i < c.size(); ++i)
    for (const auto& v : c.cell(i).vrep().vertices) {
      double x = approx(v[0]);
      double y = n == 2 ? approx(v[1]) : 0.0;
      if (!any) {
        box = {x, y, x, y};
        any = true;
      }
      box.x0 = std::min(box.x0, x);
      box.x1 = std::max(box.x1, x);
      box.y0 = std::min(box.y0, y);
      box.y1 = std::max(box.y1, y);
    }
  double spanx = std::max(box.x1 - box.x0, 1e-9), spany = std::max(box.y1 - box.y0, 1e-9);
  double pad = 0.35 * std::max(spanx, spany) + 0.5;
  box.x0 -= pad; box.x1 += pad; box.y0 -= pad; box.y1 += pad;

  const double W = 640, H = 480, M = 20;
  double sx = (W - 2 * M) / (box.x1 - box.x0), sy = (H - 2 * M) / (box.y1 - box.y0);
  double s = std::min(sx, sy);
  auto px = [&](double x) { return M + (x - box.x0) * s; };
  auto py = [&](double y) { return H - M - (y - box.y0) * s; };
  char buf[256];
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";

  /* Clip to the padded box so unbounded cells draw as finite polygons. */
  auto clip_box = [&]() {
    std::vector<poly::Constraint> cs;
    long x0 = (long)std::floor(box.x0 * 64.0), x1 = (long)std::ceil(box.x1 * 64.0);
    long y0 = (long)std::floor(box.y0 * 64.0), y1 = (long)std::ceil(box.y1 * 64.0);
    auto cons = [&](ZVec m, long g) { cs.emplace_back(trop::AffineForm(std::move(m), Rat(g))); };
    if (n == 1) {
      cons(ZVec{64}, -x0);
      cons(ZVec{-64}, x1);
    } else {
      cons(ZVec{64, 0}, -x0);
      cons(ZVec{-64, 0}, x1);
      cons(ZVec{0, 64}, -y0);
      cons(ZVec{0, -64}, y1);
    }
    return poly::Polyhedron::from_constraints(n, cs);
  }();

  auto pt2 = [&](const QVec& v) {
    return std::pair<double, double>(px(approx(v[0])), py(n == 2 ? approx(v[1]) : 0.0));
  };

  std::vector<std::string> layers[3];
  for (size_t i = 0; i < c.size(); ++i) {
    const auto& cell = c.cell(i);
    auto clipped = cell.intersect(clip_box);
    if (clipped.empty()) continue;
    const auto& vr = clipped.vrep();
    int d = cell.dim();
    if (d == 0) {
      auto [x, y] = pt2(vr.vertices[0]);
      snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"#1f3b73\"/>\n", x, y);
      layers[2].push_back(buf);
    } else if (d == 1) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& v : vr.vertices) pts.push_back(pt2(v));
      if (pts.size() >= 2) {
        std::sort(pts.begin(), pts.end());
        snprintf(buf, sizeof buf,
                 "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                 "stroke=\"#1f3b73\" stroke-width=\"1.6\"/>\n",
                 pts.front().first, pts.front().second, pts.back().first, pts.back().second);
        layers[1].push_back(buf);
      }
      if (!cell.is_bounded()) {
        for (const auto& r : cell.vrep().rays) {
          QVec far = vr.vertices[0];
          for (const auto& vtx : vr.vertices)
            if (dot(r, vtx) > dot(r, far)) far = vtx;
          auto [ax, ay] = pt2(far);
          double dx = r[0].get_d(), dy = n == 2 ? r[1].get_d() : 0.0;
          double len = std::hypot(dx, dy);
          dx /= len;
          dy /= len;  // svg y grows downward
          snprintf(buf, sizeof buf,
                   "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"#1f3b73\"/>\n",
                   ax + dx * 10, ay - dy * 10, ax - dy * 3.5, ay - dx * 3.5, ax + dy * 3.5,
                   ay + dx * 3.5);
          layers[2].push_back(buf);
        }
      }
    } else if (d == 2) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& v : vr.vertices) pts.push_back(pt2(v));
      double cxm = 0, cym = 0;
      for (auto& [x, y] : pts) { cxm += x; cym += y; }
      cxm /= (double)pts.size();
      cym /= (double)pts.size();
      std::sort(pts.begin(), pts.end(), [&](auto& a, auto& b) {
        return std::atan2(a.second - cym, a.first - cxm) < std::atan2(b.second - cym, b.first - cxm);
      });
      std::string poly = "<polygon points=\"";
      for (auto& [x, y] : pts) {
        snprintf(buf, sizeof buf, "%.2f,%.2f ", x, y);
        poly += buf;
      }
      poly += "\" fill=\"#dbe5f5\" stroke=\"#9db3d8\" stroke-width=\"0.7\"/>\n";
      layers[0].push_back(poly);
    }
    if (fn) {
      bool is_max = false;
      for (size_t m : c.maximal()) is_max |= (m == i);
      if (is_max) {
        auto [x, y] = pt2(clipped.relint_point());
        snprintf(buf, sizeof buf,
                 "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" fill=\"#333\">%s</text>\n", x, y,
                 print(fn->form_on(i)).c_str());
        layers[2].push_back(buf);
      }
    }
  }
  for (auto& layer : layers)
    for (auto& sfrag : layer) out += sfrag;
  out += "</svg>\n";
  return out;
}

int cmd_plot(const Options& opt, const std::string& path, const std::string& fn_path) {
  std::vector<std::string> issues;
  json j = io::read_json_file(path);
  std::optional<pwa::FacewiseAffine> f;
  cx::PolyhedralComplex c;
  if (j.contains("pieces")) {
    auto fw = io::facewise_from_json(j, !opt.strict, issues);
    if (!fw) {
      json rep;
      rep["valid"] = false;
      rep["issues"] = issues;
      emit(opt, rep);
      return EXIT_CERT;
    }
    f = std::move(*fw);
    c = f->complex();
  } else {
    auto cc = io::complex_from_json(j, !opt.strict, issues);
    if (!cc) {
      json rep;
      rep["valid"] = false;
      rep["issues"] = issues;
      emit(opt, rep);
      return EXIT_CERT;
    }
    c = std::move(*cc);
  }
  if (!fn_path.empty()) {
    f = load_facewise(opt, fn_path, "");
  }
  if (c.ambient() > 2)
    throw trop::CapExceeded("plotting needs ambient dimension at most 2");
  emit_text(opt, svg_plot(c, f ? &*f : nullptr));
  return EXIT_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact tropical function fields on polyhedral complexes"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--out", opt.out, "output file (default stdout)");
  app.add_option("--seed", opt.seed, "seed for sampled oracles");
  app.add_option("--max-dim", opt.max_dim, "ambient dimension cap");
  app.add_option("--max-cells", opt.max_cells, "cell count cap");
  app.add_flag("--strict", opt.strict, "require face-closed inputs");
  app.add_flag("--oracle", opt.oracle, "re-check certificates via slow independent paths");
  app.fallthrough();

  std::string in1, in2, point, perturb, corrupt, cx_path;

  auto* v = app.add_subcommand("validate", "validate a complex or abstract complex");
  v->add_option("input", in1)->required();
  auto* rf = app.add_subcommand("refine", "common refinement of two complexes");
  rf->add_option("first", in1)->required();
  rf->add_option("second", in2)->required();
  auto* rc = app.add_subcommand("rat-check", "test membership in the rational class");
  rc->add_option("function", in1)->required();
  rc->add_option("--complex", cx_path, "complex file when the function file has only pieces");
  auto* sy = app.add_subcommand("synthesize", "synthesize a tropical rational expression");
  sy->add_option("function", in1)->required();
  sy->add_option("--complex", cx_path);
  auto* ve = app.add_subcommand("verify", "verify an expression against a function");
  ve->add_option("function", in1)->required();
  ve->add_option("expression", in2)->required();
  ve->add_option("--complex", cx_path);
  auto* ba = app.add_subcommand("bary", "barycentric subdivision of an abstract complex");
  ba->add_option("input", in1)->required();
  auto* em = app.add_subcommand("embed", "coordinate embedding of the subdivision");
  em->add_option("input", in1)->required();
  em->add_option("--perturb", perturb, "scale barycenter images, id=a/b[,id=a/b...]");
  auto* fa = app.add_subcommand("faithful", "faithfulness certificate for the embedding");
  fa->add_option("input", in1)->required();
  fa->add_option("--perturb", perturb);
  fa->add_option("--corrupt", corrupt, "corrupt the maps: drop=i or double=i");
  auto* ev = app.add_subcommand("eval", "evaluate an expression or function at a point");
  ev->add_option("input", in1)->required();
  ev->add_option("point", point, "comma-separated rationals")->required();
  auto* co = app.add_subcommand("complete", "arrangement completion of a complex");
  co->add_option("input", in1)->required();
  auto* pl = app.add_subcommand("plot", "emit an SVG drawing (ambient dimension <= 2)");
  pl->add_option("input", in1)->required();
  pl->add_option("function", in2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (v->parsed()) return cmd_validate(opt, in1);
    if (rf->parsed()) return cmd_refine(opt, in1, in2);
    if (rc->parsed()) return cmd_rat_check(opt, in1, cx_path);
    if (sy->parsed()) return cmd_synthesize(opt, in1, cx_path);
    if (ve->parsed()) return cmd_verify(opt, in1, in2, cx_path);
    if (ba->parsed()) return cmd_bary(opt, in1);
    if (em->parsed()) return cmd_embed(opt, in1, perturb);
    if (fa->parsed()) return cmd_faithful(opt, in1, perturb, corrupt);
    if (ev->parsed()) return cmd_eval(opt, in1, point);
    if (co->parsed()) return cmd_complete(opt, in1);
    if (pl->parsed()) return cmd_plot(opt, in1, in2);
  } catch (const io::IoError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return EXIT_INPUT;
  } catch (const trop::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return EXIT_INPUT;
  } catch (const trop::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return EXIT_CAPS;
  } catch (const trop::TropError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_CERT;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_CERT;
  }
  return EXIT_OK;
}
