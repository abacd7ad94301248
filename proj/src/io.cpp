#include "tff/io.hpp"

#include <fstream>
#include <sstream>

namespace tff::io {

namespace {

Rat need_rat(const json& j) {
  if (j.is_number_integer()) return Rat((long)j.get<long long>());
  if (j.is_string()) {
    auto r = parse_rat(j.get<std::string>());
    if (r) return *r;
  }
  throw IoError("expected a rational like \"3/4\" or an integer, got " + j.dump());
}

Int need_int(const json& j) {
  Rat r = need_rat(j);
  if (r.get_den() != 1) throw IoError("expected an integer, got " + j.dump());
  return r.get_num();
}

const json& need_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw IoError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

}  // namespace

json rat_to_json(const Rat& r) { return json(rat_str(r)); }
Rat rat_from_json(const json& j) { return need_rat(j); }

json qvec_to_json(const QVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(rat_str(x));
  return a;
}

QVec qvec_from_json(const json& j) {
  if (!j.is_array()) throw IoError("expected an array of rationals");
  QVec v;
  for (const auto& x : j) v.push_back(need_rat(x));
  return v;
}

json zvec_to_json(const ZVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

ZVec zvec_from_json(const json& j) {
  if (!j.is_array()) throw IoError("expected an array of integers");
  ZVec v;
  for (const auto& x : j) v.push_back(need_int(x));
  return v;
}

json affine_to_json(const trop::AffineForm& f) {
  json j;
  j["m"] = zvec_to_json(f.m);
  j["g"] = rat_str(f.g);
  return j;
}

trop::AffineForm affine_from_json(const json& j) {
  return trop::AffineForm(zvec_from_json(need_field(j, "m")), need_rat(need_field(j, "g")));
}

json poly_to_json(const poly::Polyhedron& p) {
  json j;
  j["dim"] = p.ambient_dim();
  if (p.empty()) {
    j["empty"] = true;
    return j;
  }
  const auto& h = p.min_hrep();
  json in = json::array(), eq = json::array();
  for (const auto& f : h.ineqs) in.push_back(affine_to_json(f));
  for (const auto& f : h.eqs) eq.push_back(affine_to_json(f));
  j["ineqs"] = std::move(in);
  j["eqs"] = std::move(eq);
  return j;
}

poly::Polyhedron poly_from_json(const json& j) {
  int dim = (int)need_int(need_field(j, "dim")).get_si();
  if (dim < 0) throw IoError("negative dimension");
  if (j.contains("empty") && j.at("empty").get<bool>())
    return poly::Polyhedron::empty_set(dim);
  std::vector<poly::Constraint> cs;
  auto load = [&](const char* key, bool eq) {
    if (!j.contains(key)) return;
    const json& arr = j.at(key);
    if (!arr.is_array()) throw IoError(std::string("\"") + key + "\" must be an array");
    for (const auto& x : arr) {
      trop::AffineForm f = affine_from_json(x);
      if ((int)f.m.size() != dim) throw IoError("constraint slope length mismatch");
      cs.emplace_back(std::move(f), eq);
    }
  };
  load("ineqs", false);
  load("eqs", true);
  return poly::Polyhedron::from_constraints(dim, std::move(cs));
}

json complex_to_json(const cx::PolyhedralComplex& c) {
  json j;
  j["dim"] = c.ambient();
  json cells = json::array();
  for (size_t i = 0; i < c.size(); ++i) cells.push_back(poly_to_json(c.cell(i)));
  j["cells"] = std::move(cells);
  return j;
}

std::optional<cx::PolyhedralComplex> complex_from_json(const json& j, bool close_faces,
                                                       std::vector<std::string>& issues) {
  int dim = (int)need_int(need_field(j, "dim")).get_si();
  const json& arr = need_field(j, "cells");
  if (!arr.is_array()) throw IoError("\"cells\" must be an array");
  std::vector<poly::Polyhedron> cells;
  for (const auto& x : arr) {
    json cj = x;
    if (!cj.contains("dim")) cj["dim"] = dim;
    cells.push_back(poly_from_json(cj));
  }
  return cx::PolyhedralComplex::validated(dim, cells, close_faces, issues);
}

json abstract_to_json(const cx::AbstractComplex& a) {
  json j;
  j["V_f"] = a.finite_vertices();
  j["V_inf"] = a.infinite_vertices();
  json els = json::array();
  for (const auto& e : a.elements()) {
    json ej;
    ej["id"] = e.id;
    ej["zeta"] = std::vector<std::string>(e.zeta.begin(), e.zeta.end());
    ej["covers"] = e.covers;
    els.push_back(std::move(ej));
  }
  j["elements"] = std::move(els);
  return j;
}

std::optional<cx::AbstractComplex> abstract_from_json(const json& j,
                                                      std::vector<std::string>& issues) {
  std::vector<std::string> vf, vi;
  for (const auto& x : need_field(j, "V_f")) vf.push_back(x.get<std::string>());
  for (const auto& x : need_field(j, "V_inf")) vi.push_back(x.get<std::string>());
  std::vector<cx::AbstractElement> els;
  for (const auto& x : need_field(j, "elements")) {
    cx::AbstractElement e;
    e.id = need_field(x, "id").get<std::string>();
    for (const auto& z : need_field(x, "zeta")) e.zeta.insert(z.get<std::string>());
    if (x.contains("covers"))
      for (const auto& c : x.at("covers")) e.covers.push_back((size_t)need_int(c).get_ui());
    els.push_back(std::move(e));
  }
  return cx::AbstractComplex::make(vf, vi, std::move(els), issues);
}

json facewise_to_json(const pwa::FacewiseAffine& f) {
  json j;
  j["complex"] = complex_to_json(f.complex());
  json pieces = json::array();
  for (size_t m : f.complex().maximal()) {
    json pj;
    pj["cell"] = m;
    const auto& form = f.form_on(m);
    pj["m"] = zvec_to_json(form.m);
    pj["g"] = rat_str(form.g);
    pieces.push_back(std::move(pj));
  }
  j["pieces"] = std::move(pieces);
  return j;
}

std::optional<pwa::FacewiseAffine> facewise_from_json(const json& j, bool close_faces,
                                                      std::vector<std::string>& issues) {
  auto c = complex_from_json(need_field(j, "complex"), close_faces, issues);
  if (!c) return std::nullopt;
  auto shared = std::make_shared<cx::PolyhedralComplex>(std::move(*c));

  /* Pieces are matched to cells by key when given, else by index. */
  std::map<size_t, trop::AffineForm> pieces;
  for (const auto& x : need_field(j, "pieces")) {
    trop::AffineForm form(zvec_from_json(need_field(x, "m")), need_rat(need_field(x, "g")));
    size_t idx;
    if (x.contains("key")) {
      auto found = shared->find(x.at("key").get<std::string>());
      if (!found) throw IoError("piece names an unknown cell key");
      idx = *found;
    } else {
      idx = (size_t)need_int(need_field(x, "cell")).get_ui();
      if (idx >= shared->size()) throw IoError("piece cell index out of range");
    }
    pieces.emplace(idx, std::move(form));
  }
  return pwa::FacewiseAffine::make(shared, pieces, issues);
}

json expr_to_json(const trop::TropRationalExpr& e) {
  json j;
  j["expr"] = print(e);
  return j;
}

trop::TropRationalExpr expr_from_json(const json& j) {
  std::string text;
  int dim_hint = 0;
  if (j.is_string()) {
    text = j.get<std::string>();
  } else {
    text = need_field(j, "expr").get<std::string>();
    if (j.contains("dim")) dim_hint = (int)need_int(j.at("dim")).get_si();
  }
  try {
    return trop::parse_expr(text, dim_hint);
  } catch (const trop::ParseError& pe) {
    throw IoError(std::string("bad expression: ") + pe.what());
  }
}

json synthesis_to_json(const synth::SynthesisResult& r) {
  json j;
  j["expression"] = print(r.expression);
  j["lambda"] = r.lambda.get_str();
  j["arrangement_cells"] = r.completion.hat.complex.size();
  j["restricted_cells"] = r.completion.sigma_beta.size();
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw IoError("bad JSON in " + path + ": " + ex.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace tff::io
