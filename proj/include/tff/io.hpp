#pragma once

/* JSON serialization.  Rationals travel as "p/q" strings (plain integers
 * allowed on input), slopes as integer arrays.  Output key order is fixed so
 * equal objects serialize to equal bytes. */

#include <string>
#include <vector>

#include "json.hpp"

#include "tff/abstract.hpp"
#include "tff/complexes.hpp"
#include "tff/pwa.hpp"
#include "tff/synthesis.hpp"

namespace tff::io {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);
json qvec_to_json(const QVec& v);
QVec qvec_from_json(const json& j);
json zvec_to_json(const ZVec& v);
ZVec zvec_from_json(const json& j);

json affine_to_json(const trop::AffineForm& f);
trop::AffineForm affine_from_json(const json& j);

json poly_to_json(const poly::Polyhedron& p);
poly::Polyhedron poly_from_json(const json& j);

json complex_to_json(const cx::PolyhedralComplex& c);
/* close_faces adds missing faces instead of reporting them. */
std::optional<cx::PolyhedralComplex> complex_from_json(const json& j, bool close_faces,
                                                       std::vector<std::string>& issues);

json abstract_to_json(const cx::AbstractComplex& a);
std::optional<cx::AbstractComplex> abstract_from_json(const json& j,
                                                      std::vector<std::string>& issues);

json facewise_to_json(const pwa::FacewiseAffine& f);
std::optional<pwa::FacewiseAffine> facewise_from_json(const json& j, bool close_faces,
                                                      std::vector<std::string>& issues);

json expr_to_json(const trop::TropRationalExpr& e);
trop::TropRationalExpr expr_from_json(const json& j);

json synthesis_to_json(const synth::SynthesisResult& r);

json read_json_file(const std::string& path);       // throws IoError
void write_json_file(const std::string& path, const json& j);

}  // namespace tff::io
