#pragma once

/* Exact polyhedra over Q.  Both representations are available: constraints
 * (integral slopes, rational constants) and generators (vertices, primitive
 * rays, lineality).  Conversion both ways runs the double description method
 * on the homogenization cone; the generator side is canonical, so polyhedra
 * compare by value independently of how they were built.
 */

#include <optional>
#include <string>
#include <vector>

#include "tff/trop_core.hpp"

namespace tff::poly {

using trop::AffineForm;

struct Constraint {
  AffineForm f;
  bool eq = false;  // f(u) == 0 instead of f(u) >= 0

  Constraint() = default;
  Constraint(AffineForm ff, bool e = false) : f(std::move(ff)), eq(e) {}
};

/* Scale a rational-slope inequality to the integral convention. */
Constraint make_constraint(const QVec& slope, const Rat& g, bool eq = false);

struct VRep {
  std::vector<QVec> vertices;   // coset representatives modulo lineality
  std::vector<ZVec> rays;       // primitive, oriented
  std::vector<ZVec> lineality;  // canonical reduced basis
  bool empty = true;
};

struct MinHRep {
  std::vector<AffineForm> ineqs;  // irredundant facets
  std::vector<AffineForm> eqs;    // affine hull
};

class Polyhedron {
 public:
  Polyhedron() = default;

  static Polyhedron full(int dim);
  static Polyhedron empty_set(int dim);
  static Polyhedron from_constraints(int dim, std::vector<Constraint> cs);
  static Polyhedron from_generators(int dim, const std::vector<QVec>& vertices,
                                    const std::vector<QVec>& rays,
                                    const std::vector<QVec>& lines);
  /* When both sides are already known consistent (used by face enumeration). */
  static Polyhedron from_known(int dim, std::vector<Constraint> cs, VRep vr);

  int ambient_dim() const { return ambient_; }
  const std::vector<Constraint>& constraints() const { return cons_; }
  const VRep& vrep() const;
  const MinHRep& min_hrep() const;

  bool empty() const { return !vrep().empty ? false : true; }
  int dim() const;  // affine dimension; -1 when empty
  bool is_bounded() const;
  bool is_cone() const;  // 0 is a vertex and every vertex is 0

  bool contains(const QVec& point) const;
  bool contains_ray(const ZVec& dir) const;  // dir in the recession cone
  bool contains_line(const ZVec& dir) const;
  bool contains(const Polyhedron& other) const;
  bool same_set(const Polyhedron& other) const;

  Polyhedron intersect(const Polyhedron& o) const;
  Polyhedron intersect(const Constraint& c) const;
  Polyhedron recession_cone() const;  // pre: nonempty
  QVec relint_point() const;          // pre: nonempty

  /* All nonempty faces, this polyhedron included, sorted by identity key. */
  std::vector<Polyhedron> faces() const;
  std::vector<Polyhedron> facets() const;  // codimension 1 in this polyhedron
  /* Smallest face containing the given subset; sub must be contained here. */
  Polyhedron minimal_face_containing(const Polyhedron& sub) const;
  bool has_face(const Polyhedron& candidate) const;

  /* Canonical identity string; equal strings == equal sets. */
  const std::string& key() const;

 private:
  int ambient_ = 0;
  std::vector<Constraint> cons_;
  mutable std::optional<VRep> vrep_;
  mutable std::optional<MinHRep> min_hrep_;
  mutable std::optional<std::string> key_;
  mutable std::optional<int> dim_;

  void compute_vrep() const;
};

/* Extreme structure of the cone {y : a.y >= 0 (or == 0)}. */
struct ConeGens {
  std::vector<ZVec> rays;
  std::vector<ZVec> lines;
};
ConeGens dd_cone(int dim, const std::vector<std::pair<QVec, bool>>& constraints);

int q_rank(const std::vector<QVec>& vecs);

/* Image of a polyhedron under u -> A u + b (rows of A are rational). */
Polyhedron affine_image(const Polyhedron& p, const std::vector<QVec>& A, const QVec& b);
/* Preimage {u : A u + b in q}. */
Polyhedron affine_preimage(const Polyhedron& q, const std::vector<QVec>& A, const QVec& b,
                           int source_dim);

}  // namespace tff::poly
