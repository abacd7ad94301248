#pragma once

/* Exact arithmetic used across the library.  All geometry is over Q with
 * integer slope data; no floating point anywhere in the compute path. */

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tff {

using Int = mpz_class;
using Rat = mpq_class;

using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Int vec_gcd(const ZVec& v);            // gcd of entries, 0 for the zero vector
Int denom_lcm(const QVec& v);

/* Divide by the gcd.  Orientation is preserved: a ray and its negative are
 * different objects.  Returns the zero vector unchanged. */
ZVec primitive(ZVec v);

/* Scale a rational vector to a primitive integer one (same ray). */
ZVec primitive(const QVec& v);

/* Primitive and, additionally, first nonzero entry positive.  For line
 * directions, where both orientations describe the same set. */
ZVec primitive_line(ZVec v);
ZVec primitive_line(const QVec& v);

bool is_zero(const ZVec& v);
bool is_zero(const QVec& v);

QVec to_q(const ZVec& v);

Rat dot(const ZVec& a, const QVec& b);
Rat dot(const QVec& a, const QVec& b);
Int dot(const ZVec& a, const ZVec& b);

QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const QVec& a, const Rat& c);

/* "a/b" or "a"; returns nullopt on malformed input or zero denominator. */
std::optional<Rat> parse_rat(const std::string& s);
std::string rat_str(const Rat& q);     // canonical "a/b" or "a"

/* Total order key for deterministic sorting of vectors. */
int compare(const QVec& a, const QVec& b);
int compare(const ZVec& a, const ZVec& b);

}  // namespace tff
