#pragma once

/* Min-plus semifield over Q with infinity, integral Q-affine forms, and the
 * expression language (min / + / - over affine atoms).
 *
 * Conventions: addition is min with identity inf; multiplication is + with
 * identity 0.  Functions built from expressions are piecewise affine with
 * integer slopes and rational constants.
 */

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tff/rational.hpp"

namespace tff::trop {

struct TropValue {
  bool inf = false;  // additive identity
  Rat q = 0;         // meaningful iff !inf

  static TropValue infinity() { return TropValue{true, 0}; }
  static TropValue of(Rat v) { return TropValue{false, std::move(v)}; }

  bool operator==(const TropValue& o) const {
    return inf == o.inf && (inf || q == o.q);
  }
};

struct TropError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* Thrown when a construction exceeds a caller-supplied resource cap. */
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TropValue trop_add(const TropValue& a, const TropValue& b);  // min
TropValue trop_mul(const TropValue& a, const TropValue& b);  // +
TropValue trop_div(const TropValue& a, const TropValue& b);  // -, b finite
TropValue trop_pow(const TropValue& a, long n);              // n*a, n<0 needs a finite
std::string trop_str(const TropValue& v);

/* u -> <m,u> + g with m integral. */
struct AffineForm {
  ZVec m;
  Rat g = 0;

  AffineForm() = default;
  AffineForm(ZVec mm, Rat gg) : m(std::move(mm)), g(std::move(gg)) {}
  static AffineForm constant(int dim, Rat c) { return AffineForm(ZVec(dim, 0), std::move(c)); }

  int dim() const { return (int)m.size(); }
  Rat eval(const QVec& u) const { return dot(m, u) + g; }
  bool operator==(const AffineForm& o) const { return m == o.m && g == o.g; }
};

AffineForm af_add(const AffineForm& a, const AffineForm& b);
AffineForm af_sub(const AffineForm& a, const AffineForm& b);
AffineForm af_scale(const AffineForm& a, const Int& c);
bool af_less(const AffineForm& a, const AffineForm& b);  // slope lex, then constant

/* Certificate-side affine form; slope may be rational.  Appears in convexity
 * certificates where an integral witness need not exist. */
struct QAffineForm {
  QVec m;
  Rat g = 0;

  QAffineForm() = default;
  QAffineForm(QVec mm, Rat gg) : m(std::move(mm)), g(std::move(gg)) {}
  explicit QAffineForm(const AffineForm& a) : m(to_q(a.m)), g(a.g) {}

  int dim() const { return (int)m.size(); }
  Rat eval(const QVec& u) const { return dot(m, u) + g; }
  bool is_integral() const;
  bool operator==(const QAffineForm& o) const { return m == o.m && g == o.g; }
};

/* Expression tree.  Sum coefficients are +1/-1 so every tree prints within
 * the surface grammar; scalar powers distribute into the tree instead. */
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Affine, Inf, Min, Sum };
  Kind kind = Kind::Affine;
  AffineForm affine;                              // Affine
  std::vector<ExprPtr> kids;                      // Min (>= 2 children)
  std::vector<std::pair<int, ExprPtr>> terms;     // Sum of sign*child
  int dim = 0;
};

ExprPtr expr_affine(AffineForm f);
ExprPtr expr_const(int dim, Rat c);
ExprPtr expr_inf(int dim);
ExprPtr expr_var(int dim, int i);                 // x_{i+1}
ExprPtr expr_min(std::vector<ExprPtr> kids);
ExprPtr expr_sum(const ExprPtr& a, const ExprPtr& b);
ExprPtr expr_sub_affine(const ExprPtr& a, const AffineForm& b);  // a - affine
ExprPtr expr_neg_affine_of(const AffineForm& b);                  // -b as leaf

/* n-fold tropical power applied as n*E; n >= 0, distributes over min. */
ExprPtr expr_pow_nonneg(const ExprPtr& a, long n);

/* Quotient p - q; q == nullptr means quotient by the multiplicative
 * identity, i.e. the expression is p itself. */
struct TropRationalExpr {
  ExprPtr num;
  ExprPtr den;  // may be null

  int dim() const { return num ? num->dim : 0; }
};

TropRationalExpr make_ratexpr(ExprPtr num, ExprPtr den = nullptr);

TropValue eval(const ExprPtr& e, const QVec& u);
/* Both parts must be defined; den, when present, must be finite at u. */
Rat eval(const TropRationalExpr& e, const QVec& u);

std::string print(const AffineForm& f);
std::string print(const QAffineForm& f);
std::string print(const ExprPtr& e);
std::string print(const TropRationalExpr& e);

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l), col(c) {}
};

/* dim_hint <= 0 means infer from the largest variable index used. */
TropRationalExpr parse_expr(const std::string& text, int dim_hint = 0);

}  // namespace tff::trop
