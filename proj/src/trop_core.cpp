#include "tff/trop_core.hpp"

#include <algorithm>
#include <sstream>

namespace tff::trop {

TropValue trop_add(const TropValue& a, const TropValue& b) {
  if (a.inf) return b;
  if (b.inf) return a;
  return TropValue::of(std::min(a.q, b.q));
}

TropValue trop_mul(const TropValue& a, const TropValue& b) {
  if (a.inf || b.inf) return TropValue::infinity();
  return TropValue::of(a.q + b.q);
}

TropValue trop_div(const TropValue& a, const TropValue& b) {
  if (b.inf) throw TropError("tropical division by infinity");
  if (a.inf) return TropValue::infinity();
  return TropValue::of(a.q - b.q);
}

TropValue trop_pow(const TropValue& a, long n) {
  if (a.inf) {
    if (n < 0) throw TropError("negative tropical power of infinity");
    if (n == 0) return TropValue::of(0);
    return TropValue::infinity();
  }
  return TropValue::of(a.q * Rat(n));
}

std::string trop_str(const TropValue& v) {
  return v.inf ? "inf" : rat_str(v.q);
}

AffineForm af_add(const AffineForm& a, const AffineForm& b) {
  if (a.dim() != b.dim()) throw TropError("affine form dimension mismatch");
  AffineForm r = a;
  for (int i = 0; i < r.dim(); ++i) r.m[i] += b.m[i];
  r.g += b.g;
  return r;
}

AffineForm af_sub(const AffineForm& a, const AffineForm& b) {
  if (a.dim() != b.dim()) throw TropError("affine form dimension mismatch");
  AffineForm r = a;
  for (int i = 0; i < r.dim(); ++i) r.m[i] -= b.m[i];
  r.g -= b.g;
  return r;
}

AffineForm af_scale(const AffineForm& a, const Int& c) {
  AffineForm r = a;
  for (Int& x : r.m) x *= c;
  r.g *= Rat(c);
  return r;
}

bool af_less(const AffineForm& a, const AffineForm& b) {
  int c = compare(a.m, b.m);
  if (c != 0) return c < 0;
  return a.g < b.g;
}

bool QAffineForm::is_integral() const {
  for (const Rat& c : m)
    if (c.get_den() != 1) return false;
  return true;
}

ExprPtr expr_affine(AffineForm f) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Affine;
  e->dim = f.dim();
  e->affine = std::move(f);
  return e;
}

ExprPtr expr_const(int dim, Rat c) { return expr_affine(AffineForm::constant(dim, std::move(c))); }

ExprPtr expr_inf(int dim) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Inf;
  e->dim = dim;
  return e;
}

ExprPtr expr_var(int dim, int i) {
  if (i < 0 || i >= dim) throw TropError("variable index out of range");
  ZVec m(dim, 0);
  m[i] = 1;
  return expr_affine(AffineForm(std::move(m), 0));
}

ExprPtr expr_min(std::vector<ExprPtr> kids) {
  if (kids.empty()) throw TropError("min needs arguments");
  std::vector<ExprPtr> flat;
  for (auto& k : kids) {
    if (!k) throw TropError("null expression");
    if (k->kind == Expr::Kind::Inf) continue;  // identity of min
    if (k->kind == Expr::Kind::Min)
      flat.insert(flat.end(), k->kids.begin(), k->kids.end());
    else
      flat.push_back(k);
  }
  if (flat.empty()) return expr_inf(kids[0]->dim);
  if (flat.size() == 1) return flat[0];
  int dim = flat[0]->dim;
  for (auto& k : flat)
    if (k->dim != dim) throw TropError("expression dimension mismatch");
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Min;
  e->dim = dim;
  e->kids = std::move(flat);
  return e;
}

static ExprPtr sum_node(std::vector<std::pair<int, ExprPtr>> terms, AffineForm offset) {
  /* Collapse affine parts and flatten nested sums; keep %pm1 coefficients. */
  std::vector<std::pair<int, ExprPtr>> flat;
  for (auto& [s, t] : terms) {
    if (t->kind == Expr::Kind::Inf) {
      if (s < 0) throw TropError("tropical division by infinity");
      return expr_inf(t->dim);
    }
    if (t->kind == Expr::Kind::Affine) {
      offset = s > 0 ? af_add(offset, t->affine) : af_sub(offset, t->affine);
    } else if (t->kind == Expr::Kind::Sum) {
      for (auto& [s2, t2] : t->terms) flat.emplace_back(s * s2, t2);
    } else {
      flat.emplace_back(s, t);
    }
  }
  if (flat.empty()) return expr_affine(std::move(offset));
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Sum;
  e->dim = offset.dim();
  e->terms = std::move(flat);
  if (!is_zero(offset.m) || offset.g != 0)
    e->terms.emplace_back(1, expr_affine(std::move(offset)));
  if (e->terms.size() == 1 && e->terms[0].first == 1) return e->terms[0].second;
  return e;
}

ExprPtr expr_sum(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) throw TropError("null expression");
  if (a->dim != b->dim) throw TropError("expression dimension mismatch");
  return sum_node({{1, a}, {1, b}}, AffineForm::constant(a->dim, 0));
}

ExprPtr expr_sub_affine(const ExprPtr& a, const AffineForm& b) {
  return sum_node({{1, a}}, af_scale(b, -1));
}

ExprPtr expr_neg_affine_of(const AffineForm& b) { return expr_affine(af_scale(b, -1)); }

ExprPtr expr_pow_nonneg(const ExprPtr& a, long n) {
  if (!a) throw TropError("null expression");
  if (n < 0) throw TropError("negative power: use a tropical quotient");
  if (n == 0) return expr_const(a->dim, 0);
  switch (a->kind) {
    case Expr::Kind::Inf:
      return a;
    case Expr::Kind::Affine:
      return expr_affine(af_scale(a->affine, Int(n)));
    case Expr::Kind::Min: {
      std::vector<ExprPtr> kids;
      kids.reserve(a->kids.size());
      for (auto& k : a->kids) kids.push_back(expr_pow_nonneg(k, n));
      return expr_min(std::move(kids));
    }
    case Expr::Kind::Sum: {
      std::vector<std::pair<int, ExprPtr>> terms;
      for (auto& [s, t] : a->terms)
        for (long i = 0; i < n; ++i) terms.emplace_back(s, t);
      return sum_node(std::move(terms), AffineForm::constant(a->dim, 0));
    }
  }
  throw TropError("unreachable");
}

TropRationalExpr make_ratexpr(ExprPtr num, ExprPtr den) {
  if (!num) throw TropError("null numerator");
  if (den && den->dim != num->dim) throw TropError("expression dimension mismatch");
  return TropRationalExpr{std::move(num), std::move(den)};
}

TropValue eval(const ExprPtr& e, const QVec& u) {
  if (!e) throw TropError("null expression");
  if ((int)u.size() != e->dim) throw TropError("point dimension mismatch");
  switch (e->kind) {
    case Expr::Kind::Inf:
      return TropValue::infinity();
    case Expr::Kind::Affine:
      return TropValue::of(e->affine.eval(u));
    case Expr::Kind::Min: {
      TropValue v = TropValue::infinity();
      for (auto& k : e->kids) v = trop_add(v, eval(k, u));
      return v;
    }
    case Expr::Kind::Sum: {
      TropValue v = TropValue::of(0);
      for (auto& [s, t] : e->terms) {
        TropValue w = eval(t, u);
        v = s > 0 ? trop_mul(v, w) : trop_div(v, w);
      }
      return v;
    }
  }
  throw TropError("unreachable");
}

Rat eval(const TropRationalExpr& e, const QVec& u) {
  TropValue p = eval(e.num, u);
  if (e.den) {
    TropValue q = eval(e.den, u);
    if (q.inf) throw TropError("denominator is infinite at the point");
    if (p.inf) throw TropError("numerator is infinite at the point");
    return p.q - q.q;
  }
  if (p.inf) throw TropError("expression is infinite at the point");
  return p.q;
}

std::string print(const AffineForm& f) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < f.dim(); ++i) {
    const Int& c = f.m[i];
    if (c == 0) continue;
    if (first) {
      if (c == -1)
        os << "-";
      else if (c != 1)
        os << c.get_str() << "*";
      first = false;
    } else {
      os << (c > 0 ? " + " : " - ");
      Int a = abs(c);
      if (a != 1) os << a.get_str() << "*";
    }
    os << "x" << (i + 1);
  }
  if (first) return rat_str(f.g);
  if (f.g != 0) {
    os << (f.g > 0 ? " + " : " - ");
    Rat a = abs(f.g);
    os << rat_str(a);
  }
  return os.str();
}

std::string print(const QAffineForm& f) {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < f.dim(); ++i) {
    const Rat& c = f.m[i];
    if (c == 0) continue;
    if (first) {
      if (c == -1)
        os << "-";
      else if (c != 1)
        os << rat_str(c) << "*";
      first = false;
    } else {
      os << (c > 0 ? " + " : " - ");
      Rat a = abs(c);
      if (a != 1) os << rat_str(a) << "*";
    }
    os << "x" << (i + 1);
  }
  if (first) return rat_str(f.g);
  if (f.g != 0) {
    os << (f.g > 0 ? " + " : " - ");
    Rat a = abs(f.g);
    os << rat_str(a);
  }
  return os.str();
}

namespace {

/* Sort key for canonical printing: affine leaves by slope then constant,
 * composite children by their printed text. */
struct ChildKey {
  bool composite;
  const Expr* e;
  std::string text;
};

std::string print_node(const ExprPtr& e, bool parenthesize_sum);

std::string print_min(const Expr& e) {
  std::vector<ChildKey> keys;
  keys.reserve(e.kids.size());
  for (auto& k : e.kids)
    keys.push_back(ChildKey{k->kind != Expr::Kind::Affine, k.get(), print_node(k, false)});
  std::sort(keys.begin(), keys.end(), [](const ChildKey& a, const ChildKey& b) {
    if (a.composite != b.composite) return !a.composite;
    if (!a.composite) return af_less(a.e->affine, b.e->affine);
    return a.text < b.text;
  });
  std::string s = "min(";
  for (size_t i = 0; i < keys.size(); ++i) {
    if (i) s += ", ";
    s += keys[i].text;
  }
  s += ")";
  return s;
}

std::string print_node(const ExprPtr& e, bool parenthesize_sum) {
  switch (e->kind) {
    case Expr::Kind::Inf:
      return "inf";
    case Expr::Kind::Affine:
      return print(e->affine);
    case Expr::Kind::Min:
      return print_min(*e);
    case Expr::Kind::Sum: {
      std::string s;
      bool first = true;
      for (auto& [sg, t] : e->terms) {
        std::string ts = print_node(t, true);
        if (first) {
          if (sg < 0) s += "0 - " + ts;
          else s += ts;
          first = false;
        } else {
          s += sg > 0 ? " + " : " - ";
          s += ts;
        }
      }
      if (parenthesize_sum) return "(" + s + ")";
      return s;
    }
  }
  throw TropError("unreachable");
}

}  // namespace

std::string print(const ExprPtr& e) {
  if (!e) throw TropError("null expression");
  return print_node(e, false);
}

std::string print(const TropRationalExpr& e) {
  std::string s = print(e.num);
  if (!e.den) return s;
  bool simple = e.den->kind == Expr::Kind::Affine || e.den->kind == Expr::Kind::Min;
  std::string d = print(e.den);
  return s + " - " + (simple ? d : "(" + d + ")");
}

}  // namespace tff::trop
