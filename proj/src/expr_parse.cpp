#include <cctype>
#include <vector>

#include "tff/trop_core.hpp"

namespace tff::trop {

namespace {

enum class Tok { Num, Var, Min, LParen, RParen, Comma, Plus, Minus, Star, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

struct Lexer {
  const std::string& s;
  size_t i = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& str) : s(str) {}

  void bump(char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  Token next() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) bump(s[i]);
    int l = line, c = col;
    if (i >= s.size()) return {Tok::End, "", l, c};
    char ch = s[i];
    if (std::isdigit((unsigned char)ch)) {
      std::string t;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) {
        t += s[i];
        bump(s[i]);
      }
      if (i < s.size() && s[i] == '/') {
        t += '/';
        bump('/');
        if (i >= s.size() || !std::isdigit((unsigned char)s[i]))
          throw ParseError("expected digits after '/'", line, col);
        while (i < s.size() && std::isdigit((unsigned char)s[i])) {
          t += s[i];
          bump(s[i]);
        }
      }
      return {Tok::Num, t, l, c};
    }
    if (ch == 'x' && i + 1 < s.size() && std::isdigit((unsigned char)s[i + 1])) {
      bump('x');
      std::string t;
      while (i < s.size() && std::isdigit((unsigned char)s[i])) {
        t += s[i];
        bump(s[i]);
      }
      return {Tok::Var, t, l, c};
    }
    if (s.compare(i, 3, "min") == 0) {
      bump('m');
      bump('i');
      bump('n');
      return {Tok::Min, "min", l, c};
    }
    if (s.compare(i, 3, "inf") == 0) {
      bump('i');
      bump('n');
      bump('f');
      throw ParseError("infinity literal is not part of the expression language", l, c);
    }
    switch (ch) {
      case '(': bump(ch); return {Tok::LParen, "(", l, c};
      case ')': bump(ch); return {Tok::RParen, ")", l, c};
      case ',': bump(ch); return {Tok::Comma, ",", l, c};
      case '+': bump(ch); return {Tok::Plus, "+", l, c};
      case '-': bump(ch); return {Tok::Minus, "-", l, c};
      case '*': bump(ch); return {Tok::Star, "*", l, c};
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  int dim;

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.col);
  }

  Rat number(const Token& t) {
    auto q = parse_rat(t.text);
    if (!q) fail("malformed rational literal", t);
    return *q;
  }

  int var_index(const Token& t) {
    long idx = 0;
    for (char ch : t.text) {
      idx = idx * 10 + (ch - '0');
      if (idx > 1000000) fail("variable index too large", t);
    }
    if (idx < 1 || idx > dim) fail("variable index out of range", t);
    return (int)idx - 1;
  }

  /* atom := min(...) | (additive) | rational ['*' var] | var */
  ExprPtr atom() {
    Token t = take();
    switch (t.kind) {
      case Tok::Min: {
        Token lp = take();
        if (lp.kind != Tok::LParen) fail("expected '(' after min", lp);
        std::vector<ExprPtr> kids;
        kids.push_back(additive());
        while (peek().kind == Tok::Comma) {
          take();
          kids.push_back(additive());
        }
        Token rp = take();
        if (rp.kind != Tok::RParen) fail("expected ')' or ','", rp);
        if (kids.size() < 2) fail("min needs at least two arguments", rp);
        return expr_min(std::move(kids));
      }
      case Tok::LParen: {
        ExprPtr e = additive();
        Token rp = take();
        if (rp.kind != Tok::RParen) fail("expected ')'", rp);
        return e;
      }
      case Tok::Num: {
        Rat c = number(t);
        if (peek().kind == Tok::Star) {
          take();
          Token v = take();
          if (v.kind != Tok::Var) fail("expected variable after '*'", v);
          if (c.get_den() != 1) fail("variable coefficients must be integers", t);
          ZVec m(dim, 0);
          m[var_index(v)] = c.get_num();
          return expr_affine(AffineForm(std::move(m), 0));
        }
        return expr_const(dim, c);
      }
      case Tok::Var:
        return expr_var(dim, var_index(t));
      default:
        fail("expected expression", t);
    }
  }

  /* additive := ['-'] atom (('+'|'-') atom)*, as a pointwise signed sum. */
  ExprPtr additive_signed(std::vector<std::pair<int, ExprPtr>>& out) {
    int sign = 1;
    if (peek().kind == Tok::Minus) {
      take();
      sign = -1;
    }
    out.emplace_back(sign, atom());
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      int s = take().kind == Tok::Plus ? 1 : -1;
      out.emplace_back(s, atom());
    }
    return nullptr;
  }

  ExprPtr additive() {
    std::vector<std::pair<int, ExprPtr>> terms;
    additive_signed(terms);
    /* Inside a subexpression a negated composite cannot be expressed as a
     * TropExpr; fold affine negations, reject composite ones. */
    ExprPtr acc = nullptr;
    AffineForm offset = AffineForm::constant(dim, 0);
    for (auto& [s, t] : terms) {
      if (t->kind == Expr::Kind::Affine) {
        offset = s > 0 ? af_add(offset, t->affine) : af_sub(offset, t->affine);
        continue;
      }
      if (s < 0)
        throw ParseError("a '-' before a min-expression is only allowed at the top level",
                         peek().line, peek().col);
      acc = acc ? expr_sum(acc, t) : t;
    }
    if (!acc) return expr_affine(std::move(offset));
    if (!is_zero(offset.m) || offset.g != 0)
      acc = expr_sum(acc, expr_affine(std::move(offset)));
    return acc;
  }

  TropRationalExpr top() {
    std::vector<std::pair<int, ExprPtr>> terms;
    additive_signed(terms);
    Token t = peek();
    if (t.kind != Tok::End) fail("trailing input", t);
    AffineForm offset = AffineForm::constant(dim, 0);
    ExprPtr num = nullptr, den = nullptr;
    for (auto& [s, e] : terms) {
      if (e->kind == Expr::Kind::Affine) {
        offset = s > 0 ? af_add(offset, e->affine) : af_sub(offset, e->affine);
        continue;
      }
      if (s > 0)
        num = num ? expr_sum(num, e) : e;
      else
        den = den ? expr_sum(den, e) : e;
    }
    if (!num)
      num = expr_affine(std::move(offset));
    else if (!is_zero(offset.m) || offset.g != 0)
      num = expr_sum(num, expr_affine(std::move(offset)));
    return make_ratexpr(std::move(num), std::move(den));
  }
};

int scan_dim(const std::string& text) {
  int n = 0;
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] != 'x' || !std::isdigit((unsigned char)text[i + 1])) continue;
    if (i > 0 && (std::isalnum((unsigned char)text[i - 1]) || text[i - 1] == '_')) continue;
    long idx = 0;
    size_t j = i + 1;
    while (j < text.size() && std::isdigit((unsigned char)text[j]) && idx <= 1000000)
      idx = idx * 10 + (text[j++] - '0');
    n = std::max(n, (int)std::min(idx, 1000001L));
  }
  return n;
}

}  // namespace

TropRationalExpr parse_expr(const std::string& text, int dim_hint) {
  int dim = std::max(dim_hint, scan_dim(text));
  Lexer lex(text);
  Parser p;
  p.dim = dim;
  for (;;) {
    Token t = lex.next();
    bool end = t.kind == Tok::End;
    p.toks.push_back(std::move(t));
    if (end) break;
  }
  return p.top();
}

}  // namespace tff::trop
