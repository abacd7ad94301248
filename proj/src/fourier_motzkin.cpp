#include "tff/fm.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace tff::poly {

namespace {

struct Step {
  int var;
  std::vector<LinCons> lowers, uppers;  // a[var] > 0 resp. < 0
};

struct Subst {
  int var;
  QVec coef;  // x_var = -(b + coef.x) / denom, coef[var] == 0
  Rat b;
  Rat denom;
};

/* Constant constraints are decided here; returns false on contradiction. */
bool sift(std::vector<LinCons>& cons) {
  std::vector<LinCons> keep;
  for (auto& c : cons) {
    if (is_zero(c.a)) {
      if (c.eq ? c.b != 0 : (c.strict ? c.b <= 0 : c.b < 0)) return false;
      continue;
    }
    keep.push_back(std::move(c));
  }
  cons = std::move(keep);
  return true;
}

/* Same-direction dedup: scale each inequality to a primitive integer normal,
 * keep only the tightest of the weak and strict offsets. */
void dedup(std::vector<LinCons>& cons) {
  struct Best {
    bool has_weak = false, has_strict = false;
    Rat bw, bs;
  };
  std::map<std::string, std::pair<QVec, Best>> table;
  std::vector<LinCons> eqs;
  for (auto& c : cons) {
    if (c.eq) {
      eqs.push_back(std::move(c));
      continue;
    }
    ZVec p = primitive(c.a);
    Rat sc;  // positive: p = a * sc
    for (size_t i = 0; i < c.a.size(); ++i)
      if (c.a[i] != 0) {
        sc = Rat(p[i]) / c.a[i];
        break;
      }
    Rat b = c.b * sc;
    std::string k;
    for (const auto& x : p) k += x.get_str() + ",";
    auto& slot = table[k];
    if (slot.first.empty()) slot.first = to_q(p);
    Best& be = slot.second;
    if (c.strict) {
      if (!be.has_strict || b < be.bs) be.bs = b, be.has_strict = true;
    } else {
      if (!be.has_weak || b < be.bw) be.bw = b, be.has_weak = true;
    }
  }
  cons = std::move(eqs);
  for (auto& [k, slot] : table) {
    Best& be = slot.second;
    LinCons c;
    c.a = std::move(slot.first);
    if (be.has_strict && (!be.has_weak || be.bs <= be.bw)) {
      c.b = be.bs;
      c.strict = true;
    } else {
      c.b = be.bw;
      c.strict = false;
    }
    cons.push_back(std::move(c));
  }
}

Rat eval_bound(const LinCons& c, int var, const QVec& x) {
  Rat rest = c.b;
  for (size_t k = 0; k < c.a.size(); ++k)
    if ((int)k != var) rest += c.a[k] * x[k];
  return -rest / c.a[var];
}

}  // namespace

FMResult fm_feasible(int nvars, std::vector<LinCons> cons) {
  for (const auto& c : cons)
    if ((int)c.a.size() != nvars) throw std::invalid_argument("fm_feasible: dim mismatch");

  std::vector<Subst> substs;
  std::vector<Step> steps;

  if (!sift(cons)) return {};

  // Equalities go first, by substitution.
  for (bool again = true; again;) {
    again = false;
    for (size_t i = 0; i < cons.size(); ++i) {
      if (!cons[i].eq) continue;
      LinCons e = cons[i];
      cons.erase(cons.begin() + i);
      int j = 0;
      while (e.a[j] == 0) ++j;
      Subst s;
      s.var = j;
      s.coef = e.a;
      s.coef[j] = 0;
      s.b = e.b;
      s.denom = e.a[j];
      for (auto& c : cons) {
        if (c.a[j] == 0) continue;
        Rat f = c.a[j] / s.denom;
        for (int k = 0; k < nvars; ++k) c.a[k] -= f * e.a[k];
        c.b -= f * e.b;
        c.a[j] = 0;
      }
      substs.push_back(std::move(s));
      if (!sift(cons)) return {};
      again = true;
      break;
    }
  }

  while (true) {
    dedup(cons);
    if (!sift(cons)) return {};
    std::vector<int> npos(nvars, 0), nneg(nvars, 0);
    for (const auto& c : cons)
      for (int j = 0; j < nvars; ++j) {
        if (c.a[j] > 0) ++npos[j];
        else if (c.a[j] < 0) ++nneg[j];
      }
    int var = -1;
    long best = -1;
    for (int j = 0; j < nvars; ++j) {
      if (npos[j] + nneg[j] == 0) continue;
      long score = (long)npos[j] * nneg[j];
      if (var == -1 || score < best) {
        var = j;
        best = score;
      }
    }
    if (var == -1) break;
    Step st;
    st.var = var;
    std::vector<LinCons> rest;
    for (auto& c : cons) {
      if (c.a[var] > 0) st.lowers.push_back(std::move(c));
      else if (c.a[var] < 0) st.uppers.push_back(std::move(c));
      else rest.push_back(std::move(c));
    }
    for (const auto& p : st.lowers)
      for (const auto& n : st.uppers) {
        LinCons c;
        c.a.assign(nvars, Rat(0));
        Rat mp = -n.a[var], mn = p.a[var];  // both positive
        for (int k = 0; k < nvars; ++k) c.a[k] = mp * p.a[k] + mn * n.a[k];
        c.b = mp * p.b + mn * n.b;
        c.strict = p.strict || n.strict;
        rest.push_back(std::move(c));
      }
    cons = std::move(rest);
    steps.push_back(std::move(st));
    if (!sift(cons)) return {};
  }

  FMResult res;
  res.feasible = true;
  res.witness.assign(nvars, Rat(0));
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    bool has_l = false, has_u = false, l_strict = false, u_strict = false;
    Rat l, u;
    for (const auto& c : it->lowers) {
      Rat v = eval_bound(c, it->var, res.witness);
      if (!has_l || v > l || (v == l && c.strict)) {
        if (!has_l || v > l) l_strict = c.strict;
        else l_strict = l_strict || c.strict;
        l = v;
        has_l = true;
      }
    }
    for (const auto& c : it->uppers) {
      Rat v = eval_bound(c, it->var, res.witness);
      if (!has_u || v < u || (v == u && c.strict)) {
        if (!has_u || v < u) u_strict = c.strict;
        else u_strict = u_strict || c.strict;
        u = v;
        has_u = true;
      }
    }
    Rat x;
    if (has_l && has_u) {
      if (l == u) {
        if (l_strict || u_strict) throw std::logic_error("fm witness: empty pinch");
        x = l;
      } else {
        x = (l + u) / 2;
      }
    } else if (has_l) {
      x = l_strict ? l + 1 : l;
    } else if (has_u) {
      x = u_strict ? u - 1 : u;
    }
    res.witness[it->var] = x;
  }
  for (auto it = substs.rbegin(); it != substs.rend(); ++it) {
    Rat v = it->b;
    for (int k = 0; k < nvars; ++k) v += it->coef[k] * res.witness[k];
    res.witness[it->var] = -v / it->denom;
  }
  return res;
}

}  // namespace tff::poly
