#include "tff/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace tff::poly {

namespace {

/* Row HNF in place; U (if given) receives the same row operations so that
 * U * input == result including zero rows.  Returns number of pivot rows. */
size_t hnf_in_place(std::vector<ZVec>& m, int ncols, std::vector<ZVec>* U) {
  size_t r = 0;
  for (int c = 0; c < ncols && r < m.size(); ++c) {
    while (true) {
      size_t best = m.size();
      for (size_t i = r; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        if (best == m.size()) {
          best = i;
          continue;
        }
        Int ai = abs(m[i][c]), ab = abs(m[best][c]);
        if (ai < ab) best = i;
      }
      if (best == m.size()) break;
      std::swap(m[r], m[best]);
      if (U) std::swap((*U)[r], (*U)[best]);
      bool cleared = true;
      for (size_t i = r + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
        for (int j = 0; j < ncols; ++j) m[i][j] -= q * m[r][j];
        if (U)
          for (size_t j = 0; j < (*U)[i].size(); ++j) (*U)[i][j] -= q * (*U)[r][j];
        if (m[i][c] != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (m[r][c] == 0) continue;
    if (m[r][c] < 0) {
      for (auto& x : m[r]) x = -x;
      if (U)
        for (auto& x : (*U)[r]) x = -x;
    }
    for (size_t i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
      if (q == 0) continue;
      for (int j = 0; j < ncols; ++j) m[i][j] -= q * m[r][j];
      if (U)
        for (size_t j = 0; j < (*U)[i].size(); ++j) (*U)[i][j] -= q * (*U)[r][j];
    }
    ++r;
  }
  return r;
}

}  // namespace

std::vector<ZVec> hnf_rows(std::vector<ZVec> rows, int ncols) {
  for (const auto& r : rows)
    if ((int)r.size() != ncols) throw std::invalid_argument("hnf_rows: ragged input");
  size_t rank = hnf_in_place(rows, ncols, nullptr);
  rows.resize(rank);
  return rows;
}

Lattice lattice_from_generators(int ambient, const std::vector<ZVec>& gens) {
  Lattice L;
  L.ambient = ambient;
  L.basis = hnf_rows(gens, ambient);
  return L;
}

bool lattice_contains(const Lattice& L, const ZVec& v) {
  if ((int)v.size() != L.ambient) throw std::invalid_argument("lattice_contains: dim mismatch");
  ZVec w = v;
  for (const auto& row : L.basis) {
    size_t p = 0;
    while (p < row.size() && row[p] == 0) ++p;
    if (w[p] == 0) continue;
    if (w[p] % row[p] != 0) return false;
    Int q = w[p] / row[p];
    for (size_t j = 0; j < w.size(); ++j) w[j] -= q * row[j];
  }
  return is_zero(w);
}

bool lattice_equal(const Lattice& a, const Lattice& b) { return a == b; }

std::vector<ZVec> integer_kernel(const std::vector<ZVec>& rows, int ncols) {
  // Kernel of A: transform rows of A^T; U-rows opposite zero rows span it.
  size_t nr = rows.size();
  std::vector<ZVec> t(ncols, ZVec(nr));
  for (size_t i = 0; i < nr; ++i) {
    if ((int)rows[i].size() != ncols) throw std::invalid_argument("integer_kernel: ragged input");
    for (int j = 0; j < ncols; ++j) t[j][i] = rows[i][j];
  }
  std::vector<ZVec> U(ncols, ZVec(ncols, Int(0)));
  for (int i = 0; i < ncols; ++i) U[i][i] = 1;
  size_t rank = hnf_in_place(t, (int)nr, &U);
  std::vector<ZVec> ker(U.begin() + rank, U.end());
  return hnf_rows(std::move(ker), ncols);
}

Lattice saturation(int ambient, const std::vector<ZVec>& gens) {
  std::vector<ZVec> orth = integer_kernel(gens, ambient);
  Lattice L;
  L.ambient = ambient;
  L.basis = integer_kernel(orth, ambient);
  return L;
}

ZVec apply_rows(const std::vector<ZVec>& map_rows, const ZVec& v) {
  ZVec out(map_rows.size(), Int(0));
  for (size_t i = 0; i < map_rows.size(); ++i) {
    if (map_rows[i].size() != v.size()) throw std::invalid_argument("apply_rows: dim mismatch");
    for (size_t j = 0; j < v.size(); ++j) out[i] += map_rows[i][j] * v[j];
  }
  return out;
}

bool is_unimodular(const std::vector<ZVec>& map_rows, const Lattice& N, const Lattice& N2) {
  std::vector<ZVec> image;
  for (const auto& b : N.basis) image.push_back(apply_rows(map_rows, b));
  Lattice img = lattice_from_generators((int)map_rows.size(), image);
  if (img.rank() != N.rank()) return false;  // kernel met the lattice
  return img == N2;
}

}  // namespace tff::poly
