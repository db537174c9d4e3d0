#include "scaliso/modn.hpp"

namespace scaliso {

Int pow_int(const Int& b, unsigned e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

ModCtx::ModCtx(Int prime, int exponent) : p(std::move(prime)), e(exponent) {
  if (e < 1) throw std::invalid_argument("ModCtx: exponent must be >= 1");
  m = pow_int(p, unsigned(e));
}

int ModCtx::val(const Int& x) const {
  Int r = reduce(x);
  if (r == 0) return e;
  int v = 0;
  while (r % p == 0) {
    r /= p;
    ++v;
  }
  return v;
}

Int ModCtx::inv(const Int& x) const {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), reduce(x).get_mpz_t(), m.get_mpz_t()))
    throw std::invalid_argument("inv: not a unit mod p^e");
  return r;
}

GaussianInt ModCtx::inv(const GaussianInt& x) const {
  Int ninv = inv(x.norm());
  GaussianInt c = x.conj();
  return reduce(GaussianInt(c.re * ninv, c.im * ninv));
}

IntMatrix ModCtx::reduce(const IntMatrix& a) const {
  IntMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = reduce(a(i, j));
  return r;
}

GaussMatrix ModCtx::reduce(const GaussMatrix& a) const {
  GaussMatrix r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = reduce(a(i, j));
  return r;
}

IntMatrix ModCtx::inv(const IntMatrix& a) const {
  // Gauss-Jordan with unit pivots; requires det to be a unit mod p
  int k = a.rows();
  IntMatrix w = reduce(a), r = IntMatrix::identity(k);
  for (int s = 0; s < k; ++s) {
    int piv = -1;
    for (int i = s; i < k; ++i)
      if (is_unit(w(i, s))) { piv = i; break; }
    if (piv < 0) throw std::invalid_argument("matrix not invertible mod p");
    for (int j = 0; j < k; ++j) {
      std::swap(w(piv, j), w(s, j));
      std::swap(r(piv, j), r(s, j));
    }
    Int ip = inv(w(s, s));
    for (int j = 0; j < k; ++j) {
      w(s, j) = reduce(w(s, j) * ip);
      r(s, j) = reduce(r(s, j) * ip);
    }
    for (int i = 0; i < k; ++i) {
      if (i == s || w(i, s) == 0) continue;
      Int f = w(i, s);
      for (int j = 0; j < k; ++j) {
        w(i, j) = reduce(w(i, j) - f * w(s, j));
        r(i, j) = reduce(r(i, j) - f * r(s, j));
      }
    }
  }
  return r;
}

std::optional<PadicSolveResult> solve_linear_padic(const ModCtx& ctx,
                                                   std::vector<std::vector<Int>> a,
                                                   std::vector<Int> b) {
  size_t rows = a.size();
  size_t cols = rows ? a[0].size() : 0;
  for (auto& row : a)
    for (auto& x : row) x = ctx.reduce(x);
  for (auto& x : b) x = ctx.reduce(x);

  std::vector<int> pivot_col(rows, -1);
  std::vector<int> pivot_val(rows, 0);
  std::vector<bool> col_used(cols, false);
  int tmax = 0;
  size_t rank_row = 0;
  // forward elimination: at each step take the minimal-valuation entry of
  // the remaining block (so every remaining entry is divisible by the pivot)
  for (; rank_row < rows; ++rank_row) {
    int best_v = ctx.e;
    size_t bi = 0, bj = 0;
    for (size_t i = rank_row; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        int v = ctx.val(a[i][j]);
        if (v < best_v) {
          best_v = v;
          bi = i;
          bj = j;
        }
      }
    if (best_v >= ctx.e) break;  // remaining block is 0 mod p^e
    std::swap(a[rank_row], a[bi]);
    std::swap(b[rank_row], b[bi]);
    col_used[bj] = true;
    pivot_col[rank_row] = int(bj);
    pivot_val[rank_row] = best_v;
    tmax = std::max(tmax, best_v);

    Int pk = pow_int(ctx.p, unsigned(best_v));
    Int unit = exact_div(a[rank_row][bj], pk);
    Int uinv = ctx.inv(unit);
    // scale the pivot row so the pivot entry becomes exactly p^v
    for (size_t j = 0; j < cols; ++j) a[rank_row][j] = ctx.reduce(a[rank_row][j] * uinv);
    b[rank_row] = ctx.reduce(b[rank_row] * uinv);
    for (size_t i = rank_row + 1; i < rows; ++i) {
      if (!ctx.divides(pk, a[i][bj])) return std::nullopt;  // cannot happen: pivot is minimal
      Int f = exact_div(a[i][bj], pk);
      for (size_t j = 0; j < cols; ++j) a[i][j] = ctx.reduce(a[i][j] - f * a[rank_row][j]);
      b[i] = ctx.reduce(b[i] - f * b[rank_row]);
    }
  }
  // rows below rank must have RHS 0 mod p^e
  for (size_t i = rank_row; i < rows; ++i)
    if (ctx.reduce(b[i]) != 0) return std::nullopt;

  // back substitution with free variables at 0; row i still has all its
  // entries divisible by p^{pivot_val[i]}, so a consistent system keeps the
  // divided RHS integral
  std::vector<Int> x(cols, 0);
  for (size_t ii = rank_row; ii-- > 0;) {
    int j = pivot_col[ii];
    Int resid = b[ii];
    for (size_t l = 0; l < cols; ++l) {
      if (int(l) == j || x[l] == 0) continue;
      resid -= a[ii][l] * x[l];
    }
    resid = ctx.reduce(resid);
    Int pk = pow_int(ctx.p, unsigned(pivot_val[ii]));
    if (!ctx.divides(pk, resid)) return std::nullopt;
    // determined mod p^{e - v}; the caller re-verifies the assembled point
    x[j] = ctx.reduce(exact_div(resid, pk));
  }
  return PadicSolveResult{std::move(x), tmax};
}

}  // namespace scaliso
