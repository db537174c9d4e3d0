#pragma once
// Arithmetic mod p^e: residue helpers, matrix reduction, unit inverses,
// and a valuation-pivoted linear solver used by the Hensel/Newton lifts.

#include "scaliso/arith.hpp"

#include <optional>

namespace scaliso {

// Fixed modulus p^e.
struct ModCtx {
  Int p;
  int e = 1;
  Int m;  // p^e

  ModCtx(Int prime, int exponent);

  Int reduce(const Int& x) const {
    Int r = x % m;
    if (r < 0) r += m;
    return r;
  }
  GaussianInt reduce(const GaussianInt& x) const { return {reduce(x.re), reduce(x.im)}; }

  // valuation of a residue, capped at e (v(0) := e)
  int val(const Int& x) const;
  int val(const GaussianInt& x) const { return std::min(val(x.re), val(x.im)); }

  bool is_unit(const Int& x) const { return x % p != 0; }
  // unit of Z[i] tensor Z_p: norm prime to p
  bool is_unit(const GaussianInt& x) const { return is_unit(reduce(x.norm())); }

  // inverse of a unit mod p^e; throws for non-units
  Int inv(const Int& x) const;
  GaussianInt inv(const GaussianInt& x) const;

  IntMatrix reduce(const IntMatrix& a) const;
  GaussMatrix reduce(const GaussMatrix& a) const;
  IntMatrix mul(const IntMatrix& a, const IntMatrix& b) const { return reduce(a * b); }
  GaussMatrix mul(const GaussMatrix& a, const GaussMatrix& b) const { return reduce(a * b); }

  // inverse of a matrix whose determinant is a unit mod p
  IntMatrix inv(const IntMatrix& a) const;

  bool divides(const Int& pk, const Int& x) const { return x % pk == 0; }
};

// Solve A x = b over Z/p^N with valuation pivoting (A is r x c, possibly
// non-square / underdetermined; free variables are set to 0).
//
// Elimination picks, at every step, the remaining entry of minimal p-adic
// valuation.  With t = max pivot valuation, the back-substitution divides
// by p^t, so the solution is only trusted when every divided RHS entry is
// exactly divisible; otherwise the system is reported unsolvable at this
// precision.  Returns (x, t) on success.
struct PadicSolveResult {
  std::vector<Int> x;
  int max_pivot_val = 0;
};
std::optional<PadicSolveResult> solve_linear_padic(const ModCtx& ctx,
                                                   std::vector<std::vector<Int>> a,
                                                   std::vector<Int> b);

Int pow_int(const Int& b, unsigned e);

}  // namespace scaliso
