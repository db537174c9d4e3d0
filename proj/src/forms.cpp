#include "scaliso/forms.hpp"

#include "scaliso/padic_search.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <set>

namespace scaliso {

Form Form::quadratic(IntMatrix gram) {
  if (!gram.is_square()) throw std::invalid_argument("gram must be square");
  if (gram != gram.transpose()) throw std::invalid_argument("quadratic gram must be symmetric");
  Form f;
  f.kind = Kind::Quadratic;
  f.qgram = std::move(gram);
  return f;
}

Form Form::hermitian(GaussMatrix gram) {
  if (!gram.is_square()) throw std::invalid_argument("gram must be square");
  if (gram != gram.ctranspose())
    throw std::invalid_argument("hermitian gram must equal its conjugate transpose");
  Form f;
  f.kind = Kind::Hermitian;
  f.hgram = std::move(gram);
  return f;
}

Int Form::det() const {
  if (is_quadratic()) return determinant(qgram);
  GaussianInt d = determinant(hgram);
  if (d.im != 0) throw std::logic_error("hermitian determinant must be real");
  return d.re;
}

bool is_positive_definite(const Form& f) {
  int k = f.rank();
  for (int s = 1; s <= k; ++s) {
    if (f.is_quadratic()) {
      IntMatrix sub(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) sub(i, j) = f.qgram(i, j);
      if (determinant(sub) <= 0) return false;
    } else {
      GaussMatrix sub(s, s);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) sub(i, j) = f.hgram(i, j);
      GaussianInt d = determinant(sub);
      if (d.im != 0 || d.re <= 0) return false;
    }
  }
  return true;
}

RealEmbedding real_embedding(const Form& f, double tol) {
  if (!is_positive_definite(f)) throw std::invalid_argument("real_embedding: form not positive definite");
  int k = f.rank();
  RealEmbedding emb;
  emb.k = k;
  emb.hermitian = !f.is_quadratic();
  emb.chol.assign(size_t(k) * k, {0.0, 0.0});

  Eigen::MatrixXcd g(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (f.is_quadratic())
        g(i, j) = std::complex<double>(f.qgram(i, j).get_d(), 0.0);
      else
        g(i, j) = std::complex<double>(f.hgram(i, j).re.get_d(), f.hgram(i, j).im.get_d());
    }
  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("real_embedding: Cholesky failed");
  Eigen::MatrixXcd c = llt.matrixL().adjoint();  // upper triangular, C^* C = g
  double resid = (c.adjoint() * c - g).cwiseAbs().maxCoeff();
  if (resid > tol) throw std::runtime_error("real_embedding: residual above tolerance");
  emb.residual = resid;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) emb.chol[size_t(i) * k + j] = c(i, j);
  return emb;
}

// symmetric congruence elimination mod p^e; pivots kept unit
PAdicDiagonalization padic_diagonalize(const Form& f, const Int& p, int e) {
  if (!f.is_quadratic())
    throw std::invalid_argument("padic_diagonalize: hermitian forms unsupported");
  if (p == 2) throw std::invalid_argument("padic_diagonalize: p = 2 unsupported");
  if (!is_prime(p)) throw std::invalid_argument("padic_diagonalize: p not prime");
  Int d = f.det();
  if (d % p == 0) throw std::invalid_argument("padic_diagonalize: bad prime, use bad_primes");

  ModCtx ctx(p, e);
  int k = f.rank();
  IntMatrix w = ctx.reduce(f.qgram);
  IntMatrix g = IntMatrix::identity(k);

  auto add_col = [&](int dst, int src, const Int& fac) {
    // basis change e_dst <- e_dst + fac * e_src applied to w (congruence) and g
    for (int i = 0; i < k; ++i) w(i, dst) = ctx.reduce(w(i, dst) + fac * w(i, src));
    for (int i = 0; i < k; ++i) w(dst, i) = ctx.reduce(w(dst, i) + fac * w(src, i));
    for (int i = 0; i < k; ++i) g(i, dst) = ctx.reduce(g(i, dst) + fac * g(i, src));
  };
  auto swap_cols = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < k; ++i) std::swap(w(i, a), w(i, b));
    for (int i = 0; i < k; ++i) std::swap(w(a, i), w(b, i));
    for (int i = 0; i < k; ++i) std::swap(g(i, a), g(i, b));
  };

  for (int s = 0; s < k; ++s) {
    int piv = -1;
    for (int i = s; i < k; ++i)
      if (ctx.is_unit(w(i, i))) { piv = i; break; }
    if (piv < 0) {
      // mix a unit off-diagonal entry onto the diagonal (2 is a unit, p odd)
      int bi = -1, bj = -1;
      for (int i = s; i < k && bi < 0; ++i)
        for (int j = i + 1; j < k; ++j)
          if (ctx.is_unit(w(i, j))) { bi = i; bj = j; break; }
      if (bi < 0) throw std::invalid_argument("padic_diagonalize: trailing block singular mod p");
      add_col(bi, bj, 1);
      piv = bi;
    }
    swap_cols(s, piv);
    Int ip = ctx.inv(w(s, s));
    for (int i = s + 1; i < k; ++i) {
      if (w(i, s) == 0) continue;
      add_col(i, s, ctx.reduce(-w(i, s) * ip));
    }
  }

  PAdicDiagonalization out;
  out.basis = PAdicBasisChange{p, e, g};
  out.diag.resize(k);
  for (int i = 0; i < k; ++i) out.diag[i] = w(i, i);
  // self-check: g^t gram g = diag mod p^e
  IntMatrix chk = ctx.reduce(g.transpose() * f.qgram * g);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Int want = (i == j) ? out.diag[i] : Int(0);
      if (chk(i, j) != ctx.reduce(want))
        throw std::logic_error("padic_diagonalize: re-multiplication check failed");
    }
  return out;
}

static Int sqrt_mod_p(const Int& a, const Int& p) {
  // p is small at desk scale; direct scan
  Int r = a % p;
  if (r < 0) r += p;
  for (Int x = 0; x < p; ++x)
    if ((x * x - r) % p == 0) return x;
  throw std::invalid_argument("sqrt_mod_p: not a square");
}

static Int sqrt_mod_pe(const Int& a, const ModCtx& ctx) {
  // Hensel from mod p; x odd prime, a unit square
  Int x = sqrt_mod_p(a, ctx.p);
  if (x == 0) throw std::invalid_argument("sqrt_mod_pe: not a unit");
  for (int i = 0; i < ctx.e + 2; ++i) {
    Int fx = ctx.reduce(x * x - a);
    if (fx == 0) break;
    x = ctx.reduce(x - fx * ctx.inv(2 * x));
  }
  if (ctx.reduce(x * x - a) != 0) throw std::logic_error("sqrt_mod_pe: lift failed");
  return x;
}

std::pair<Int, Int> sum_of_two_squares_padic(const Int& u, const Int& p, int e) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("sum_of_two_squares_padic: p must be an odd prime");
  ModCtx ctx(p, e);
  if (!ctx.is_unit(u)) throw std::invalid_argument("sum_of_two_squares_padic: u must be a unit");
  // base solution mod p, keeping a nonzero coordinate to lift on
  Int a0 = -1, b0 = -1;
  for (Int a = 0; a < p && a0 < 0; ++a)
    for (Int b = 0; b < p; ++b)
      if ((a * a + b * b - u) % p == 0) {
        a0 = a;
        b0 = b;
        break;
      }
  if (a0 < 0) throw std::logic_error("sum_of_two_squares_padic: no solution mod p");
  bool lift_a = ctx.is_unit(a0);
  if (!lift_a && !ctx.is_unit(b0)) throw std::logic_error("sum_of_two_squares_padic: degenerate base");
  Int a = a0, b = b0;
  Int& t = lift_a ? a : b;
  const Int& o = lift_a ? b : a;
  for (int i = 0; i < e + 2; ++i) {
    Int fx = ctx.reduce(a * a + b * b - u);
    if (fx == 0) break;
    t = ctx.reduce(t - fx * ctx.inv(2 * t));
    (void)o;
  }
  if (ctx.reduce(a * a + b * b - u) != 0)
    throw std::logic_error("sum_of_two_squares_padic: re-multiplication check failed");
  return {a, b};
}

HyperbolicReduction hyperbolic_reduce(const Form& f, const Int& p, int e) {
  if (!f.is_quadratic()) throw std::invalid_argument("hyperbolic_reduce: quadratic forms only");
  int k = f.rank();
  if (k < 5) throw std::invalid_argument("hyperbolic_reduce: rank must be >= 5");
  for (const Int& q : bad_primes(f))
    if (q == p) throw std::invalid_argument("hyperbolic_reduce: p is a bad prime for this form");

  ModCtx ctx(p, e);
  PAdicDiagonalization dg = padic_diagonalize(f, p, e);
  IntMatrix g = dg.basis.g;
  std::vector<Int> d = dg.diag;

  // One extraction step: basis vectors at positions (i0, i0+1, i0+2) carrying
  // unit diagonal values turn into (hyperbolic pair, leftover unit) as in the
  // three-variable reduction; cross entry lands at exactly 1.
  auto extract = [&](int i0) {
    Int d1 = d[i0], d2 = d[i0 + 1], d3 = d[i0 + 2];
    // two of the three share a square class mod p
    auto cls = [&](const Int& x) { return mpz_legendre(ctx.reduce(x).get_mpz_t(), p.get_mpz_t()); };
    int ia, ib, il;
    if (cls(d1) == cls(d2)) { ia = 0; ib = 1; il = 2; }
    else if (cls(d1) == cls(d3)) { ia = 0; ib = 2; il = 1; }
    else { ia = 1; ib = 2; il = 0; }
    Int da = d[i0 + ia], db = d[i0 + ib], beta = d[i0 + il];
    Int s = sqrt_mod_pe(ctx.reduce(db * ctx.inv(da)), ctx);  // db = da s^2
    Int sinv = ctx.inv(s);
    // columns of the current basis change
    auto col = [&](int j) {
      std::vector<Int> v(k);
      for (int i = 0; i < k; ++i) v[i] = g(i, j);
      return v;
    };
    std::vector<Int> ba = col(i0 + ia), bb = col(i0 + ib), bl = col(i0 + il);
    for (auto& x : bb) x = ctx.reduce(x * sinv);  // now both carry value da
    auto [aa, bbb] = sum_of_two_squares_padic(ctx.reduce(-beta * ctx.inv(da)), p, e);
    Int binv = ctx.inv(beta);
    std::vector<Int> u1(k), u2(k), u3(k);
    for (int i = 0; i < k; ++i) {
      u1[i] = ctx.reduce(aa * ba[i] + bbb * bb[i] + bl[i]);
      u2[i] = ctx.reduce(binv * (-bbb * ba[i] + aa * bb[i] + bl[i]));
      u3[i] = ctx.reduce((aa - bbb) * ba[i] + (aa + bbb) * bb[i] + bl[i]);
    }
    for (int i = 0; i < k; ++i) {
      g(i, i0) = u1[i];
      g(i, i0 + 1) = u2[i];
      g(i, i0 + 2) = u3[i];
    }
    d[i0] = 0;
    d[i0 + 1] = 0;
    d[i0 + 2] = ctx.reduce(-beta);  // leftover diagonal value
  };

  extract(0);
  // move leftover next to the untouched diagonal tail and extract again
  extract(2);
  // final layout: hyperbolic pairs at (0,1) and (2,3), leftover at 4, tail beyond

  IntMatrix target(k, k);
  target(0, 1) = target(1, 0) = 1;
  target(2, 3) = target(3, 2) = 1;
  target(4, 4) = d[4];
  for (int i = 5; i < k; ++i) target(i, i) = d[i];

  IntMatrix chk = ctx.reduce(g.transpose() * f.qgram * g);
  if (chk != ctx.reduce(target))
    throw std::logic_error("hyperbolic_reduce: re-multiplication check failed");
  for (int i = 4; i < k; ++i)
    if (!ctx.is_unit(target(i, i)))
      throw std::logic_error("hyperbolic_reduce: non-unit tail entry");

  return HyperbolicReduction{PAdicBasisChange{p, e, g}, target};
}

std::vector<Int> bad_primes(const Form& f) {
  std::set<Int> out;
  out.insert(2);
  for (const Int& q : prime_factors(f.det())) out.insert(q);
  if (f.is_quadratic()) {
    // rational symmetric elimination; positive definiteness keeps every pivot
    // nonzero, collect primes of the pivots' numerators and denominators
    int k = f.rank();
    std::vector<std::vector<mpq_class>> w(k, std::vector<mpq_class>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) w[i][j] = mpq_class(f.qgram(i, j));
    for (int s = 0; s < k; ++s) {
      mpq_class piv = w[s][s];
      if (piv == 0) throw std::logic_error("bad_primes: zero pivot on a definite form");
      for (const Int& q : prime_factors(Int(piv.get_num()))) out.insert(q);
      for (const Int& q : prime_factors(Int(piv.get_den()))) out.insert(q);
      for (int i = s + 1; i < k; ++i) {
        mpq_class fac = w[i][s] / piv;
        for (int j = s; j < k; ++j) w[i][j] -= fac * w[s][j];
      }
    }
  }
  return {out.begin(), out.end()};
}

int hilbert_symbol(Int a, Int b, const Int& p) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;  // real place
  if (!is_prime(p)) throw std::invalid_argument("hilbert_symbol: p not prime");
  unsigned alpha = valuation(a, p), beta = valuation(b, p);
  Int u = a / pow_int(p, alpha), v = b / pow_int(p, beta);
  if (p != 2) {
    int lu = mpz_legendre(u.get_mpz_t(), p.get_mpz_t());
    int lv = mpz_legendre(v.get_mpz_t(), p.get_mpz_t());
    int lm1 = mpz_legendre(Int(-1).get_mpz_t(), p.get_mpz_t());
    int s = 1;
    if ((alpha & 1) && (beta & 1)) s *= lm1;
    if (beta & 1) s *= lu;
    if (alpha & 1) s *= lv;
    return s;
  }
  auto eps = [](const Int& x) { return ((((x - 1) / 2) % 2) + 2) % 2; };       // (x-1)/2 mod 2
  auto omega = [](const Int& x) { return ((((x * x - 1) / 8) % 2) + 2) % 2; };  // (x^2-1)/8 mod 2
  Int expo = eps(u) * eps(v) + Int(alpha) * omega(v) + Int(beta) * omega(u);
  return (expo % 2 == 0) ? 1 : -1;
}

int hasse_invariant(const Form& f, const Int& p) {
  if (!f.is_quadratic()) throw std::invalid_argument("hasse_invariant: quadratic forms only");
  int k = f.rank();
  std::vector<std::vector<mpq_class>> w(k, std::vector<mpq_class>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) w[i][j] = mpq_class(f.qgram(i, j));
  std::vector<Int> diag;
  for (int s = 0; s < k; ++s) {
    mpq_class piv = w[s][s];
    if (piv == 0) throw std::invalid_argument("hasse_invariant: degenerate form");
    diag.push_back(Int(piv.get_num()) * Int(piv.get_den()));  // square class of the pivot
    for (int i = s + 1; i < k; ++i) {
      mpq_class fac = w[i][s] / piv;
      for (int j = s; j < k; ++j) w[i][j] -= fac * w[s][j];
    }
  }
  int s = 1;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) s *= hilbert_symbol(diag[i], diag[j], p);
  return s;
}

Int squarefree_part(const Int& n) {
  if (n == 0) throw std::invalid_argument("squarefree_part of zero");
  Int m = n < 0 ? -n : n;
  Int out = n < 0 ? -1 : 1;
  for (const Int& q : prime_factors(m))
    if (valuation(m, q) % 2 == 1) out *= q;
  return out;
}

GenusVerdict genus_equivalent(const Form& f, const Form& g, const GenusSearchBudget& budget) {
  if (!f.is_quadratic() || !g.is_quadratic())
    throw std::invalid_argument("genus_equivalent: quadratic forms only");
  if (f.rank() != g.rank()) throw std::invalid_argument("genus_equivalent: rank mismatch");

  GenusVerdict out;
  Int df = f.det(), dg = g.det();
  if (squarefree_part(df * dg) != 1) {
    out.status = GenusVerdict::Status::Distinct;
    out.detail = "determinant classes differ in Q*/(Q*)^2";
    return out;
  }
  // combined bad set covers every prime where a Hilbert symbol can be -1
  std::set<Int> primes;
  for (const Int& q : bad_primes(f)) primes.insert(q);
  for (const Int& q : bad_primes(g)) primes.insert(q);
  for (const Int& q : primes) {
    if (hasse_invariant(f, q) != hasse_invariant(g, q)) {
      out.status = GenusVerdict::Status::Distinct;
      out.detail = "Hasse-Witt invariant differs at p = " + q.get_str();
      return out;
    }
  }
  // signature: both positive definite of equal rank, nothing to compare

  // p-adic witnesses at the combined bad primes; good primes are covered by
  // the unit determinant class comparison already implied by the det check
  for (const Int& q : primes) {
    int e = budget.precision > 0
                ? budget.precision
                : int(2 * std::max(valuation(df, q), valuation(dg, q)) + 3);
    PadicSearchOptions opts;
    opts.precision = std::max(1, e - 2);  // search coarser, then lift
    opts.require_unit_content = false;
    opts.det_mode = PadicSearchOptions::DetMode::Unit;
    opts.max_solutions = 16;
    opts.node_budget = budget.node_budget;
    opts.seed = budget.seed;
    std::vector<IntMatrix> sols;
    bool found = false;
    for (int c = std::min(2, opts.precision); c <= opts.precision && !found; ++c) {
      PadicSearchOptions o = opts;
      o.precision = c;
      sols.clear();
      padic_isometry_search(f.qgram, g.qgram, Int(1), q, o, sols);
      for (const IntMatrix& m0 : sols) {
        auto lift = newton_lift(f.qgram, g.qgram, Int(1), q, m0, c, e);
        if (!lift) continue;
        ModCtx ctx(q, e);
        if (!ctx.is_unit(determinant(lift->witness))) continue;
        out.witnesses.emplace_back(q, PAdicBasisChange{q, e, lift->witness});
        found = true;
        break;
      }
    }
    if (!found) {
      out.status = GenusVerdict::Status::Undetermined;
      out.detail = "witness search exhausted at p = " + q.get_str();
      return out;
    }
  }
  out.status = GenusVerdict::Status::SameGenus;
  return out;
}

}  // namespace scaliso
