#include "scaliso/arith.hpp"

namespace scaliso {

GaussianInt gaussian_exact_div(const GaussianInt& a, const GaussianInt& b) {
  if (b.is_zero()) throw std::invalid_argument("gaussian division by zero");
  // a/b = a * conj(b) / norm(b); entries must divide exactly
  GaussianInt num = a * b.conj();
  Int nb = b.norm();
  return {exact_div(num.re, nb), exact_div(num.im, nb)};
}

static GaussianInt gaussian_divmod(const GaussianInt& a, const GaussianInt& b,
                                   GaussianInt* rem) {
  // nearest-integer quotient; remainder norm < norm(b)
  GaussianInt num = a * b.conj();
  Int nb = b.norm();
  auto nearest = [&](const Int& x) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), nb.get_mpz_t());
    if (2 * r > nb) q += 1;
    return q;
  };
  GaussianInt q(nearest(num.re), nearest(num.im));
  if (rem) *rem = a - b * q;
  return q;
}

GaussianInt gaussian_gcd(GaussianInt a, GaussianInt b) {
  while (!b.is_zero()) {
    GaussianInt r;
    gaussian_divmod(a, b, &r);
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  // normalize by units {1, i, -1, -i} into re > 0, im >= 0
  while (!(a.re > 0 && a.im >= 0)) a = a * GaussianInt(Int(0), Int(1));
  return a;
}

template <class T>
T determinant(Matrix<T> m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  int k = m.rows();
  if (k == 0) return T(1);
  T prev(1);
  bool neg = false;
  for (int s = 0; s < k - 1; ++s) {
    if (is_zero(m(s, s))) {
      int piv = -1;
      for (int i = s + 1; i < k; ++i)
        if (!is_zero(m(i, s))) { piv = i; break; }
      if (piv < 0) return T(0);
      for (int j = s; j < k; ++j) std::swap(m(s, j), m(piv, j));
      neg = !neg;
    }
    for (int i = s + 1; i < k; ++i)
      for (int j = s + 1; j < k; ++j) {
        T num = m(i, j) * m(s, s) - m(i, s) * m(s, j);
        m(i, j) = exact_div(num, prev);
      }
    prev = m(s, s);
  }
  T d = m(k - 1, k - 1);
  return neg ? T(0) - d : d;
}

template Int determinant<Int>(Matrix<Int>);
template GaussianInt determinant<GaussianInt>(Matrix<GaussianInt>);

Int content_z(const IntMatrix& m) {
  Int g = 0;
  for (const auto& x : m.flat()) g = gcd(g, x);
  if (g == 0) throw std::invalid_argument("zero matrix has no content");
  return g;
}

Int content_z(const GaussMatrix& m) {
  Int g = 0;
  for (const auto& x : m.flat()) {
    g = gcd(g, x.re);
    g = gcd(g, x.im);
  }
  if (g == 0) throw std::invalid_argument("zero matrix has no content");
  return g;
}

GaussianInt content_gaussian(const GaussMatrix& m) {
  GaussianInt g(Int(0), Int(0));
  for (const auto& x : m.flat()) g = gaussian_gcd(g, x);
  if (g.is_zero()) throw std::invalid_argument("zero matrix has no content");
  return g;
}

Int denominator_of(const IntMatrix& m, const Int& d) {
  if (d < 1) throw std::invalid_argument("denominator_of: level must be positive");
  return exact_div(d, gcd(content_z(m), d));
}

Int denominator_of(const GaussMatrix& m, const Int& d) {
  if (d < 1) throw std::invalid_argument("denominator_of: level must be positive");
  return exact_div(d, gcd(content_z(m), d));
}

unsigned valuation(Int n, const Int& p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  unsigned v = 0;
  Int q, r;
  for (;;) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return v;
    n = q;
    ++v;
  }
}

unsigned v_p(const Int& n, const Int& p) {
  if (!is_prime(p)) throw std::invalid_argument("v_p: p is not prime");
  if (n < 1) throw std::invalid_argument("v_p: n must be >= 1");
  return valuation(n, p);
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;  // deterministic for 64-bit range
}

static Int pollard_rho(const Int& n) {
  // n odd composite, no small factors
  for (unsigned long c = 1;; ++c) {
    Int x = 2, y = 2, d = 1;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      d = gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

std::vector<Int> prime_factors(Int n) {
  if (n < 0) n = -n;
  std::vector<Int> out;
  if (n <= 1) return out;
  for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  Int d = 17;
  while (d * d <= n && d < 100000) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
    d += 2;
  }
  // recurse on what's left with rho
  std::function<void(Int)> split = [&](Int m) {
    if (m == 1) return;
    if (is_prime(m)) {
      for (const auto& q : out)
        if (q == m) return;
      out.push_back(m);
      return;
    }
    Int f = pollard_rho(m);
    split(f);
    split(exact_div(m, f));
  };
  if (n > 1) split(n);
  std::sort(out.begin(), out.end());
  return out;
}

IntegerDiagonal integer_diagonalize(std::vector<std::vector<Int>> a) {
  size_t r = a.size(), c = r ? a[0].size() : 0;
  IntegerDiagonal out;
  out.rows = r;
  out.cols = c;
  out.u.assign(r, std::vector<Int>(r, 0));
  out.v.assign(c, std::vector<Int>(c, 0));
  for (size_t i = 0; i < r; ++i) out.u[i][i] = 1;
  for (size_t i = 0; i < c; ++i) out.v[i][i] = 1;

  auto row_op = [&](size_t dst, size_t src, const Int& f) {
    for (size_t j = 0; j < c; ++j) a[dst][j] -= f * a[src][j];
    for (size_t j = 0; j < r; ++j) out.u[dst][j] -= f * out.u[src][j];
  };
  auto col_op = [&](size_t dst, size_t src, const Int& f) {
    for (size_t i = 0; i < r; ++i) a[i][dst] -= f * a[i][src];
    for (size_t i = 0; i < c; ++i) out.v[i][dst] -= f * out.v[i][src];
  };

  size_t t = 0;
  while (t < r && t < c) {
    size_t bi = t, bj = t;
    Int best = 0;
    for (size_t i = t; i < r; ++i)
      for (size_t j = t; j < c; ++j) {
        if (a[i][j] == 0) continue;
        Int m = a[i][j] < 0 ? -a[i][j] : a[i][j];
        if (best == 0 || m < best) {
          best = m;
          bi = i;
          bj = j;
        }
      }
    if (best == 0) break;
    std::swap(a[t], a[bi]);
    std::swap(out.u[t], out.u[bi]);
    for (size_t i = 0; i < r; ++i) std::swap(a[i][t], a[i][bj]);
    for (size_t i = 0; i < c; ++i) std::swap(out.v[i][t], out.v[i][bj]);
    bool clean = true;
    for (size_t i = t + 1; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
      if (q != 0) row_op(i, t, q);
      if (a[i][t] != 0) clean = false;
    }
    for (size_t j = t + 1; j < c; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
      if (q != 0) col_op(j, t, q);
      if (a[t][j] != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared: repeat this step
    ++t;
  }
  out.d.resize(std::min(r, c));
  for (size_t i = 0; i < out.d.size(); ++i) out.d[i] = a[i][i];
  return out;
}

bool solve_integer_system(const std::vector<std::vector<Int>>& a, const std::vector<Int>& b,
                          std::vector<Int>* x0, std::vector<std::vector<Int>>* kernel) {
  size_t r = a.size(), c = r ? a[0].size() : 0;
  if (r == 0) return true;
  IntegerDiagonal df = integer_diagonalize(a);
  std::vector<Int> ub(r, 0);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) ub[i] += df.u[i][j] * b[j];
  std::vector<Int> z(c, 0);
  std::vector<bool> freev(c, true);
  for (size_t i = 0; i < std::min(r, c); ++i) {
    if (df.d[i] != 0) {
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), ub[i].get_mpz_t(), df.d[i].get_mpz_t());
      if (rem != 0) return false;
      z[i] = q;
      freev[i] = false;
    } else if (ub[i] != 0) {
      return false;
    }
  }
  for (size_t i = std::min(r, c); i < r; ++i)
    if (ub[i] != 0) return false;
  x0->assign(c, 0);
  for (size_t i = 0; i < c; ++i)
    for (size_t j = 0; j < c; ++j) (*x0)[i] += df.v[i][j] * z[j];
  kernel->clear();
  for (size_t j = 0; j < c; ++j) {
    if (!freev[j]) continue;
    std::vector<Int> k(c);
    for (size_t i = 0; i < c; ++i) k[i] = df.v[i][j];
    kernel->push_back(std::move(k));
  }
  return true;
}

std::vector<std::vector<Int>> hnf_lower_triangular(const std::vector<std::vector<Int>>& gens,
                                                   size_t dim) {
  std::vector<std::vector<Int>> cols = gens;
  std::vector<std::vector<Int>> h;
  size_t start = 0;
  for (size_t r = 0; r < dim; ++r) {
    for (;;) {
      size_t best = start;
      Int bv = 0;
      for (size_t i = start; i < cols.size(); ++i) {
        if (cols[i][r] == 0) continue;
        Int m = cols[i][r] < 0 ? -cols[i][r] : cols[i][r];
        if (bv == 0 || m < bv) {
          bv = m;
          best = i;
        }
      }
      if (bv == 0) throw std::invalid_argument("hnf_lower_triangular: generators not full rank");
      std::swap(cols[start], cols[best]);
      bool clean = true;
      for (size_t i = start + 1; i < cols.size(); ++i) {
        if (cols[i][r] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), cols[i][r].get_mpz_t(), cols[start][r].get_mpz_t());
        if (q != 0)
          for (size_t l = r; l < dim; ++l) cols[i][l] -= q * cols[start][l];
        if (cols[i][r] != 0) clean = false;
      }
      if (clean) break;
    }
    if (cols[start][r] < 0)
      for (size_t l = r; l < dim; ++l) cols[start][l] = -cols[start][l];
    h.push_back(cols[start]);
    ++start;
  }
  return h;
}

RationalPoint::RationalPoint(IntMatrix m, Int n) : numerator(std::move(m)), level(std::move(n)) {
  if (level < 1) throw std::invalid_argument("RationalPoint: level must be positive");
  Int g = gcd(content_z(numerator), level);
  if (g != 1) {
    for (auto& x : numerator.flat()) x = exact_div(x, g);
    level = exact_div(level, g);
  }
}

std::string to_string(const Int& x) { return x.get_str(); }

std::string to_string(const GaussianInt& x) {
  if (x.im == 0) return x.re.get_str();
  std::string s = x.re.get_str();
  s += (x.im >= 0 ? "+" : "");
  s += x.im.get_str();
  s += "i";
  return s;
}

}  // namespace scaliso
