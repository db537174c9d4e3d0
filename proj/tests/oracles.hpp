#pragma once
// Independent brute-force oracles for the test suites.  These deliberately
// avoid the library's enumeration path: candidate columns come from plain
// nested loops over an entry box, matrices from the full candidate product.

#include "scaliso/arith.hpp"
#include "scaliso/forms.hpp"

#include <functional>
#include <vector>

namespace scaliso::oracle {

// all v in Z^k with |v_i| <= bound and v^t G v = target
inline std::vector<std::vector<Int>> columns_in_box(const IntMatrix& g, long long bound,
                                                    const Int& target) {
  int k = g.rows();
  std::vector<std::vector<Int>> out;
  std::vector<Int> v(size_t(k));
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      Int s = 0;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) s += v[size_t(a)] * g(a, b) * v[size_t(b)];
      if (s == target) out.push_back(v);
      return;
    }
    for (long long x = -bound; x <= bound; ++x) {
      v[size_t(i)] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// naive T(n, G, Z): assemble matrices from per-column candidate lists,
// checking every cross condition, det = n^k and content 1
inline std::vector<IntMatrix> naive_solutions(const IntMatrix& g, long long n, long long bound) {
  int k = g.rows();
  Int nn = Int(n) * n;
  std::vector<std::vector<std::vector<Int>>> cand(size_t(k));
  for (int j = 0; j < k; ++j) cand[size_t(j)] = columns_in_box(g, bound, nn * g(j, j));
  Int detq = pow_int(Int(n), unsigned(k));
  std::vector<IntMatrix> out;
  std::vector<const std::vector<Int>*> pick(size_t(k));
  std::function<void(int)> rec = [&](int j) {
    if (j == k) {
      IntMatrix m(k, k);
      for (int c = 0; c < k; ++c)
        for (int r = 0; r < k; ++r) m(r, c) = (*pick[size_t(c)])[size_t(r)];
      if (determinant(m) != detq) return;
      if (content_z(m) != 1) return;
      out.push_back(m);
      return;
    }
    for (const auto& v : cand[size_t(j)]) {
      bool ok = true;
      for (int i = 0; i < j && ok; ++i) {
        Int s = 0;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) s += (*pick[size_t(i)])[size_t(a)] * g(a, b) * v[size_t(b)];
        ok = (s == nn * g(i, j));
      }
      if (!ok) continue;
      pick[size_t(j)] = &v;
      rec(j + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// hermitian analogue over a Gaussian entry box (|re|, |im| <= bound)
inline std::vector<GaussMatrix> naive_hermitian_solutions(const GaussMatrix& h, long long n,
                                                          long long bound) {
  int k = h.rows();
  Int nn = Int(n) * n;
  GaussianInt detq(pow_int(Int(n), unsigned(k)));
  std::vector<GaussMatrix> out;
  size_t cells = size_t(k) * k;
  std::vector<GaussianInt> flat(cells);
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == cells) {
      GaussMatrix m(k, k);
      for (size_t c = 0; c < cells; ++c) m.flat()[c] = flat[c];
      if (m.ctranspose() * h * m != h.scaled(GaussianInt(nn))) return;
      if (determinant(m) != detq) return;
      if (content_z(m) != 1) return;
      out.push_back(m);
      return;
    }
    for (long long re = -bound; re <= bound; ++re)
      for (long long im = -bound; im <= bound; ++im) {
        flat[i] = GaussianInt(Int(re), Int(im));
        rec(i + 1);
      }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// cofactor-expansion determinant (independent of the Bareiss routine)
inline Int cofactor_det(const IntMatrix& m) {
  int k = m.rows();
  if (k == 1) return m(0, 0);
  Int s = 0;
  for (int j = 0; j < k; ++j) {
    IntMatrix sub(k - 1, k - 1);
    for (int i = 1; i < k; ++i) {
      int cc = 0;
      for (int c = 0; c < k; ++c) {
        if (c == j) continue;
        sub(i - 1, cc++) = m(i, c);
      }
    }
    Int t = m(0, j) * cofactor_det(sub);
    if (j % 2 == 0)
      s += t;
    else
      s -= t;
  }
  return s;
}

}  // namespace scaliso::oracle
