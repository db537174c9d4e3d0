#pragma once
// Exact arithmetic foundation: arbitrary-precision integers, Gaussian
// integers, square matrices over both, contents and denominators of
// rational matrices, p-adic valuations.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scaliso {

using Int = mpz_class;

inline Int gcd(const Int& a, const Int& b) {
  Int r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// z = a + bi in Z[i].  norm(z) = a^2 + b^2 is multiplicative.
struct GaussianInt {
  Int re = 0, im = 0;

  GaussianInt() = default;
  GaussianInt(Int r) : re(std::move(r)) {}
  GaussianInt(long r) : re(r) {}
  GaussianInt(Int r, Int i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianInt conj() const { return {re, -im}; }
  Int norm() const { return re * re + im * im; }

  GaussianInt operator+(const GaussianInt& o) const { return {re + o.re, im + o.im}; }
  GaussianInt operator-(const GaussianInt& o) const { return {re - o.re, im - o.im}; }
  GaussianInt operator-() const { return {-re, -im}; }
  GaussianInt operator*(const GaussianInt& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GaussianInt& operator+=(const GaussianInt& o) { re += o.re; im += o.im; return *this; }
  GaussianInt& operator-=(const GaussianInt& o) { re -= o.re; im -= o.im; return *this; }
  GaussianInt& operator*=(const GaussianInt& o) { *this = *this * o; return *this; }
  bool operator==(const GaussianInt& o) const { return re == o.re && im == o.im; }
  bool operator!=(const GaussianInt& o) const { return !(*this == o); }
  // lexicographic, for canonical solution ordering
  bool operator<(const GaussianInt& o) const {
    if (re != o.re) return re < o.re;
    return im < o.im;
  }
};

// Exact division in Z[i]; throws if o does not divide *this.
GaussianInt gaussian_exact_div(const GaussianInt& a, const GaussianInt& b);
// Euclidean gcd in Z[i] (determined up to units; normalized to first
// quadrant: re > 0, im >= 0, or the unit 1 for coprime inputs).
GaussianInt gaussian_gcd(GaussianInt a, GaussianInt b);

// scalar glue so matrix code is generic over Int and GaussianInt
inline Int conj_of(const Int& x) { return x; }
inline GaussianInt conj_of(const GaussianInt& x) { return x.conj(); }
inline bool is_zero(const Int& x) { return x == 0; }
inline bool is_zero(const GaussianInt& x) { return x.is_zero(); }
inline Int exact_div(const Int& a, const Int& b) {
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (r != 0) throw std::invalid_argument("exact_div: not divisible");
  return q;
}
inline GaussianInt exact_div(const GaussianInt& a, const GaussianInt& b) {
  return gaussian_exact_div(a, b);
}

// Dense square (or rectangular) matrix over T in {Int, GaussianInt}.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
  static Matrix identity(int k) {
    Matrix m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix scalar(int k, const T& v) {
    Matrix m(k, k);
    for (int i = 0; i < k; ++i) m(i, i) = v;
    return m;
  }

  int rows() const { return r_; }
  int cols() const { return c_; }
  T& operator()(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const T& operator()(int i, int j) const { return a_[size_t(i) * c_ + j]; }
  const std::vector<T>& flat() const { return a_; }
  std::vector<T>& flat() { return a_; }

  Matrix transpose() const {
    Matrix m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }
  // conjugate transpose; plain transpose over Int
  Matrix ctranspose() const {
    Matrix m(c_, r_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) m(j, i) = conj_of((*this)(i, j));
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    if (c_ != o.r_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix m(r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int l = 0; l < c_; ++l) {
        const T& x = (*this)(i, l);
        if (is_zero(x)) continue;
        for (int j = 0; j < o.c_; ++j) m(i, j) += x * o(l, j);
      }
    return m;
  }
  Matrix operator+(const Matrix& o) const {
    Matrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }
  Matrix scaled(const T& s) const {
    Matrix m(r_, c_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * s;
    return m;
  }

  bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  // row-major lexicographic order; canonical order of solution sets
  bool operator<(const Matrix& o) const {
    if (r_ != o.r_) return r_ < o.r_;
    if (c_ != o.c_) return c_ < o.c_;
    for (size_t i = 0; i < a_.size(); ++i) {
      if (a_[i] != o.a_[i]) return a_[i] < o.a_[i];
    }
    return false;
  }

  bool is_square() const { return r_ == c_; }

 private:
  int r_ = 0, c_ = 0;
  std::vector<T> a_;
};

using IntMatrix = Matrix<Int>;
using GaussMatrix = Matrix<GaussianInt>;

// Exact determinant (Bareiss fraction-free elimination; valid over any
// integral domain with exact division).
template <class T>
T determinant(Matrix<T> m);

// Largest positive rational integer dividing every entry (both real and
// imaginary parts in the Gaussian case).  Throws on the zero matrix.
Int content_z(const IntMatrix& m);
Int content_z(const GaussMatrix& m);
// gcd of all entries in Z[i]; differs from content_z only at the
// ramified prime 2 (exposed behind the --content-mode flag).
GaussianInt content_gaussian(const GaussMatrix& m);

// Smallest e >= 1 such that (e/d) * M is integral, i.e. d / gcd(content, d).
Int denominator_of(const IntMatrix& m, const Int& d);
Int denominator_of(const GaussMatrix& m, const Int& d);

// p-adic valuation of n >= 1; requires p prime.
unsigned v_p(const Int& n, const Int& p);
// valuation helper without the primality gate (internal use)
unsigned valuation(Int n, const Int& p);

bool is_prime(const Int& n);
// primes dividing n (exact; trial division then Pollard rho for stragglers)
std::vector<Int> prime_factors(Int n);

// Integer linear algebra on small dense systems (exact, unimodular ops).
// diagonalize A over Z by row/column operations: U A V = D (no divisibility
// chain); enough to solve A x = b over Z.
struct IntegerDiagonal {
  std::vector<std::vector<Int>> u, v;
  std::vector<Int> d;
  size_t rows = 0, cols = 0;
};
IntegerDiagonal integer_diagonalize(std::vector<std::vector<Int>> a);

// particular solution of A x = b over Z plus a kernel basis; false when no
// integral solution exists.  For empty systems x0 must be preset by caller.
bool solve_integer_system(const std::vector<std::vector<Int>>& a, const std::vector<Int>& b,
                          std::vector<Int>* x0, std::vector<std::vector<Int>>* kernel);

// lower-triangular column Hermite basis of the lattice spanned by the given
// generators (full column rank required)
std::vector<std::vector<Int>> hnf_lower_triangular(const std::vector<std::vector<Int>>& gens,
                                                   size_t dim);

// Rational k x k point M / n with the representation reduced:
// content_z(M) coprime to n, so the denominator of M/n is exactly n.
struct RationalPoint {
  IntMatrix numerator;
  Int level;

  RationalPoint(IntMatrix m, Int n);
  Int denominator() const { return denominator_of(numerator, level); }
};

std::string to_string(const Int& x);
std::string to_string(const GaussianInt& x);

}  // namespace scaliso
