#include "scaliso/locals.hpp"

#include "scaliso/padic_search.hpp"
#include "scaliso/rng.hpp"

#include <algorithm>

namespace scaliso {

namespace {

// ---------------------------------------------------------------------------
// search for k x J matrices M with  M^* A M = scale * B (mod p^c), column by
// column.  For each column the linear cross conditions against the already
// fixed columns are solved exactly: the residue solutions form a coset
// v0 + L of a sublattice L, enumerated through a triangular Hermite basis
// whose coset parameters are walked p-adic digit by digit with the diagonal
// quadratic congruence pruning each digit level.  Hermitian input is
// realified (v = re; im) so one integer engine serves both scalar rings.

struct RealProblem {
  int k = 0;      // matrix dimension
  int ncols = 0;  // columns searched (J)
  int dim = 0;    // realified column dimension: k or 2k
  bool herm = false;
  std::vector<std::vector<Int>> gram;  // realified Gram, dim x dim
  std::vector<std::vector<Int>> kmat;  // hermitian Im pairing
  std::vector<Int> diag_target;        // scale * B_jj (real part), per column
  // cross targets, per (i < j): re and (hermitian) im parts
  std::vector<std::vector<Int>> cross_re, cross_im;
  const IntMatrix* qa = nullptr;
  const GaussMatrix* ha = nullptr;
};

RealProblem realify(const IntMatrix& a, const IntMatrix& b, const Int& scale) {
  RealProblem pb;
  pb.k = a.cols();
  pb.ncols = b.cols();
  pb.dim = pb.k;
  pb.herm = false;
  pb.qa = &a;
  pb.gram.assign(size_t(pb.dim), std::vector<Int>(size_t(pb.dim)));
  for (int i = 0; i < pb.k; ++i)
    for (int j = 0; j < pb.k; ++j) pb.gram[size_t(i)][size_t(j)] = a(i, j);
  pb.diag_target.resize(size_t(pb.ncols));
  pb.cross_re.assign(size_t(pb.ncols), std::vector<Int>(size_t(pb.ncols)));
  for (int j = 0; j < pb.ncols; ++j) {
    pb.diag_target[size_t(j)] = scale * b(j, j);
    for (int i = 0; i < pb.ncols; ++i) pb.cross_re[size_t(i)][size_t(j)] = scale * b(i, j);
  }
  return pb;
}

RealProblem realify(const GaussMatrix& a, const GaussMatrix& b, const Int& scale) {
  RealProblem pb;
  pb.k = a.cols();
  pb.ncols = b.cols();
  pb.dim = 2 * pb.k;
  pb.herm = true;
  pb.ha = &a;
  int k = pb.k;
  pb.gram.assign(size_t(pb.dim), std::vector<Int>(size_t(pb.dim), 0));
  pb.kmat.assign(size_t(pb.dim), std::vector<Int>(size_t(pb.dim), 0));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Int& s = a(i, j).re;
      const Int& t = a(i, j).im;
      pb.gram[size_t(i)][size_t(j)] = s;
      pb.gram[size_t(i + k)][size_t(j + k)] = s;
      pb.gram[size_t(i)][size_t(j + k)] = -t;
      pb.gram[size_t(i + k)][size_t(j)] = t;
      pb.kmat[size_t(i)][size_t(j)] = t;
      pb.kmat[size_t(i + k)][size_t(j + k)] = t;
      pb.kmat[size_t(i)][size_t(j + k)] = s;
      pb.kmat[size_t(i + k)][size_t(j)] = -s;
    }
  pb.diag_target.resize(size_t(pb.ncols));
  pb.cross_re.assign(size_t(pb.ncols), std::vector<Int>(size_t(pb.ncols)));
  pb.cross_im.assign(size_t(pb.ncols), std::vector<Int>(size_t(pb.ncols)));
  for (int j = 0; j < pb.ncols; ++j) {
    pb.diag_target[size_t(j)] = scale * b(j, j).re;
    for (int i = 0; i < pb.ncols; ++i) {
      pb.cross_re[size_t(i)][size_t(j)] = scale * b(i, j).re;
      pb.cross_im[size_t(i)][size_t(j)] = scale * b(i, j).im;
    }
  }
  return pb;
}

class LatticeSearch {
 public:
  LatticeSearch(const RealProblem& pb, const Int& p, const PadicSearchOptions& opts)
      : pb_(pb), p_(p), opts_(opts), ctx_(p, opts.precision) {
    pt_.resize(size_t(opts_.precision) + 1);
    pt_[0] = 1;
    for (int t = 1; t <= opts_.precision; ++t) pt_[size_t(t)] = pt_[size_t(t) - 1] * p;
    pl_ = long(p.get_si());
    if (pl_ < 2 || pl_ > 64) throw std::invalid_argument("padic search: prime out of range");
  }

  PadicSearchStats run(const std::function<void(const std::vector<std::vector<Int>>&)>& emit) {
    emit_ = &emit;
    cols_.assign(size_t(pb_.ncols), std::vector<Int>(size_t(pb_.dim), 0));
    search_column(0);
    stats_.exhausted = !stats_.budget_hit && !stopped_;
    return stats_;
  }

 private:
  bool tick() {
    ++stats_.nodes;
    if (opts_.node_budget && stats_.nodes > opts_.node_budget) {
      stats_.budget_hit = true;
      return false;
    }
    return true;
  }

  // v^t G w over the realified Gram
  Int pair(const std::vector<Int>& v, const std::vector<Int>& w) const {
    Int s = 0;
    for (int i = 0; i < pb_.dim; ++i) {
      if (v[size_t(i)] == 0) continue;
      Int row = 0;
      for (int j = 0; j < pb_.dim; ++j) row += pb_.gram[size_t(i)][size_t(j)] * w[size_t(j)];
      s += v[size_t(i)] * row;
    }
    return s;
  }

  void search_column(int j) {
    if (stopped_ || stats_.budget_hit) return;
    if (j == pb_.ncols) {
      (*emit_)(cols_);
      // callers flip stopped_ through stop()
      if (stop_request_) stopped_ = true;
      return;
    }
    // cross rows against fixed columns
    std::vector<std::vector<Int>> rows;
    std::vector<Int> rhs;
    for (int i = 0; i < j; ++i) {
      std::vector<Int> row(size_t(pb_.dim), 0);
      for (int x = 0; x < pb_.dim; ++x)
        for (int l = 0; l < pb_.dim; ++l)
          row[size_t(x)] += pb_.gram[size_t(l)][size_t(x)] * cols_[size_t(i)][size_t(l)];
      rows.push_back(std::move(row));
      rhs.push_back(pb_.cross_re[size_t(i)][size_t(j)]);
      if (pb_.herm) {
        std::vector<Int> row2(size_t(pb_.dim), 0);
        for (int x = 0; x < pb_.dim; ++x)
          for (int l = 0; l < pb_.dim; ++l)
            row2[size_t(x)] += pb_.kmat[size_t(l)][size_t(x)] * cols_[size_t(i)][size_t(l)];
        rows.push_back(std::move(row2));
        rhs.push_back(pb_.cross_im[size_t(i)][size_t(j)]);
      }
    }
    // residue solutions of rows * v = rhs (mod p^c) form v0 + lattice
    size_t dim = size_t(pb_.dim);
    const Int& m = ctx_.m;
    std::vector<Int> v0(dim, 0);
    std::vector<std::vector<Int>> gens;
    if (rows.empty()) {
      // unconstrained column: the solution lattice is all of Z^dim
      for (size_t x = 0; x < dim; ++x) {
        std::vector<Int> g(dim, 0);
        g[x] = 1;
        gens.push_back(std::move(g));
      }
    } else {
      // solutions of rows * v = rhs (mod p^c): kernel of [rows | m I]
      // projected to the v block, shifted by a particular solution
      size_t r = rows.size();
      std::vector<std::vector<Int>> aug(r, std::vector<Int>(dim + r, 0));
      for (size_t i = 0; i < r; ++i) {
        for (size_t x = 0; x < dim; ++x) aug[i][x] = rows[i][x];
        aug[i][dim + i] = m;
      }
      std::vector<Int> sol;
      std::vector<std::vector<Int>> ker;
      if (!solve_integer_system(aug, rhs, &sol, &ker)) return;  // no candidates
      for (size_t x = 0; x < dim; ++x) v0[x] = ctx_.reduce(sol[x]);
      for (const auto& kv : ker) {
        std::vector<Int> g(dim);
        for (size_t x = 0; x < dim; ++x) g[x] = kv[x];
        gens.push_back(std::move(g));
      }
      for (size_t x = 0; x < dim; ++x) {
        std::vector<Int> g(dim, 0);
        g[x] = m;
        gens.push_back(std::move(g));
      }
    }
    std::vector<std::vector<Int>> h = hnf_lower_triangular(gens, dim);
    // digit caps: t_i ranges over [0, m / d_i), a power of p
    std::vector<int> digits(dim, 0);
    for (size_t x = 0; x < dim; ++x) {
      Int cap = exact_div(m, h[x][x]);
      int dcount = 0;
      while (cap > 1) {
        cap = exact_div(cap, p_);
        ++dcount;
      }
      digits[x] = dcount;
    }
    int max_digits = 0;
    for (size_t x = 0; x < dim; ++x) max_digits = std::max(max_digits, digits[x]);

    std::vector<Int>& v = cols_[size_t(j)];
    v = v0;
    if (max_digits == 0) {
      if (column_complete_ok(j)) search_column(j + 1);
      return;
    }
    level(j, h, digits, 0, 0);
  }

  bool diag_ok(int j, int prec_exp) const {
    const Int& mod = pt_[size_t(prec_exp)];
    return (pair(cols_[size_t(j)], cols_[size_t(j)]) - pb_.diag_target[size_t(j)]) % mod == 0;
  }

  bool column_complete_ok(int j) {
    if (!diag_ok(j, opts_.precision)) return false;
    for (auto& x : cols_[size_t(j)]) x = ctx_.reduce(x);
    return true;
  }

  // assign digit level s across branching coordinates starting at coord i
  void level(int j, const std::vector<std::vector<Int>>& h, const std::vector<int>& digits,
             int s, size_t i) {
    if (stopped_ || stats_.budget_hit) return;
    size_t dim = size_t(pb_.dim);
    while (i < dim && digits[i] <= s) ++i;
    if (i == dim) {
      if (!diag_ok(j, s + 1)) return;
      bool more = false;
      for (size_t x = 0; x < dim; ++x)
        if (digits[x] > s + 1) { more = true; break; }
      if (s + 1 < opts_.precision && more) {
        level(j, h, digits, s + 1, 0);
      } else {
        std::vector<Int> saved = cols_[size_t(j)];
        if (column_complete_ok(j)) search_column(j + 1);
        cols_[size_t(j)] = saved;
      }
      return;
    }
    if (!tick()) return;
    long order[64];
    for (long d = 0; d < pl_; ++d) order[d] = d;
    if (opts_.seed) {
      SplitMix rng(derive_stream(opts_.seed, (uint64_t(j) << 40) ^ (uint64_t(s) << 24) ^
                                                 (uint64_t(i) << 8)));
      for (long d = pl_; d > 1; --d) std::swap(order[d - 1], order[rng.next() % uint64_t(d)]);
    }
    std::vector<Int>& v = cols_[size_t(j)];
    const Int step = pt_[size_t(s)];
    // v += digit * p^s * h_i, walking digit deltas to keep updates O(dim)
    long cur = 0;
    for (long idx = 0; idx < pl_; ++idx) {
      long d = order[idx];
      long delta = d - cur;
      if (delta != 0) {
        Int f = step * delta;
        for (size_t x = i; x < size_t(pb_.dim); ++x) v[x] += f * h[i][x];
      }
      cur = d;
      level(j, h, digits, s, i + 1);
      if (stopped_ || stats_.budget_hit) break;
    }
    if (cur != 0) {
      Int f = step * cur;
      for (size_t x = i; x < size_t(pb_.dim); ++x) v[x] -= f * h[i][x];
    }
  }

 public:
  void request_stop() { stop_request_ = true; }
  PadicSearchStats stats_;

 private:
  const RealProblem& pb_;
  Int p_;
  PadicSearchOptions opts_;
  ModCtx ctx_;
  const std::function<void(const std::vector<std::vector<Int>>&)>* emit_ = nullptr;
  std::vector<Int> pt_;
  long pl_ = 2;
  std::vector<std::vector<Int>> cols_;
  bool stopped_ = false;
  bool stop_request_ = false;
};

template <class S>
Matrix<S> assemble(const RealProblem& pb, const std::vector<std::vector<Int>>& cols);

template <>
IntMatrix assemble<Int>(const RealProblem& pb, const std::vector<std::vector<Int>>& cols) {
  IntMatrix m(pb.k, pb.ncols);
  for (int j = 0; j < pb.ncols; ++j)
    for (int i = 0; i < pb.k; ++i) m(i, j) = cols[size_t(j)][size_t(i)];
  return m;
}

template <>
GaussMatrix assemble<GaussianInt>(const RealProblem& pb,
                                  const std::vector<std::vector<Int>>& cols) {
  GaussMatrix m(pb.k, pb.ncols);
  for (int j = 0; j < pb.ncols; ++j)
    for (int i = 0; i < pb.k; ++i)
      m(i, j) = GaussianInt(cols[size_t(j)][size_t(i)], cols[size_t(j)][size_t(i + pb.k)]);
  return m;
}

bool det_gate(const IntMatrix& m, const PadicSearchOptions& opts, const ModCtx& ctx) {
  using DM = PadicSearchOptions::DetMode;
  if (opts.det_mode == DM::Any) return true;
  Int d = ctx.reduce(determinant(m));
  if (opts.det_mode == DM::Unit) return ctx.is_unit(d);
  return d == ctx.reduce(opts.det_target);
}
bool det_gate(const GaussMatrix& m, const PadicSearchOptions& opts, const ModCtx& ctx) {
  using DM = PadicSearchOptions::DetMode;
  if (opts.det_mode == DM::Any) return true;
  GaussianInt d = ctx.reduce(determinant(m));
  if (opts.det_mode == DM::Unit) return ctx.is_unit(d);
  return d.im == 0 && d.re == ctx.reduce(opts.det_target);
}

bool unit_content_gate(const std::vector<std::vector<Int>>& cols, const Int& p) {
  for (const auto& c : cols)
    for (const Int& x : c)
      if (x % p != 0) return true;
  return false;
}

template <class S>
PadicSearchStats search_impl(const Matrix<S>& a, const Matrix<S>& b, const Int& scale,
                             const Int& p, PadicSearchOptions opts, std::vector<Matrix<S>>& out) {
  if (opts.det_mode == PadicSearchOptions::DetMode::ScaledPower && opts.det_target == 0) {
    Int n;
    mpz_sqrt(n.get_mpz_t(), scale.get_mpz_t());
    if (n * n != scale) throw std::invalid_argument("padic search: scale must be a square");
    opts.det_target = pow_int(n, unsigned(a.cols()));
  }
  RealProblem pb = realify(a, b, scale);
  ModCtx ctx(p, opts.precision);
  LatticeSearch ls(pb, p, opts);
  auto emit = [&](const std::vector<std::vector<Int>>& cols) {
    if (opts.require_unit_content && !unit_content_gate(cols, p)) return;
    Matrix<S> m = assemble<S>(pb, cols);
    if (pb.k == pb.ncols && !det_gate(m, opts, ctx)) return;
    out.push_back(std::move(m));
    if (opts.max_solutions && out.size() >= opts.max_solutions) ls.request_stop();
  };
  return ls.run(emit);
}

}  // namespace

PadicSearchStats padic_isometry_search(const IntMatrix& a, const IntMatrix& b, const Int& scale,
                                       const Int& p, const PadicSearchOptions& opts,
                                       std::vector<IntMatrix>& out) {
  return search_impl(a, b, scale, p, opts, out);
}

PadicSearchStats padic_isometry_search(const GaussMatrix& a, const GaussMatrix& b,
                                       const Int& scale, const Int& p,
                                       const PadicSearchOptions& opts,
                                       std::vector<GaussMatrix>& out) {
  return search_impl(a, b, scale, p, opts, out);
}

// ---------------------------------------------------------------------------
// Newton lifting, one verified precision step at a time

namespace {

IntMatrix residue_congruence(const IntMatrix& a, const IntMatrix& b, const Int& scale,
                             const IntMatrix& m, const ModCtx& ctx) {
  return ctx.reduce(m.transpose() * a * m - b.scaled(scale));
}

GaussMatrix residue_congruence(const GaussMatrix& a, const GaussMatrix& b, const Int& scale,
                               const GaussMatrix& m, const ModCtx& ctx) {
  return ctx.reduce(m.ctranspose() * a * m - b.scaled(GaussianInt(scale)));
}

bool is_zero_matrix(const IntMatrix& m) {
  for (const auto& x : m.flat())
    if (x != 0) return false;
  return true;
}
bool is_zero_matrix(const GaussMatrix& m) {
  for (const auto& x : m.flat())
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace

std::optional<NewtonLift> newton_lift(const IntMatrix& a, const IntMatrix& b, const Int& scale,
                                      const Int& p, const IntMatrix& m0, int c0, int target) {
  int k = a.cols();
  IntMatrix m = m0;
  int tmax = 0;
  for (int c = c0; c < target; ++c) {
    ModCtx next(p, c + 1);
    IntMatrix cres = residue_congruence(a, b, scale, m, next);
    if (is_zero_matrix(cres)) {
      m = next.reduce(m);
      continue;
    }
    IntMatrix am = next.reduce(a * m);
    // equations C_rs (r <= s), variables M_ij;
    // dC_rs/dM_ij = [j==r](A M)_is + [j==s](A M)_ir
    size_t neq = size_t(k) * (k + 1) / 2, nvar = size_t(k) * k;
    std::vector<std::vector<Int>> jac(neq, std::vector<Int>(nvar, 0));
    std::vector<Int> rhs(neq);
    size_t row = 0;
    for (int r = 0; r < k; ++r)
      for (int s = r; s < k; ++s, ++row) {
        rhs[row] = next.reduce(-cres(r, s));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) {
            Int v = 0;
            if (j == r) v += am(i, s);
            if (j == s) v += am(i, r);
            jac[row][size_t(i) * k + j] = next.reduce(v);
          }
      }
    auto sol = solve_linear_padic(next, std::move(jac), std::move(rhs));
    if (!sol) return std::nullopt;
    tmax = std::max(tmax, sol->max_pivot_val);
    IntMatrix m2(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m2(i, j) = next.reduce(m(i, j) + sol->x[size_t(i) * k + j]);
    if (!is_zero_matrix(residue_congruence(a, b, scale, m2, next))) return std::nullopt;
    m = m2;
  }
  ModCtx fin(p, target);
  m = fin.reduce(m);
  if (!is_zero_matrix(residue_congruence(a, b, scale, m, fin))) return std::nullopt;
  NewtonLift out;
  out.witness = m;
  out.precision = target;
  out.jacobian_val = tmax;
  out.base_precision = c0;
  return out;
}

std::optional<NewtonLift> newton_lift(const GaussMatrix& a, const GaussMatrix& b,
                                      const Int& scale, const Int& p, const GaussMatrix& m0,
                                      int c0, int target) {
  int k = a.cols();
  GaussMatrix m = m0;
  int tmax = 0;
  for (int c = c0; c < target; ++c) {
    ModCtx next(p, c + 1);
    GaussMatrix cres = residue_congruence(a, b, scale, m, next);
    if (is_zero_matrix(cres)) {
      m = next.reduce(m);
      continue;
    }
    GaussMatrix am = next.reduce(a * m);         // A M
    GaussMatrix ma = next.reduce(m.ctranspose() * a);  // M^* A
    // real equations: Re C_rs (r <= s) and Im C_rs (r < s); real variables
    // Re M_ij, Im M_ij.  dC = D^* A M + M^* A D with D = E_ij or i E_ij.
    std::vector<std::pair<std::pair<int, int>, bool>> eqs;  // ((r,s), imag?)
    for (int r = 0; r < k; ++r)
      for (int s = r; s < k; ++s) {
        eqs.push_back({{r, s}, false});
        if (r != s) eqs.push_back({{r, s}, true});
      }
    size_t neq = eqs.size(), nvar = 2 * size_t(k) * k;
    std::vector<std::vector<Int>> jac(neq, std::vector<Int>(nvar, 0));
    std::vector<Int> rhs(neq);
    for (size_t e = 0; e < neq; ++e) {
      auto [rs, imag] = eqs[e];
      const GaussianInt& cv = cres(rs.first, rs.second);
      rhs[e] = next.reduce(imag ? -cv.im : -cv.re);
    }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int part = 0; part < 2; ++part) {
          size_t var = 2 * (size_t(i) * k + j) + size_t(part);
          GaussianInt unit = part == 0 ? GaussianInt(Int(1), Int(0)) : GaussianInt(Int(0), Int(1));
          for (size_t e = 0; e < neq; ++e) {
            auto [rs, imag] = eqs[e];
            int r = rs.first, s = rs.second;
            GaussianInt v(Int(0), Int(0));
            if (j == r) v += unit.conj() * am(i, s);
            if (j == s) v += ma(r, i) * unit;
            v = next.reduce(v);
            jac[e][var] = imag ? v.im : v.re;
          }
        }
    auto sol = solve_linear_padic(next, std::move(jac), std::move(rhs));
    if (!sol) return std::nullopt;
    tmax = std::max(tmax, sol->max_pivot_val);
    GaussMatrix m2(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        size_t var = 2 * (size_t(i) * k + j);
        m2(i, j) =
            next.reduce(GaussianInt(m(i, j).re + sol->x[var], m(i, j).im + sol->x[var + 1]));
      }
    if (!is_zero_matrix(residue_congruence(a, b, scale, m2, next))) return std::nullopt;
    m = m2;
  }
  ModCtx fin(p, target);
  m = fin.reduce(m);
  if (!is_zero_matrix(residue_congruence(a, b, scale, m, fin))) return std::nullopt;
  NewtonLift out;
  out.gwitness = m;
  out.precision = target;
  out.jacobian_val = tmax;
  out.base_precision = c0;
  return out;
}

// ---------------------------------------------------------------------------
// local solvability

int local_search_precision(const Form& f, const Int& n, const Int& p) {
  unsigned v = (n % p == 0) ? valuation(n, p) : 0;
  Int d = f.det();
  if (d < 0) d = -d;
  int e0 = int(2 * v + valuation(2 * d, p) + 1);
  if (p == 2) e0 += 2;  // sweep bound at 2 carries extra slack, not proven sharp
  return e0;
}

namespace {

bool verify_quadratic_witness(const Form& f, const Int& n, const Int& p, const IntMatrix& w,
                              int e) {
  ModCtx ctx(p, e);
  if (!is_zero_matrix(residue_congruence(f.qgram, f.qgram, n * n, w, ctx))) return false;
  bool unit = false;
  for (const auto& x : w.flat())
    if (x % p != 0) { unit = true; break; }
  if (!unit) return false;
  return ctx.reduce(determinant(w)) == ctx.reduce(pow_int(n, unsigned(f.rank())));
}

bool verify_hermitian_witness(const Form& f, const Int& n, const Int& p, const GaussMatrix& w,
                              int e) {
  ModCtx ctx(p, e);
  if (!is_zero_matrix(residue_congruence(f.hgram, f.hgram, n * n, w, ctx))) return false;
  bool unit = false;
  for (const auto& x : w.flat())
    if (x.re % p != 0 || x.im % p != 0) { unit = true; break; }
  if (!unit) return false;
  GaussianInt d = ctx.reduce(determinant(w));
  return d.im == 0 && d.re == ctx.reduce(pow_int(n, unsigned(f.rank())));
}

// enough precision to pin the sign of det = +-n^k and to cover the sweep bound
int witness_precision(const Form& f, const Int& n, const Int& p) {
  unsigned v = (n % p == 0) ? valuation(n, p) : 0;
  int sign_pin = int(unsigned(f.rank()) * v + valuation(Int(2), p) + 1);
  return std::max(local_search_precision(f, n, p) + 2, sign_pin + 1);
}

LocalVerdict scalar_witness(const Form& f, const Int& n, const Int& p) {
  LocalVerdict v;
  v.p = p;
  v.n = n;
  v.method = "scalar";
  int e = witness_precision(f, n, p);
  ModCtx ctx(p, e);
  v.witness_precision = e;
  if (f.is_quadratic()) {
    v.witness = ctx.reduce(IntMatrix::scalar(f.rank(), n));
    if (!verify_quadratic_witness(f, n, p, v.witness, e))
      throw std::logic_error("scalar witness failed verification");
  } else {
    v.gwitness = ctx.reduce(GaussMatrix::scalar(f.rank(), GaussianInt(n)));
    if (!verify_hermitian_witness(f, n, p, v.gwitness, e))
      throw std::logic_error("scalar witness failed verification");
  }
  v.outcome = LocalVerdict::Outcome::Yes;
  return v;
}

// explicit witness  g (n I + (n/p^m)(E_23 - E_41)) g^{-1}  through the
// hyperbolic reduction basis; sup-norm exponent m = v_p(n)
LocalVerdict hyperbolic_witness(const Form& f, const Int& n, const Int& p) {
  LocalVerdict v;
  v.p = p;
  v.n = n;
  v.method = "hyperbolic";
  int k = f.rank();
  unsigned m = valuation(n, p);
  int e = witness_precision(f, n, p);
  ModCtx ctx(p, e);
  HyperbolicReduction hr = hyperbolic_reduce(f, p, e);

  Int npm = exact_div(n, pow_int(p, m));
  IntMatrix x = IntMatrix::scalar(k, n);
  x(1, 2) = ctx.reduce(x(1, 2) + npm);
  x(3, 0) = ctx.reduce(x(3, 0) - npm);
  const IntMatrix& g = hr.basis.g;
  IntMatrix w = ctx.reduce(g * x * ctx.inv(g));
  if (!verify_quadratic_witness(f, n, p, w, e))
    throw std::logic_error("hyperbolic witness failed verification");
  v.witness = w;
  v.witness_precision = e;
  v.outcome = LocalVerdict::Outcome::Yes;
  return v;
}

// column pre-sweep: if no single column with a unit coordinate satisfies its
// diagonal congruence mod p^c, no admissible matrix exists at all
template <class S>
bool no_unit_column(const Matrix<S>& gram, const Int& n, const Int& p, int c,
                    uint64_t node_budget, bool* conclusive, uint64_t* nodes) {
  int k = gram.cols();
  *conclusive = true;
  std::vector<S> seen;
  for (int j = 0; j < k; ++j) {
    bool dup = false;
    for (const S& t : seen)
      if (t == gram(j, j)) { dup = true; break; }
    if (dup) continue;
    seen.push_back(gram(j, j));

    Matrix<S> b1(1, 1);
    b1(0, 0) = gram(j, j);
    std::vector<Matrix<S>> found;
    PadicSearchOptions o;
    o.precision = c;
    o.require_unit_content = true;
    o.det_mode = PadicSearchOptions::DetMode::Any;
    o.max_solutions = 1;
    o.node_budget = node_budget;
    PadicSearchStats st = padic_isometry_search(gram, b1, n * n, p, o, found);
    *nodes += st.nodes;
    if (!found.empty()) return false;
    if (!st.exhausted) {
      *conclusive = false;
      return false;
    }
  }
  return true;
}

// pool of isometries of the form mod p^e (det a unit), used as mixing
// factors by the block-product construction
std::vector<IntMatrix> isometry_pool(const Form& f, const Int& p, int e, uint64_t seed,
                                     size_t want) {
  int c = std::min(e, p == 2 ? 4 : 2);
  PadicSearchOptions o;
  o.precision = c;
  o.require_unit_content = false;
  o.det_mode = PadicSearchOptions::DetMode::Unit;
  o.max_solutions = want;
  o.node_budget = 4'000'000;
  o.seed = seed;
  std::vector<IntMatrix> base;
  padic_isometry_search(f.qgram, f.qgram, Int(1), p, o, base);
  std::vector<IntMatrix> out;
  for (const IntMatrix& t0 : base) {
    auto lift = newton_lift(f.qgram, f.qgram, Int(1), p, t0, c, e);
    if (lift) out.push_back(lift->witness);
  }
  return out;
}

// witnesses of valuation v >= 2 are composed from a denominator-p block:
// W = (n / p^v) * W1 U1 W1 U2 ... W1 with isometries U_i mixed in until the
// content and determinant gates pass
std::optional<IntMatrix> block_product_witness(const Form& f, const Int& n, const Int& p,
                                               unsigned v, int e, uint64_t seed,
                                               const IntMatrix& base_block) {
  ModCtx ctx(p, e);
  std::vector<IntMatrix> pool = isometry_pool(f, p, e, derive_stream(seed, 0xb10c), 12);
  if (pool.empty()) return std::nullopt;
  Int unit_part = exact_div(n, pow_int(p, v));
  SplitMix rng(derive_stream(seed, 0xb10d));
  int k = f.rank();
  Int detq = ctx.reduce(pow_int(n, unsigned(k)));
  for (int attempt = 0; attempt < 400; ++attempt) {
    IntMatrix w = base_block;
    for (unsigned i = 1; i < v; ++i) {
      const IntMatrix& u = pool[rng.next() % pool.size()];
      w = ctx.mul(ctx.mul(w, u), base_block);
    }
    w = ctx.reduce(w.scaled(unit_part));
    bool unit = false;
    for (const auto& x : w.flat())
      if (x % p != 0) { unit = true; break; }
    if (!unit) continue;
    if (ctx.reduce(determinant(w)) != detq) continue;
    return w;
  }
  return std::nullopt;
}

// improper det fix: find T with T^t Q T = Q mod p^e and det T = -1, so that
// a lifted solution with det -n^k becomes one with det +n^k
bool fix_improper(const Form& f, const Int& p, int e, const IntMatrix& w, uint64_t seed,
                  IntMatrix* out) {
  int c = p == 2 ? 3 : 2;
  c = std::min(c, e);
  PadicSearchOptions o;
  o.precision = c;
  o.require_unit_content = false;
  o.det_mode = PadicSearchOptions::DetMode::Target;
  o.det_target = -1;
  o.max_solutions = 8;
  o.node_budget = 2'000'000;
  o.seed = seed;
  std::vector<IntMatrix> sols;
  padic_isometry_search(f.qgram, f.qgram, Int(1), p, o, sols);
  for (const IntMatrix& t0 : sols) {
    auto lift = newton_lift(f.qgram, f.qgram, Int(1), p, t0, c, e);
    if (!lift) continue;
    ModCtx ctx(p, e);
    *out = ctx.reduce(w * lift->witness);
    return true;
  }
  return false;
}

}  // namespace

LocalVerdict local_solvable(const Form& f, const Int& n, const Int& p, const LocalBudget& budget) {
  if (!is_prime(p)) throw std::invalid_argument("local_solvable: p must be prime");
  if (n < 1) throw std::invalid_argument("local_solvable: n must be >= 1");

  if (n % p != 0) return scalar_witness(f, n, p);

  if (f.is_quadratic() && f.rank() >= 5 && p != 2) {
    bool good = true;
    for (const Int& q : bad_primes(f))
      if (q == p) { good = false; break; }
    if (good) return hyperbolic_witness(f, n, p);
  }

  LocalVerdict v;
  v.p = p;
  v.n = n;
  int e0 = budget.max_precision > 0 ? budget.max_precision : local_search_precision(f, n, p);
  int e_w = witness_precision(f, n, p);
  // below 2 v_p(n) + 1 digits the congruence collapses onto its singular
  // locus and the search mostly meets non-liftable points
  unsigned vn = valuation(n, p);
  int c_start = std::min(e0, std::max(p == 2 ? 3 : 2, int(2 * vn + 1)));
  uint64_t nodes_used = 0;

  // cheap emptiness gate first
  {
    bool conclusive = false;
    bool empty = f.is_quadratic()
                     ? no_unit_column(f.qgram, n, p, c_start, budget.node_budget, &conclusive,
                                      &nodes_used)
                     : no_unit_column(f.hgram, n, p, c_start, budget.node_budget, &conclusive,
                                      &nodes_used);
    if (conclusive && empty) {
      v.outcome = LocalVerdict::Outcome::No;
      v.method = "column-sweep";
      v.exhausted_precision = c_start;
      return v;
    }
  }

  // valuations >= 2 first try the block-product route through a
  // denominator-p witness; the digit search degrades quickly with v_p(n)
  
  if (f.is_quadratic() && vn >= 2) {
    LocalBudget sub = budget;
    LocalVerdict base = local_solvable(f, p, p, sub);
    if (base.outcome == LocalVerdict::Outcome::Yes) {
      IntMatrix block = base.witness;
      if (base.witness_precision < e_w) {
        auto lifted = newton_lift(f.qgram, f.qgram, p * p, p, block, base.witness_precision, e_w);
        block = lifted ? lifted->witness : IntMatrix();
      } else if (base.witness_precision > e_w) {
        block = ModCtx(p, e_w).reduce(block);
      }
      if (block.rows() == f.rank()) {
        auto w = block_product_witness(f, n, p, vn, e_w, budget.seed, block);
        if (w && verify_quadratic_witness(f, n, p, *w, e_w)) {
          v.outcome = LocalVerdict::Outcome::Yes;
          v.method = "block-product";
          v.witness = *w;
          v.witness_precision = e_w;
          v.cert = base.cert;
          return v;
        }
      }
    }
  }

  for (int c = c_start; c <= e0; ++c) {
    if (budget.node_budget && nodes_used >= budget.node_budget) break;
    PadicSearchOptions opts;
    opts.precision = c;
    opts.require_unit_content = true;
    opts.det_mode = PadicSearchOptions::DetMode::ScaledPower;
    opts.max_solutions = 12;
    opts.node_budget = budget.node_budget ? budget.node_budget - nodes_used : 0;
    opts.seed = budget.seed;

    if (f.is_quadratic()) {
      std::vector<IntMatrix> sols;
      PadicSearchStats st = padic_isometry_search(f.qgram, f.qgram, n * n, p, opts, sols);
      nodes_used += st.nodes;
      if (sols.empty() && st.exhausted) {
        v.outcome = LocalVerdict::Outcome::No;
        v.method = "matrix-sweep";
        v.exhausted_precision = c;
        return v;
      }
      if (sols.empty() && st.budget_hit) break;
      for (const IntMatrix& m0 : sols) {
        auto lift = newton_lift(f.qgram, f.qgram, n * n, p, m0, c, e_w);
        if (!lift) continue;
        IntMatrix w = lift->witness;
        if (!verify_quadratic_witness(f, n, p, w, e_w)) {
          IntMatrix fixed;
          if (!fix_improper(f, p, e_w, w, budget.seed, &fixed) ||
              !verify_quadratic_witness(f, n, p, fixed, e_w))
            continue;
          w = fixed;
        }
        v.outcome = LocalVerdict::Outcome::Yes;
        v.method = "search+lift";
        v.witness = w;
        v.witness_precision = e_w;
        v.cert = LiftCertificate{lift->base_precision, lift->jacobian_val, lift->precision};
        return v;
      }
    } else {
      std::vector<GaussMatrix> sols;
      PadicSearchStats st = padic_isometry_search(f.hgram, f.hgram, n * n, p, opts, sols);
      nodes_used += st.nodes;
      if (sols.empty() && st.exhausted) {
        v.outcome = LocalVerdict::Outcome::No;
        v.method = "matrix-sweep";
        v.exhausted_precision = c;
        return v;
      }
      if (sols.empty() && st.budget_hit) break;
      for (const GaussMatrix& m0 : sols) {
        auto lift = newton_lift(f.hgram, f.hgram, n * n, p, m0, c, e_w);
        if (!lift) continue;
        if (!verify_hermitian_witness(f, n, p, lift->gwitness, e_w)) continue;
        v.outcome = LocalVerdict::Outcome::Yes;
        v.method = "search+lift";
        v.gwitness = lift->gwitness;
        v.witness_precision = e_w;
        v.cert = LiftCertificate{lift->base_precision, lift->jacobian_val, lift->precision};
        return v;
      }
    }
  }

  v.outcome = LocalVerdict::Outcome::Unknown;
  v.reason = "search budget or precision ladder exhausted without certificate";
  return v;
}

LocalProfile local_profile(const Form& f, const Int& n, const LocalBudget& budget) {
  if (n < 1) throw std::invalid_argument("local_profile: n must be >= 1");
  LocalProfile prof;
  prof.n = n;
  prof.member = true;
  for (const Int& p : prime_factors(n)) {
    prof.verdicts.push_back(local_solvable(f, n, p, budget));
    const LocalVerdict& v = prof.verdicts.back();
    if (v.outcome == LocalVerdict::Outcome::Unknown) prof.undecided = true;
    if (v.outcome != LocalVerdict::Outcome::Yes) prof.member = false;
  }
  return prof;
}

}  // namespace scaliso
