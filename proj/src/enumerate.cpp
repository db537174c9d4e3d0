#include "scaliso/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace scaliso {

namespace {

using Vec = std::vector<Int>;
using QVec = std::vector<mpq_class>;

// ---------------------------------------------------------------------------
// exact linear algebra helpers (dimensions are tiny)

// solve SPD rational system G z = w by Gaussian elimination
QVec solve_spd_rational(std::vector<QVec> g, QVec w) {
  size_t d = g.size();
  for (size_t s = 0; s < d; ++s) {
    size_t piv = s;
    while (piv < d && g[piv][s] == 0) ++piv;
    if (piv == d) throw std::logic_error("solve_spd_rational: singular");
    std::swap(g[s], g[piv]);
    std::swap(w[s], w[piv]);
    for (size_t i = 0; i < d; ++i) {
      if (i == s || g[i][s] == 0) continue;
      mpq_class f = g[i][s] / g[s][s];
      for (size_t j = s; j < d; ++j) g[i][j] -= f * g[s][j];
      w[i] -= f * w[s];
    }
  }
  QVec z(d);
  for (size_t i = 0; i < d; ++i) z[i] = w[i] / g[i][i];
  return z;
}

// ---------------------------------------------------------------------------
// the per-column ellipsoid enumerator

struct ColumnProblem {
  // enumerate x in Z^D with x^t G x = N and rows.a x = rows.b
  const std::vector<Vec>* gram;  // D x D
  Int target;                    // N
  std::vector<Vec> rows;
  Vec rhs;
};

class ColumnEnumerator {
 public:
  ColumnEnumerator(const ColumnProblem& pb, uint64_t node_budget, uint64_t* nodes,
                   bool* budget_hit)
      : pb_(pb), budget_(node_budget), nodes_(nodes), budget_hit_(budget_hit) {}

  // calls fn for each exact solution x; fn returns false to stop everything
  bool enumerate(const std::function<bool(const Vec&)>& fn) {
    const std::vector<Vec>& g = *pb_.gram;
    size_t dim = g.size();
    Vec x0(dim, 0);
    std::vector<Vec> kernel;
    if (pb_.rows.empty()) {
      kernel.clear();
      for (size_t j = 0; j < dim; ++j) {
        Vec k(dim, 0);
        k[j] = 1;
        kernel.push_back(std::move(k));
      }
    } else if (!solve_integer_system(pb_.rows, pb_.rhs, &x0, &kernel)) {
      return true;  // no integral solution of the cross conditions
    }
    size_t d = kernel.size();
    if (d == 0) {
      // fully determined point
      if (quad_value(x0) == pb_.target) return fn(x0);
      return true;
    }

    // G' = K^t G K, w = K^t G x0, S0 = x0^t G x0
    std::vector<Vec> gk(dim, Vec(d, 0));
    for (size_t i = 0; i < dim; ++i)
      for (size_t l = 0; l < dim; ++l) {
        if (g[i][l] == 0) continue;
        for (size_t j = 0; j < d; ++j) gk[i][j] += g[i][l] * kernel[j][l];
      }
    std::vector<Vec> gp(d, Vec(d, 0));
    Vec w(d, 0);
    for (size_t j = 0; j < d; ++j) {
      for (size_t j2 = 0; j2 < d; ++j2)
        for (size_t i = 0; i < dim; ++i) gp[j][j2] += kernel[j][i] * gk[i][j2];
      for (size_t i = 0; i < dim; ++i) w[j] += kernel[j][i] * quad_row(x0, i);
    }
    Int s0 = quad_value(x0);

    std::vector<QVec> gpq(d, QVec(d));
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) gpq[i][j] = mpq_class(gp[i][j]);
    QVec wq(d);
    for (size_t i = 0; i < d; ++i) wq[i] = mpq_class(w[i]);
    QVec zq = solve_spd_rational(gpq, wq);  // G' z = w; center = -z
    mpq_class r2q = mpq_class(Int(pb_.target - s0));
    for (size_t i = 0; i < d; ++i) r2q += wq[i] * zq[i];
    if (r2q < 0) return true;

    // floating Cholesky of G' with outward padding
    std::vector<std::vector<double>> rr(d, std::vector<double>(d, 0.0));
    {
      std::vector<std::vector<double>> m(d, std::vector<double>(d));
      for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) m[i][j] = gp[i][j].get_d();
      for (size_t i = 0; i < d; ++i) {
        double s = m[i][i];
        for (size_t l = 0; l < i; ++l) s -= rr[l][i] * rr[l][i];
        if (s <= 0) throw std::logic_error("column enumerator: sublattice Gram not definite");
        rr[i][i] = std::sqrt(s);
        for (size_t j = i + 1; j < d; ++j) {
          double t = m[i][j];
          for (size_t l = 0; l < i; ++l) t -= rr[l][i] * rr[l][j];
          rr[i][j] = t / rr[i][i];
        }
      }
    }
    std::vector<double> center(d);
    for (size_t i = 0; i < d; ++i) center[i] = -zq[i].get_d();
    double r2 = r2q.get_d();
    double pad = 1e-4 + 1e-9 * std::fabs(r2);

    // depth-first from the last coordinate; exact checks at the leaves
    std::vector<long long> y(d, 0);
    x_.assign(dim, 0);
    return descend(int(d) - 1, r2 + pad, center, rr, y, x0, kernel, fn);
  }

 private:
  Int quad_value(const Vec& x) const {
    Int s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * quad_row(x, i);
    return s;
  }
  Int quad_row(const Vec& x, size_t i) const {
    const std::vector<Vec>& g = *pb_.gram;
    Int s = 0;
    for (size_t j = 0; j < x.size(); ++j) s += g[i][j] * x[j];
    return s;
  }
  bool tick() {
    ++*nodes_;
    if (budget_ && *nodes_ > budget_) {
      *budget_hit_ = true;
      return false;
    }
    return true;
  }

  bool descend(int level, double rem, const std::vector<double>& center,
               const std::vector<std::vector<double>>& rr, std::vector<long long>& y,
               const Vec& x0, const std::vector<Vec>& kernel,
               const std::function<bool(const Vec&)>& fn) {
    if (*budget_hit_) return false;
    size_t d = center.size();
    double c = center[size_t(level)];
    for (size_t j = size_t(level) + 1; j < d; ++j)
      c -= (rr[size_t(level)][j] / rr[size_t(level)][size_t(level)]) * (double(y[j]) - center[j]);
    double q = rr[size_t(level)][size_t(level)] * rr[size_t(level)][size_t(level)];
    if (rem < 0) return true;
    double half = std::sqrt(std::max(0.0, rem / q)) + 1e-9;
    long long lo = (long long)std::ceil(c - half - 1e-9);
    long long hi = (long long)std::floor(c + half + 1e-9);
    if (level == 0) {
      // equality level: only the two roots can work; test a window around each
      double root = std::sqrt(std::max(0.0, rem / q));
      long long cand[10];
      int nc = 0;
      for (double rc : {c - root, c + root}) {
        long long base = (long long)std::llround(rc);
        for (long long v = base - 2; v <= base + 2; ++v) {
          if (v < lo || v > hi) continue;
          bool dup = false;
          for (int i = 0; i < nc; ++i)
            if (cand[i] == v) { dup = true; break; }
          if (!dup) cand[nc++] = v;
        }
      }
      std::sort(cand, cand + nc);
      for (int i = 0; i < nc; ++i) {
        if (!tick()) return false;
        y[0] = cand[i];
        if (!leaf(y, x0, kernel, fn)) return false;
        if (*budget_hit_) return false;
      }
      return true;
    }
    for (long long v = lo; v <= hi; ++v) {
      if (!tick()) return false;
      y[size_t(level)] = v;
      double dv = double(v) - c;
      if (!descend(level - 1, rem - q * dv * dv, center, rr, y, x0, kernel, fn)) return false;
      if (*budget_hit_) return false;
    }
    return true;
  }

  bool leaf(const std::vector<long long>& y, const Vec& x0, const std::vector<Vec>& kernel,
            const std::function<bool(const Vec&)>& fn) {
    size_t dim = x0.size(), d = kernel.size();
    for (size_t i = 0; i < dim; ++i) {
      Int s = x0[i];
      for (size_t j = 0; j < d; ++j) s += kernel[j][i] * Int((long)y[j]);
      x_[i] = s;
    }
    if (quad_value(x_) != pb_.target) return true;
    for (size_t rI = 0; rI < pb_.rows.size(); ++rI) {
      Int s = 0;
      for (size_t i = 0; i < dim; ++i) s += pb_.rows[rI][i] * x_[i];
      if (s != pb_.rhs[rI]) return true;
    }
    return fn(x_);
  }

  const ColumnProblem& pb_;
  uint64_t budget_;
  uint64_t* nodes_;
  bool* budget_hit_;
  Vec x_;
};

// ---------------------------------------------------------------------------
// matrix assembly

struct EngineContext {
  const Form* form;
  Int n;
  EnumOptions opts;
  int k = 0;       // matrix dimension
  int dim = 0;     // realified column dimension (k or 2k)
  bool herm = false;
  std::vector<Vec> gram;   // realified Gram, dim x dim
  std::vector<Vec> kmat;   // hermitian only: imaginary-part pairing
  std::vector<int> order;  // column processing order (descending diagonal)
  Vec diag_target;         // n^2 * (real) diagonal, in original indexing
  Int detq;                // n^k
};

EngineContext make_context(const Form& f, const Int& n, const EnumOptions& opts) {
  EngineContext cx;
  cx.form = &f;
  cx.n = n;
  cx.opts = opts;
  cx.k = f.rank();
  cx.herm = !f.is_quadratic();
  cx.dim = cx.herm ? 2 * cx.k : cx.k;
  cx.gram.assign(size_t(cx.dim), Vec(size_t(cx.dim), 0));
  if (!cx.herm) {
    for (int i = 0; i < cx.k; ++i)
      for (int j = 0; j < cx.k; ++j) cx.gram[size_t(i)][size_t(j)] = f.qgram(i, j);
  } else {
    // H = S + iA realifies to [[S, -A], [A, S]]; Im pairing is [[A, S], [-S, A]]
    cx.kmat.assign(size_t(cx.dim), Vec(size_t(cx.dim), 0));
    for (int i = 0; i < cx.k; ++i)
      for (int j = 0; j < cx.k; ++j) {
        const Int& s = f.hgram(i, j).re;
        const Int& a = f.hgram(i, j).im;
        cx.gram[size_t(i)][size_t(j)] = s;
        cx.gram[size_t(i + cx.k)][size_t(j + cx.k)] = s;
        cx.gram[size_t(i)][size_t(j + cx.k)] = -a;
        cx.gram[size_t(i + cx.k)][size_t(j)] = a;
        cx.kmat[size_t(i)][size_t(j)] = a;
        cx.kmat[size_t(i + cx.k)][size_t(j + cx.k)] = a;
        cx.kmat[size_t(i)][size_t(j + cx.k)] = s;
        cx.kmat[size_t(i + cx.k)][size_t(j)] = -s;
      }
  }
  cx.diag_target.resize(size_t(cx.k));
  for (int j = 0; j < cx.k; ++j) {
    Int gjj = f.is_quadratic() ? f.qgram(j, j) : f.hgram(j, j).re;
    cx.diag_target[size_t(j)] = n * n * gjj;
  }
  cx.order.resize(size_t(cx.k));
  for (int j = 0; j < cx.k; ++j) cx.order[size_t(j)] = j;
  std::stable_sort(cx.order.begin(), cx.order.end(), [&](int a, int b) {
    Int ga = f.is_quadratic() ? f.qgram(a, a) : f.hgram(a, a).re;
    Int gb = f.is_quadratic() ? f.qgram(b, b) : f.hgram(b, b).re;
    return ga > gb;  // tightest ellipsoids first
  });
  cx.detq = pow_int(n, unsigned(cx.k));
  return cx;
}

// cross-condition rows for the next column against an already fixed one
void add_cross_rows(const EngineContext& cx, const Vec& fixed, int fixed_orig, int next_orig,
                    std::vector<Vec>* rows, Vec* rhs) {
  size_t dim = size_t(cx.dim);
  Vec row(dim, 0);
  for (size_t i = 0; i < dim; ++i)
    for (size_t l = 0; l < dim; ++l) row[i] += cx.gram[l][i] * fixed[l];  // (G^t x) = Gx, G sym
  rows->push_back(row);
  if (!cx.herm) {
    rhs->push_back(cx.n * cx.n * cx.form->qgram(fixed_orig, next_orig));
  } else {
    rhs->push_back(cx.n * cx.n * cx.form->hgram(fixed_orig, next_orig).re);
    Vec row2(dim, 0);
    for (size_t i = 0; i < dim; ++i)
      for (size_t l = 0; l < dim; ++l) row2[i] += cx.kmat[l][i] * fixed[l];  // (K^t x)^t y = x^t K y
    rows->push_back(row2);
    rhs->push_back(cx.n * cx.n * cx.form->hgram(fixed_orig, next_orig).im);
  }
}

bool content_ok(const EngineContext& cx, const IntMatrix& m) {
  if (cx.opts.content_mode == ContentMode::Rational) return content_z(m) == 1;
  return content_z(m) == 1;  // no Gaussian alternative over Z
}
bool content_ok(const EngineContext& cx, const GaussMatrix& m) {
  if (cx.opts.content_mode == ContentMode::Rational) return content_z(m) == 1;
  GaussianInt g = content_gaussian(m);
  return g.norm() == 1;
}

bool det_ok(const EngineContext& cx, const IntMatrix& m) {
  Int d = determinant(m);
  if (d == cx.detq) return true;
  return cx.opts.include_improper && d == -cx.detq;
}
bool det_ok(const EngineContext& cx, const GaussMatrix& m) {
  GaussianInt d = determinant(m);
  if (d.im == 0 && d.re == cx.detq) return true;
  return cx.opts.include_improper && d.norm() == cx.detq * cx.detq;
}

bool verify_exact(const EngineContext& cx, const IntMatrix& m) {
  return m.transpose() * cx.form->qgram * m == cx.form->qgram.scaled(cx.n * cx.n);
}
bool verify_exact(const EngineContext& cx, const GaussMatrix& m) {
  return m.ctranspose() * cx.form->hgram * m == cx.form->hgram.scaled(GaussianInt(cx.n * cx.n));
}

class MatrixSearch {
 public:
  MatrixSearch(const EngineContext& cx, uint64_t budget)
      : cx_(cx), budget_(budget) {}

  uint64_t nodes = 0;
  bool budget_hit = false;
  uint64_t emitted = 0;

  // sinks: exactly one is used depending on the form kind
  std::function<bool(const IntMatrix&)> qsink;
  std::function<bool(const GaussMatrix&)> hsink;

  // enumerate with the first (processing-order) column fixed to `first`,
  // or everything when first == nullptr
  void run(const Vec* first) {
    cols_.assign(size_t(cx_.k), Vec());
    if (first) {
      cols_[0] = *first;
      recurse(1);
    } else {
      recurse(0);
    }
  }

  // materialize candidates for processing position `pos` given fixed prefix
  std::vector<Vec> candidates(int pos) {
    std::vector<Vec> out;
    ColumnProblem pb = make_problem(pos);
    ColumnEnumerator en(pb, budget_, &nodes, &budget_hit);
    en.enumerate([&](const Vec& x) {
      out.push_back(x);
      return true;
    });
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  ColumnProblem make_problem(int pos) {
    ColumnProblem pb;
    pb.gram = &cx_.gram;
    int orig = cx_.order[size_t(pos)];
    pb.target = cx_.diag_target[size_t(orig)];
    for (int prev = 0; prev < pos; ++prev)
      add_cross_rows(cx_, cols_[size_t(prev)], cx_.order[size_t(prev)], orig, &pb.rows, &pb.rhs);
    return pb;
  }

  void recurse(int pos) {
    if (stop_ || budget_hit) return;
    if (pos == cx_.k) {
      finish();
      return;
    }
    ColumnProblem pb = make_problem(pos);
    ColumnEnumerator en(pb, budget_, &nodes, &budget_hit);
    if (cx_.opts.max_solutions > 0) {
      // existence-style runs visit unit-rich columns first
      std::vector<Vec> cand;
      en.enumerate([&](const Vec& x) {
        cand.push_back(x);
        return true;
      });
      std::stable_sort(cand.begin(), cand.end(), [](const Vec& a, const Vec& b) {
        auto odd = [](const Vec& v) {
          int c = 0;
          for (const Int& t : v) c += int(mpz_odd_p(t.get_mpz_t()) != 0);
          return c;
        };
        int oa = odd(a), ob = odd(b);
        if (oa != ob) return oa > ob;
        return a < b;
      });
      for (const Vec& x : cand) {
        cols_[size_t(pos)] = x;
        recurse(pos + 1);
        if (stop_ || budget_hit) return;
      }
    } else {
      en.enumerate([&](const Vec& x) {
        cols_[size_t(pos)] = x;
        recurse(pos + 1);
        return !stop_ && !budget_hit;
      });
    }
  }

  void finish() {
    if (!cx_.herm) {
      IntMatrix m(cx_.k, cx_.k);
      for (int pos = 0; pos < cx_.k; ++pos) {
        int orig = cx_.order[size_t(pos)];
        for (int i = 0; i < cx_.k; ++i) m(i, orig) = cols_[size_t(pos)][size_t(i)];
      }
      if (!verify_exact(cx_, m) || !det_ok(cx_, m) || !content_ok(cx_, m)) return;
      ++emitted;
      if (!qsink(m)) stop_ = true;
      if (cx_.opts.max_solutions && emitted >= cx_.opts.max_solutions) stop_ = true;
    } else {
      GaussMatrix m(cx_.k, cx_.k);
      for (int pos = 0; pos < cx_.k; ++pos) {
        int orig = cx_.order[size_t(pos)];
        for (int i = 0; i < cx_.k; ++i)
          m(i, orig) =
              GaussianInt(cols_[size_t(pos)][size_t(i)], cols_[size_t(pos)][size_t(i + cx_.k)]);
      }
      if (!verify_exact(cx_, m) || !det_ok(cx_, m) || !content_ok(cx_, m)) return;
      ++emitted;
      if (!hsink(m)) stop_ = true;
      if (cx_.opts.max_solutions && emitted >= cx_.opts.max_solutions) stop_ = true;
    }
  }

  const EngineContext& cx_;
  uint64_t budget_;
  std::vector<Vec> cols_;
  bool stop_ = false;
};

// full run: optionally parallel over first-column candidates
void run_engine(const Form& f, const Int& n, const EnumOptions& opts,
                std::vector<IntMatrix>* qout, std::vector<GaussMatrix>* hout, EnumStats* stats) {
  auto t0 = std::chrono::steady_clock::now();
  if (n < 1) throw std::invalid_argument("solve_scaled_isometry: n must be >= 1");
  if (!is_positive_definite(f))
    throw std::invalid_argument("solve_scaled_isometry: form must be positive definite");
  EngineContext cx = make_context(f, n, opts);

  int threads = opts.threads;
  if (opts.max_solutions > 0 || opts.node_budget > 0) threads = 1;  // keep runs reproducible
  if (threads <= 1) {
    MatrixSearch ms(cx, opts.node_budget);
    ms.qsink = [&](const IntMatrix& m) {
      if (!opts.count_only) qout->push_back(m);
      return true;
    };
    ms.hsink = [&](const GaussMatrix& m) {
      if (!opts.count_only) hout->push_back(m);
      return true;
    };
    ms.run(nullptr);
    stats->nodes = ms.nodes;
    stats->count = ms.emitted;
    stats->budget_exhausted = ms.budget_hit;
  } else {
    MatrixSearch seed(cx, 0);
    std::vector<Vec> firsts = seed.candidates(0);
    uint64_t seed_nodes = seed.nodes;
    std::atomic<size_t> next{0};
    size_t nt = size_t(threads);
    std::vector<std::vector<IntMatrix>> qparts(nt);
    std::vector<std::vector<GaussMatrix>> hparts(nt);
    std::vector<uint64_t> nodes(nt, 0);
    std::vector<uint64_t> counts(nt, 0);
    std::vector<std::thread> pool;
    for (int tI = 0; tI < threads; ++tI) {
      pool.emplace_back([&, tI] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= firsts.size()) break;
          MatrixSearch ms(cx, 0);
          ms.qsink = [&](const IntMatrix& m) {
            if (!opts.count_only) qparts[size_t(tI)].push_back(m);
            return true;
          };
          ms.hsink = [&](const GaussMatrix& m) {
            if (!opts.count_only) hparts[size_t(tI)].push_back(m);
            return true;
          };
          ms.run(&firsts[i]);
          nodes[size_t(tI)] += ms.nodes;
          counts[size_t(tI)] += ms.emitted;
        }
      });
    }
    for (auto& th : pool) th.join();
    stats->nodes = seed_nodes;
    for (int tI = 0; tI < threads; ++tI) {
      stats->nodes += nodes[size_t(tI)];
      stats->count += counts[size_t(tI)];
      if (!opts.count_only) {
        for (auto& m : qparts[size_t(tI)]) qout->push_back(std::move(m));
        for (auto& m : hparts[size_t(tI)]) hout->push_back(std::move(m));
      }
    }
  }
  std::sort(qout->begin(), qout->end());
  std::sort(hout->begin(), hout->end());
  stats->wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SolutionSet solve_scaled_isometry(const Form& f, const Int& n, const EnumOptions& opts) {
  SolutionSet out;
  out.form = f;
  out.n = n;
  run_engine(f, n, opts, &out.qsolutions, &out.hsolutions, &out.stats);
  if (!opts.count_only) out.stats.count = out.size();
  return out;
}

Int count_solutions(const Form& f, const Int& n, const EnumOptions& opts) {
  EnumOptions o = opts;
  o.count_only = true;
  std::vector<IntMatrix> q;
  std::vector<GaussMatrix> h;
  EnumStats st;
  run_engine(f, n, o, &q, &h, &st);
  return Int(st.count);
}

void stream_solutions(const Form& f, const Int& n,
                      const std::function<bool(const IntMatrix&)>& sink,
                      const EnumOptions& opts) {
  SolutionSet s = solve_scaled_isometry(f, n, opts);
  EnumStats partial = s.stats;
  partial.count = 0;
  for (const IntMatrix& m : s.qsolutions) {
    if (!sink(m)) throw StreamAborted(partial);
    ++partial.count;
  }
}

void stream_solutions(const Form& f, const Int& n,
                      const std::function<bool(const GaussMatrix&)>& sink,
                      const EnumOptions& opts) {
  SolutionSet s = solve_scaled_isometry(f, n, opts);
  EnumStats partial = s.stats;
  partial.count = 0;
  for (const GaussMatrix& m : s.hsolutions) {
    if (!sink(m)) throw StreamAborted(partial);
    ++partial.count;
  }
}

}  // namespace scaliso
