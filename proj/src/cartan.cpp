#include "scaliso/cartan.hpp"

#include "scaliso/modn.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace scaliso {

namespace {

int rank_of(RootSystem t) { return t == RootSystem::A1 ? 1 : 2; }

std::vector<int> perm_identity(RootSystem t) {
  if (t == RootSystem::A1) return {0};
  return {0, 1, 2};
}

// A1 finite part: {0} = id, {1} = flip (x -> -x)
std::vector<int> perm_mul(RootSystem t, const std::vector<int>& a, const std::vector<int>& b) {
  if (t == RootSystem::A1) return {a[0] ^ b[0]};
  std::vector<int> r(3);
  for (int i = 0; i < 3; ++i) r[size_t(i)] = a[size_t(b[size_t(i)])];  // (a b)(i) = a(b(i))
  return r;
}

std::vector<int> perm_inv(RootSystem t, const std::vector<int>& a) {
  if (t == RootSystem::A1) return a;
  std::vector<int> r(3);
  for (int i = 0; i < 3; ++i) r[size_t(a[size_t(i)])] = i;
  return r;
}

std::vector<long long> perm_act(RootSystem t, const std::vector<int>& s,
                                const std::vector<long long>& v) {
  if (t == RootSystem::A1) return {s[0] ? -v[0] : v[0]};
  // coordinates permute: (s.v)_{s(i)} = v_i
  std::vector<long long> r(3);
  for (int i = 0; i < 3; ++i) r[size_t(s[size_t(i)])] = v[size_t(i)];
  return r;
}

void check_translation(RootSystem t, const std::vector<long long>& lam) {
  if (t == RootSystem::A1) {
    if (lam.size() != 1) throw std::invalid_argument("A1 translation must have size 1");
  } else {
    if (lam.size() != 3 || lam[0] + lam[1] + lam[2] != 0)
      throw std::invalid_argument("A2 translation must be a length-3 vector with sum 0");
  }
}

std::vector<int> default_weights(RootSystem t) {
  return std::vector<int>(size_t(rank_of(t)) + 1, 1);
}

}  // namespace

AffineWeylElement AffineWeylElement::identity(RootSystem t) {
  AffineWeylElement w;
  w.type = t;
  w.translation.assign(t == RootSystem::A1 ? 1 : 3, 0);
  w.finite = perm_identity(t);
  w.weights = default_weights(t);
  return w;
}

AffineWeylElement AffineWeylElement::translation_of(RootSystem t,
                                                    const std::vector<long long>& lam) {
  check_translation(t, lam);
  AffineWeylElement w = identity(t);
  w.translation = lam;
  return w;
}

AffineWeylElement AffineWeylElement::finite_of(RootSystem t, const std::vector<int>& perm) {
  AffineWeylElement w = identity(t);
  w.finite = perm;
  return w;
}

AffineWeylElement AffineWeylElement::operator*(const AffineWeylElement& o) const {
  if (type != o.type) throw std::invalid_argument("affine Weyl product: type mismatch");
  // (t_a s)(t_b u): x -> s(u(x) + b) + a = (s u)(x) + (s.b + a)
  AffineWeylElement r = *this;
  std::vector<long long> sb = perm_act(type, finite, o.translation);
  for (size_t i = 0; i < r.translation.size(); ++i) r.translation[i] += sb[i];
  r.finite = perm_mul(type, finite, o.finite);
  return r;
}

std::vector<AffineWeylElement> simple_reflections(RootSystem t) {
  std::vector<AffineWeylElement> out;
  if (t == RootSystem::A1) {
    // r_0: x -> 1 - x (reflection at the affine wall), r_1: x -> -x
    AffineWeylElement r0 = AffineWeylElement::finite_of(t, {1});
    r0.translation = {1};
    out.push_back(r0);
    out.push_back(AffineWeylElement::finite_of(t, {1}));
  } else {
    // r_0 = t_theta s_theta with theta = e1 - e3; r_1, r_2 adjacent swaps
    AffineWeylElement r0 = AffineWeylElement::finite_of(t, {2, 1, 0});
    r0.translation = {1, 0, -1};
    out.push_back(r0);
    out.push_back(AffineWeylElement::finite_of(t, {1, 0, 2}));
    out.push_back(AffineWeylElement::finite_of(t, {0, 2, 1}));
  }
  return out;
}

std::vector<AffineWeylElement> finite_weyl(RootSystem t) {
  std::vector<AffineWeylElement> out;
  if (t == RootSystem::A1) {
    out.push_back(AffineWeylElement::identity(t));
    out.push_back(AffineWeylElement::finite_of(t, {1}));
    return out;
  }
  std::vector<int> perm = {0, 1, 2};
  std::sort(perm.begin(), perm.end());
  do {
    out.push_back(AffineWeylElement::finite_of(RootSystem::A2, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

// alcove-crossing count: for w = t_lam u and each positive root a,
// contribute |<lam, a>| when u^{-1} a > 0 and |<lam, a> - 1| otherwise
long long crossing_length(const AffineWeylElement& w) {
  if (w.type == RootSystem::A1) {
    long long v = 2 * w.translation[0];
    return w.finite[0] == 0 ? std::llabs(v) : std::llabs(v - 1);
  }
  std::vector<int> inv = perm_inv(w.type, w.finite);
  long long total = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      long long v = w.translation[size_t(i)] - w.translation[size_t(j)];
      // u^{-1}(e_i - e_j) > 0 iff inv(i) < inv(j)
      total += (inv[size_t(i)] < inv[size_t(j)]) ? std::llabs(v) : std::llabs(v - 1);
    }
  return total;
}

bool unit_weights(const AffineWeylElement& w) {
  for (int d : w.weights)
    if (d != 1) return false;
  return true;
}

// bounded BFS over words in the simple reflections; finds a reduced word for
// w and returns its weight sum, or -1 when the bound is exceeded
long long word_search_length(const AffineWeylElement& w, int max_len) {
  AffineWeylElement id = AffineWeylElement::identity(w.type);
  if (w == id) return 0;
  std::vector<AffineWeylElement> gens = simple_reflections(w.type);
  std::map<AffineWeylElement, std::pair<AffineWeylElement, int>> parent;
  std::map<AffineWeylElement, int> depth;
  depth[id] = 0;
  std::vector<AffineWeylElement> frontier = {id};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<AffineWeylElement> next;
    for (const auto& x : frontier)
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        AffineWeylElement y = x * gens[gi];
        if (depth.count(y)) continue;
        depth[y] = len;
        parent.emplace(y, std::make_pair(x, int(gi)));
        next.push_back(y);
      }
    if (depth.count(w)) {
      long long sum = 0;
      AffineWeylElement cur = w;
      while (!(cur == id)) {
        auto [prev, gi] = parent.at(cur);
        sum += w.weights[size_t(gi)];
        cur = prev;
      }
      return sum;
    }
    frontier = std::move(next);
  }
  return -1;
}

}  // namespace

long long weighted_length(const AffineWeylElement& w) {
  if (unit_weights(w)) return crossing_length(w);
  long long l = word_search_length(w, 24);
  if (l < 0) throw std::invalid_argument("weighted_length: word search bound exceeded");
  return l;
}

DoubleCosetSize double_coset_size(const AffineWeylElement& w_in, const Int& q) {
  AffineWeylElement w = w_in;
  // normalize a pure translation to its dominant chamber representative
  if (w.finite == perm_identity(w.type)) {
    if (w.type == RootSystem::A1) {
      w.translation[0] = std::llabs(w.translation[0]);
    } else {
      std::sort(w.translation.begin(), w.translation.end(),
                std::greater<long long>());
    }
  }
  std::vector<AffineWeylElement> fw = finite_weyl(w.type);
  std::set<AffineWeylElement> orbit;
  for (const auto& u : fw)
    for (const auto& v : fw) orbit.insert(u * w * v);
  Int num = 0;
  DoubleCosetSize out;
  for (const auto& y : orbit) {
    long long l = weighted_length(y);
    num += pow_int(q, unsigned(l));
    out.orbit.emplace_back(y, l);
  }
  Int den = 0;
  for (const auto& y : fw) den += pow_int(q, unsigned(weighted_length(y)));
  out.value = mpq_class(num) / mpq_class(den);
  out.value.canonicalize();
  out.integral = out.value.get_den() == 1;
  if (out.integral) out.int_value = out.value.get_num();
  return out;
}

namespace {

// p-part elementary divisors of a nonsingular upper-triangular integer matrix
std::vector<Int> smith_divisors(std::vector<std::vector<Int>> a) {
  size_t n = a.size();
  std::vector<Int> out;
  for (size_t t = 0; t < n; ++t) {
    for (;;) {
      size_t bi = t, bj = t;
      Int best = 0;
      for (size_t i = t; i < n; ++i)
        for (size_t j = t; j < n; ++j) {
          if (a[i][j] == 0) continue;
          Int m = a[i][j] < 0 ? -a[i][j] : a[i][j];
          if (best == 0 || m < best) {
            best = m;
            bi = i;
            bj = j;
          }
        }
      if (best == 0) throw std::logic_error("smith_divisors: singular");
      std::swap(a[t], a[bi]);
      for (size_t i = 0; i < n; ++i) std::swap(a[i][t], a[i][bj]);
      bool clean = true;
      for (size_t i = t + 1; i < n; ++i) {
        Int qq;
        mpz_fdiv_q(qq.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        if (qq != 0)
          for (size_t j = t; j < n; ++j) a[i][j] -= qq * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (size_t j = t + 1; j < n; ++j) {
        Int qq;
        mpz_fdiv_q(qq.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        if (qq != 0)
          for (size_t i = t; i < n; ++i) a[i][j] -= qq * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    out.push_back(a[t][t] < 0 ? -a[t][t] : a[t][t]);
  }
  return out;
}

}  // namespace

Int direct_coset_count(const Int& p, int m, CosetGroup group) {
  if (!is_prime(p)) throw std::invalid_argument("direct_coset_count: p must be prime");
  if (p > 7 || m > 3 || m < 0)
    throw std::invalid_argument("direct_coset_count: oracle budget is p <= 7, m <= 3");
  if (m == 0) return 1;

  // scale a = diag(p^m, .., p^-m) by p^m: count sublattices L of Z^r with
  // Z^r / L matching the scaled elementary-divisor pattern, via row HNF
  if (group == CosetGroup::SL2) {
    Int index = pow_int(p, unsigned(2 * m));
    std::vector<Int> want = {index, 1};
    Int count = 0;
    for (int i = 0; i <= 2 * m; ++i) {
      Int a = pow_int(p, unsigned(i));
      Int d = exact_div(index, a);
      for (Int b = 0; b < d; ++b) {
        std::vector<std::vector<Int>> h = {{a, b}, {Int(0), d}};
        std::vector<Int> sd = smith_divisors(h);
        std::sort(sd.begin(), sd.end(), std::greater<Int>());
        if (sd == want) count += 1;
      }
    }
    return count;
  }

  // SL3 with a = diag(p^m, 1, p^-m): pattern (p^{2m}, p^m, 1), index p^{3m}
  Int index = pow_int(p, unsigned(3 * m));
  std::vector<Int> want = {pow_int(p, unsigned(2 * m)), pow_int(p, unsigned(m)), Int(1)};
  Int count = 0;
  for (int i = 0; i <= 3 * m; ++i)
    for (int j = 0; i + j <= 3 * m; ++j) {
      Int a = pow_int(p, unsigned(i)), d = pow_int(p, unsigned(j));
      Int f = exact_div(index, a * d);
      for (Int b = 0; b < d; ++b)
        for (Int c = 0; c < f; ++c)
          for (Int e = 0; e < f; ++e) {
            std::vector<std::vector<Int>> h = {{a, b, c}, {Int(0), d, e}, {Int(0), Int(0), f}};
            std::vector<Int> sd = smith_divisors(h);
            std::sort(sd.begin(), sd.end(), std::greater<Int>());
            if (sd == want) count += 1;
          }
    }
  return count;
}

GrowthReport growth_check(RootSystem t, const Int& q, int max_m) {
  GrowthReport rep;
  rep.all_at_least_q = true;
  rep.strictly_increasing = true;
  Int prev = 0;
  for (int m = 1; m <= max_m; ++m) {
    AffineWeylElement w =
        t == RootSystem::A1
            ? AffineWeylElement::translation_of(t, {m})
            : AffineWeylElement::translation_of(t, {m, 0, -m});
    DoubleCosetSize s = double_coset_size(w, q);
    if (!s.integral) throw std::logic_error("growth_check: non-integral coset size");
    GrowthRow row;
    row.m = m;
    row.length = weighted_length(w);
    row.size = s.int_value;
    if (row.size < q) rep.all_at_least_q = false;
    if (m > 1 && row.size <= prev) rep.strictly_increasing = false;
    prev = row.size;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

// canonical representative of the projective class of a primitive pair
// (a, c) mod p^r under unit scaling
std::pair<Int, Int> proj_canonical(const Int& a, const Int& c, const Int& p, const Int& mod) {
  if (a % p != 0) {
    Int ainv;
    mpz_invert(ainv.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
    return {Int(1), (c * ainv) % mod};
  }
  Int cinv;
  mpz_invert(cinv.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
  return {(a * cinv) % mod, Int(1)};
}

}  // namespace

CosetComparison compact_open_comparison(const Int& p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("compact_open_comparison: p must be prime");
  if (m < 0 || m > 3 || p > 3)
    throw std::invalid_argument("compact_open_comparison: scenario budget is p <= 3, m <= 3");
  CosetComparison out;
  out.p = p;
  out.m = m;

  // c = [U : V] = |SL2(F_p)| by enumeration
  {
    long pl = long(p.get_si());
    long count = 0;
    for (long a = 0; a < pl; ++a)
      for (long b = 0; b < pl; ++b)
        for (long c = 0; c < pl; ++c)
          for (long d = 0; d < pl; ++d)
            if (((a * d - b * c) % pl + pl) % pl == 1) ++count;
    out.index_c = count;
  }

  if (m == 0) {
    out.count_u = 1;
    out.count_v = 1;
  } else {
    // cosets u (U cap gUg^{-1}) correspond to projective classes of first
    // columns mod p^{2m}: u^{-1}u' lands in the congruence group iff the
    // first columns are proportional
    {
      Int mod = pow_int(p, unsigned(2 * m));
      std::set<std::pair<Int, Int>> classes;
      for (Int a = 0; a < mod; ++a)
        for (Int c = 0; c < mod; ++c) {
          if (a % p == 0 && c % p == 0) continue;  // not completable in SL2(Z_p)
          classes.insert(proj_canonical(a, c, p, mod));
        }
      out.count_u = Int(long(classes.size()));
    }
    // for V: first columns satisfy a = 1, c = 0 mod p, classes mod p^{2m+1}
    // under scaling by units = 1 mod p
    {
      Int mod = pow_int(p, unsigned(2 * m + 1));
      std::set<Int> classes;
      for (Int a = 1; a < mod; a += p)
        for (Int c = 0; c < mod; c += p) {
          Int ainv;
          mpz_invert(ainv.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
          classes.insert((c * ainv) % mod);
        }
      out.count_v = Int(long(classes.size()));
    }
  }
  out.lower_ok = out.count_v <= out.index_c * out.count_u;
  out.upper_ok = out.count_u <= out.index_c * out.count_v;
  return out;
}

}  // namespace scaliso
