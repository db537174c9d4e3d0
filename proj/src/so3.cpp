#include "scaliso/so3.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace scaliso {

namespace {
long long isqrt_ll(long long n) {
  if (n < 0) return -1;
  long long r = (long long)std::sqrt((double)n);
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}
}  // namespace

bool Quaternion::primitive() const {
  long long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::gcd(std::abs(c), std::abs(d)));
  return g == 1;
}

std::vector<Quaternion> quaternions_of_norm(long long n) {
  if (n < 1) throw std::invalid_argument("quaternions_of_norm: n must be >= 1");
  std::vector<Quaternion> out;
  long long r = isqrt_ll(n);
  for (long long a = -r; a <= r; ++a) {
    long long ra = n - a * a;
    long long rb_max = isqrt_ll(ra);
    for (long long b = -rb_max; b <= rb_max; ++b) {
      long long rb = ra - b * b;
      long long rc_max = isqrt_ll(rb);
      for (long long c = -rc_max; c <= rc_max; ++c) {
        long long rc = rb - c * c;
        long long d0 = isqrt_ll(rc);
        if (d0 * d0 != rc) continue;
        for (long long d : {d0, -d0}) {
          Quaternion q{a, b, c, d};
          if (q.primitive()) out.push_back(q);
          if (d0 == 0) break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IntMatrix quat_to_rotation(const Quaternion& x) {
  long long a = x.a, b = x.b, c = x.c, d = x.d;
  long long e[9] = {a * a + b * b - c * c - d * d,
                    2 * (b * c - a * d),
                    2 * (a * c + b * d),
                    2 * (a * d + b * c),
                    a * a - b * b + c * c - d * d,
                    2 * (c * d - a * b),
                    2 * (b * d - a * c),
                    2 * (a * b + c * d),
                    a * a - b * b - c * c + d * d};
  IntMatrix m(3, 3);
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = long(e[i]);
  return m;
}

SolutionSet denominator_n_rotations(long long n) {
  if (n < 1 || n % 2 == 0)
    throw std::invalid_argument("denominator_n_rotations: construction requires odd n");
  SolutionSet out;
  out.form = Form::quadratic(IntMatrix::identity(3));
  out.n = long(n);
  auto t0 = std::chrono::steady_clock::now();
  std::vector<IntMatrix> sols;
  for (long long norm : {n, 2 * n, 4 * n}) {
    for (const Quaternion& x : quaternions_of_norm(norm)) {
      IntMatrix m = quat_to_rotation(x);
      Int g = content_z(m);
      if (g * long(n) != long(norm)) continue;  // content reduction must land at level n
      if (g != 1)
        for (auto& v : m.flat()) v = exact_div(v, g);
      sols.push_back(std::move(m));
      ++out.stats.nodes;
    }
  }
  std::sort(sols.begin(), sols.end());
  sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
  out.qsolutions = std::move(sols);
  out.stats.count = out.qsolutions.size();
  out.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace scaliso
