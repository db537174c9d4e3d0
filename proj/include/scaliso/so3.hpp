#pragma once
// Quaternion construction of denominator-n rotations: primitive integer
// quaternions of norm n act by conjugation on the pure quaternions; the
// resulting integer 3x3 matrices, after content reduction, are exactly the
// numerators of the denominator-n points of SO(3, Q) for odd n.

#include "scaliso/enumerate.hpp"

namespace scaliso {

struct Quaternion {
  long long a = 0, b = 0, c = 0, d = 0;

  long long norm() const { return a * a + b * b + c * c + d * d; }
  bool primitive() const;
  Quaternion operator*(const Quaternion& o) const {
    // i^2 = j^2 = k^2 = ijk = -1
    return {a * o.a - b * o.b - c * o.c - d * o.d, a * o.b + b * o.a + c * o.d - d * o.c,
            a * o.c - b * o.d + c * o.a + d * o.b, a * o.d + b * o.c - c * o.b + d * o.a};
  }
  Quaternion conj() const { return {a, -b, -c, -d}; }
  bool operator==(const Quaternion& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool operator<(const Quaternion& o) const {
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    if (c != o.c) return c < o.c;
    return d < o.d;
  }
};

// all primitive (a,b,c,d) with a^2+b^2+c^2+d^2 = n, lexicographic order
std::vector<Quaternion> quaternions_of_norm(long long n);

// conjugation action on the pure quaternions; M^t M = norm^2 Id, det = norm^3
IntMatrix quat_to_rotation(const Quaternion& x);

// All denominator-n rotation numerators for odd n.  Primitive quaternions of
// norms n, 2n and 4n all project to denominator-n rotations after dividing
// the matrix by its content (norm-n images already have content 1); together
// they exhaust the set T(n, Id_3, Z), deduplicated by matrix value.
SolutionSet denominator_n_rotations(long long n);

}  // namespace scaliso
