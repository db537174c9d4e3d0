#pragma once
// Double-coset volumes in the Cartan decomposition: weighted lengths on the
// affine Weyl groups of types A1 and A2, the q-power cardinality formula
// for Card(U a U / U), an independent sublattice-counting oracle for SL2
// and SL3, growth checks, and the compact-open comparison inequalities.

#include "scaliso/arith.hpp"

#include <array>

namespace scaliso {

enum class RootSystem { A1, A2 };

// t_lambda * w acting as x -> w(x) + lambda.  A1: lambda = (m), finite part
// in {identity, flip}; A2: lambda in Z^3 with sum 0, finite part in S3.
// Generator weights d(r_i) are stored per simple reflection (affine r_0
// first); only the split case d = 1 is exercised.
struct AffineWeylElement {
  RootSystem type = RootSystem::A1;
  std::vector<long long> translation;  // size 1 or 3 (sum 0)
  std::vector<int> finite;             // permutation image vector: size 1 ({0}/{1} = id/flip) or 3
  std::vector<int> weights;            // d(r_0), d(r_1), [d(r_2)]

  static AffineWeylElement identity(RootSystem t);
  static AffineWeylElement translation_of(RootSystem t, const std::vector<long long>& lam);
  static AffineWeylElement finite_of(RootSystem t, const std::vector<int>& perm);

  AffineWeylElement operator*(const AffineWeylElement& o) const;
  bool operator==(const AffineWeylElement& o) const {
    return type == o.type && translation == o.translation && finite == o.finite;
  }
  bool operator<(const AffineWeylElement& o) const {
    if (translation != o.translation) return translation < o.translation;
    return finite < o.finite;
  }
};

// alcove-crossing length (all weights 1 reduces to reduced word length);
// non-unit weights fall back to a bounded reduced-word search
long long weighted_length(const AffineWeylElement& w);

// enumerate the simple reflections (r_0 affine, then the finite ones)
std::vector<AffineWeylElement> simple_reflections(RootSystem t);
// the finite Weyl group
std::vector<AffineWeylElement> finite_weyl(RootSystem t);

struct DoubleCosetSize {
  mpq_class value;
  bool integral = false;
  Int int_value;  // when integral
  std::vector<std::pair<AffineWeylElement, long long>> orbit;  // y in W w W with lengths
};
// (sum over y in vW w vW of q^l(y)) / (sum over vW of q^l(y)); non-dominant
// translations are normalized to their dominant representative first
DoubleCosetSize double_coset_size(const AffineWeylElement& w, const Int& q);

// independent oracle: left cosets in U a U counted as sublattices of Z^r
// with the elementary-divisor pattern of a (scaled integral), enumerated in
// Hermite normal form with an exact Smith-pattern check.
enum class CosetGroup { SL2, SL3 };
Int direct_coset_count(const Int& p, int m, CosetGroup group);

struct GrowthRow {
  int m = 0;
  long long length = 0;
  Int size;
};
struct GrowthReport {
  std::vector<GrowthRow> rows;
  bool all_at_least_q = false;
  bool strictly_increasing = false;
};
// translations by m * (dominant generator), m = 1..max_m
GrowthReport growth_check(RootSystem t, const Int& q, int max_m);

// compact-open comparison in SL2(Z_p): U = SL2(Z_p), V the mod-p congruence
// subgroup, g = diag(p^m, p^-m).  Coset indices [X : X cap g X g^-1] are
// counted by explicit enumeration of first-column classes mod p^{2m(+1)}.
struct CosetComparison {
  Int p;
  int m = 0;
  Int index_c;     // [U : V], counted by enumeration mod p
  Int count_u;     // Card(U g U / U)
  Int count_v;     // Card(V g V / V)
  bool lower_ok = false;  // count_v <= c * count_u
  bool upper_ok = false;  // count_u <= c * count_v
};
CosetComparison compact_open_comparison(const Int& p, int m);

}  // namespace scaliso
