#pragma once
// Bounded search for solutions of  M^* A M = s B (mod p^c)  by columns,
// digit by digit, plus Newton lifting to higher precision.  Shared by the
// local solvability tests (A = B = gram, s = n^2) and the genus witness
// search (s = 1, unit determinant).

#include "scaliso/arith.hpp"
#include "scaliso/modn.hpp"

#include <functional>
#include <optional>

namespace scaliso {

struct PadicSearchOptions {
  int precision = 3;  // c: congruence solved mod p^c
  // content gate: at least one entry of the full matrix must be a unit
  bool require_unit_content = true;
  enum class DetMode {
    Any,          // no determinant constraint
    ScaledPower,  // det = n^k mod p^c (vacuous digits allowed at low c)
    Unit,         // det a unit mod p
    Target,       // det = det_target mod p^c
  };
  DetMode det_mode = DetMode::ScaledPower;
  Int det_target = 0;
  uint64_t max_solutions = 8;
  uint64_t node_budget = 0;  // 0 = unlimited
  uint64_t seed = 0;         // 0 = canonical digit order, else seeded shuffle
};

struct PadicSearchStats {
  uint64_t nodes = 0;
  bool exhausted = false;  // full residue space swept (sound no-certificates)
  bool budget_hit = false;
};

// Quadratic case; matrices over Z/p^c.
PadicSearchStats padic_isometry_search(const IntMatrix& a, const IntMatrix& b, const Int& scale,
                                       const Int& p, const PadicSearchOptions& opts,
                                       std::vector<IntMatrix>& out);
// Hermitian case; Gaussian residues mod p^c.
PadicSearchStats padic_isometry_search(const GaussMatrix& a, const GaussMatrix& b,
                                       const Int& scale, const Int& p,
                                       const PadicSearchOptions& opts,
                                       std::vector<GaussMatrix>& out);

// One Newton step per precision level: given  M^* A M = s B (mod p^c),
// produce M' = M + D with the congruence mod p^{c+1}; D is found from the
// valuation-pivoted linear solve and every step is re-verified, so a
// returned lift is unconditionally a valid solution mod p^{target}.
struct NewtonLift {
  IntMatrix witness;      // or embedded in gwitness for hermitian
  GaussMatrix gwitness;
  int precision = 0;      // reached precision
  int jacobian_val = 0;   // max pivot valuation seen in the solves
  int base_precision = 0;
};
std::optional<NewtonLift> newton_lift(const IntMatrix& a, const IntMatrix& b, const Int& scale,
                                      const Int& p, const IntMatrix& m0, int c0, int target);
std::optional<NewtonLift> newton_lift(const GaussMatrix& a, const GaussMatrix& b,
                                      const Int& scale, const Int& p, const GaussMatrix& m0,
                                      int c0, int target);

}  // namespace scaliso
