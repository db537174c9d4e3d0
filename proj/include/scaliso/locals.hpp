#pragma once
// Local solvability: decide whether the scaled isometry equation has a
// solution over Z_p with coprime entries and determinant n^k, returning a
// certified witness (re-verified congruence + Newton lift certificate), a
// certified emptiness (full residue sweep at some precision), or unknown.

#include "scaliso/forms.hpp"

namespace scaliso {

struct LiftCertificate {
  int base_precision = 0;  // precision of the searched base solution
  int jacobian_val = 0;    // max pivot valuation in the Newton solves
  int lifted_to = 0;
};

struct LocalVerdict {
  enum class Outcome { Yes, No, Unknown };
  Int p;
  Int n;
  Outcome outcome = Outcome::Unknown;
  std::string method;  // "scalar" | "hyperbolic" | "search+lift" | "column-sweep" | "matrix-sweep"

  // yes: witness mod p^{witness_precision} with a unit entry and det = n^k
  IntMatrix witness;
  GaussMatrix gwitness;
  int witness_precision = 0;
  LiftCertificate cert;

  // no: every candidate mod p^{exhausted_precision} swept, none admissible
  int exhausted_precision = 0;

  // unknown
  std::string reason;

  bool yes() const { return outcome == Outcome::Yes; }
};

struct LocalBudget {
  uint64_t node_budget = 50'000'000;
  int max_precision = 0;  // 0 = auto (e0 from the smoothness bound)
  uint64_t seed = 1;
};

// Verdict for one prime.  Fast paths: p coprime to n (scalar witness n*Id);
// quadratic rank >= 5 at a good odd prime (explicit hyperbolic witness with
// sup-norm exponent v_p(n)); otherwise bounded search plus Newton lifting.
LocalVerdict local_solvable(const Form& f, const Int& n, const Int& p,
                            const LocalBudget& budget = {});

struct LocalProfile {
  Int n;
  std::vector<LocalVerdict> verdicts;  // one per prime dividing n, ascending
  bool member = false;                 // yes at every prime dividing n
  bool undecided = false;              // some verdict unknown
};
LocalProfile local_profile(const Form& f, const Int& n, const LocalBudget& budget = {});

// smoothness precision e0 = 2 v_p(n) + v_p(2 det) + 1 (+2 slack at p = 2)
int local_search_precision(const Form& f, const Int& n, const Int& p);

}  // namespace scaliso
