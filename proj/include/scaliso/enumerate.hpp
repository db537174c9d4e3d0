#pragma once
// Complete enumeration of T(n, F, Z): integer (or Gaussian-integer)
// matrices M with M^* gram M = n^2 gram, content 1 and det = n^k.  Columns
// are produced by exact short-vector enumeration (floating Cholesky bounds
// rounded outward, every candidate re-checked in exact arithmetic) and
// assembled by depth-first backtracking over the cross conditions.

#include "scaliso/forms.hpp"

#include <functional>

namespace scaliso {

enum class ContentMode { Rational, Gaussian };

struct EnumOptions {
  bool count_only = false;
  uint64_t max_solutions = 0;  // 0 = enumerate everything
  uint64_t node_budget = 0;    // 0 = unlimited
  int threads = 1;
  ContentMode content_mode = ContentMode::Rational;
  bool include_improper = false;  // keep det = -n^k (any unit * n^k when hermitian)
};

struct EnumStats {
  uint64_t nodes = 0;
  uint64_t count = 0;
  bool budget_exhausted = false;
  double wall_ms = 0;
};

struct SolutionSet {
  Form form;
  Int n;
  std::vector<IntMatrix> qsolutions;    // canonical (row-major lex) order
  std::vector<GaussMatrix> hsolutions;  // idem, hermitian case
  EnumStats stats;
  size_t size() const { return qsolutions.size() + hsolutions.size(); }
};

SolutionSet solve_scaled_isometry(const Form& f, const Int& n, const EnumOptions& opts = {});
Int count_solutions(const Form& f, const Int& n, const EnumOptions& opts = {});

// Emits each solution exactly once, in canonical order, to the sink; the
// emitted multiset equals solve_scaled_isometry.  A sink returning false
// aborts with a partial-progress report.
struct StreamAborted : std::runtime_error {
  EnumStats stats;
  explicit StreamAborted(EnumStats s)
      : std::runtime_error("stream_solutions: sink aborted"), stats(s) {}
};
void stream_solutions(const Form& f, const Int& n,
                      const std::function<bool(const IntMatrix&)>& sink,
                      const EnumOptions& opts = {});
void stream_solutions(const Form& f, const Int& n,
                      const std::function<bool(const GaussMatrix&)>& sink,
                      const EnumOptions& opts = {});

}  // namespace scaliso
