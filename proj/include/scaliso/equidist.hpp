#pragma once
// Empirical equidistribution checks: embed exact solution sets into the
// compact real group through the Cholesky factor, sample Haar measure by
// orthonormalized Gaussians, and compare entry-monomial averages and
// spherical cap frequencies against their Haar values.

#include "scaliso/enumerate.hpp"

#include <array>

namespace scaliso {

struct EmpiricalSample {
  int k = 0;
  bool unitary = false;
  // per matrix: k*k doubles row-major, or 2*k*k (re, im interleaved)
  std::vector<double> data;
  double orthogonality_residual = 0;
  std::string source;

  size_t entries_per_matrix() const { return size_t(k) * k * (unitary ? 2 : 1); }
  size_t size() const { return entries_per_matrix() ? data.size() / entries_per_matrix() : 0; }
};

// C (M/n) C^{-1} for every solution; hard residual cap 1e-8
EmpiricalSample embed_solutions(const Form& f, const SolutionSet& s);

// exact Haar on SO(k) / SU(k): QR of a Gaussian matrix with the phase-of-R
// correction, then a determinant fix that preserves the distribution
EmpiricalSample haar_sample(int k, size_t count, uint64_t seed, bool unitary);

struct DiscrepancyEntry {
  std::string statistic;
  int degree = 0;
  double empirical = 0;
  double reference = 0;
  std::string reference_source;  // "exact-symmetry" | "monte-carlo" | "sample"
  size_t mc_count = 0;
  double mc_stderr = 0;
  double gap = 0;
};

struct DiscrepancyReport {
  std::vector<DiscrepancyEntry> entries;
  double sup_gap(int degree) const;  // sup over entries of exactly this degree
  double sup_gap_up_to(int degree) const;
};

// Entry monomials of total degree <= max_degree as the test family.  Against
// a Haar reference, monomials odd under some row/column sign flip have exact
// reference 0; everything else uses the Monte Carlo average with its
// standard error.
DiscrepancyReport weyl_discrepancy_haar(const EmpiricalSample& sample,
                                        const EmpiricalSample& haar_mc, int max_degree);
// plain sample-vs-sample comparison (reference column = second sample)
DiscrepancyReport weyl_discrepancy(const EmpiricalSample& sample,
                                   const EmpiricalSample& reference, int max_degree);

// fraction of images G * direction inside each spherical cap around the
// direction, against the cap area (1 - cos theta) / 2;  k = 3 only.
DiscrepancyReport cap_discrepancy(const EmpiricalSample& sample,
                                  const std::array<double, 3>& direction,
                                  const std::vector<double>& cap_angles);

}  // namespace scaliso
