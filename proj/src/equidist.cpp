#include "scaliso/equidist.hpp"

#include "scaliso/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace scaliso {

namespace {

// permutation-invariant mean: sort before summation so the result is a pure
// function of the multiset
double sorted_mean(std::vector<double>& vals) {
  if (vals.empty()) return 0;
  std::sort(vals.begin(), vals.end());
  double s = 0, comp = 0;
  for (double v : vals) {
    double y = v - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s / double(vals.size());
}

double sorted_stddev(std::vector<double>& vals, double mean) {
  if (vals.size() < 2) return 0;
  std::vector<double> sq(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) sq[i] = (vals[i] - mean) * (vals[i] - mean);
  double var = sorted_mean(sq) * double(vals.size()) / double(vals.size() - 1);
  return std::sqrt(var);
}

}  // namespace

EmpiricalSample embed_solutions(const Form& f, const SolutionSet& s) {
  if (s.size() == 0) throw std::invalid_argument("embed_solutions: empty solution set");
  RealEmbedding emb = real_embedding(f);
  int k = emb.k;
  Eigen::MatrixXcd c(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) c(i, j) = emb.chol[size_t(i) * k + j];
  Eigen::MatrixXcd cinv = c.inverse();
  double nn = s.n.get_d();

  EmpiricalSample out;
  out.k = k;
  out.unitary = emb.hermitian;
  out.source = "embedded;n=" + s.n.get_str();
  out.data.reserve(s.size() * out.entries_per_matrix());
  double worst = 0;
  auto push = [&](const Eigen::MatrixXcd& md) {
    Eigen::MatrixXcd g = c * (md / nn) * cinv;
    double resid = (g.adjoint() * g - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
    worst = std::max(worst, resid);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        out.data.push_back(g(i, j).real());
        if (out.unitary) out.data.push_back(g(i, j).imag());
      }
  };
  for (const IntMatrix& m : s.qsolutions) {
    Eigen::MatrixXcd md(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) md(i, j) = m(i, j).get_d();
    push(md);
  }
  for (const GaussMatrix& m : s.hsolutions) {
    Eigen::MatrixXcd md(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        md(i, j) = std::complex<double>(m(i, j).re.get_d(), m(i, j).im.get_d());
    push(md);
  }
  out.orthogonality_residual = worst;
  if (worst > 1e-8) throw std::runtime_error("embed_solutions: orthogonality residual above 1e-8");
  return out;
}

EmpiricalSample haar_sample(int k, size_t count, uint64_t seed, bool unitary) {
  if (count < 1) throw std::invalid_argument("haar_sample: count must be >= 1");
  EmpiricalSample out;
  out.k = k;
  out.unitary = unitary;
  out.source = "haar;seed=" + std::to_string(seed);
  out.data.resize(count * out.entries_per_matrix());
  double worst = 0;
  for (size_t idx = 0; idx < count; ++idx) {
    GaussianStream gs(derive_stream(seed, idx));
    size_t base = idx * out.entries_per_matrix();
    if (unitary) {
      Eigen::MatrixXcd a(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          double re = gs.next();
          double im = gs.next();
          a(i, j) = std::complex<double>(re, im);
        }
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
      Eigen::MatrixXcd q = qr.householderQ();
      Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
      // phase correction: Q <- Q diag(r_ii / |r_ii|) makes the law exactly Haar
      for (int j = 0; j < k; ++j) {
        std::complex<double> rjj = r(j, j);
        std::complex<double> lam = rjj == std::complex<double>(0, 0) ? 1.0 : rjj / std::abs(rjj);
        for (int i = 0; i < k; ++i) q(i, j) *= lam;
      }
      // right multiplication by a fixed function of det pushes Haar(U) to Haar(SU)
      std::complex<double> det = q.determinant();
      for (int i = 0; i < k; ++i) q(i, k - 1) /= det;
      double resid = (q.adjoint() * q - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff();
      worst = std::max(worst, resid);
      size_t pos = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          out.data[base + pos++] = q(i, j).real();
          out.data[base + pos++] = q(i, j).imag();
        }
    } else {
      Eigen::MatrixXd a(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = gs.next();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      Eigen::MatrixXd q = qr.householderQ();
      Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int j = 0; j < k; ++j)
        if (r(j, j) < 0)
          for (int i = 0; i < k; ++i) q(i, j) = -q(i, j);
      if (q.determinant() < 0)
        for (int i = 0; i < k; ++i) q(i, k - 1) = -q(i, k - 1);
      double resid = (q.transpose() * q - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
      worst = std::max(worst, resid);
      size_t pos = 0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.data[base + pos++] = q(i, j);
    }
  }
  out.orthogonality_residual = worst;
  return out;
}

namespace {

// monomial = multiset of component indices (size <= max_degree)
void enumerate_monomials(size_t ncomp, int max_degree,
                         const std::function<void(const std::vector<size_t>&)>& fn) {
  std::vector<size_t> cur;
  std::function<void(size_t, int)> rec = [&](size_t start, int left) {
    if (!cur.empty()) fn(cur);
    if (left == 0) return;
    for (size_t i = start; i < ncomp; ++i) {
      cur.push_back(i);
      rec(i, left - 1);
      cur.pop_back();
    }
  };
  rec(0, max_degree);
}

std::string monomial_name(const std::vector<size_t>& mono, int k, bool unitary) {
  std::string s;
  for (size_t c : mono) {
    if (!s.empty()) s += "*";
    size_t per = unitary ? 2 : 1;
    size_t entry = c / per;
    int i = int(entry) / k + 1, j = int(entry) % k + 1;
    s += "g(" + std::to_string(i) + "," + std::to_string(j) + ")";
    if (unitary) s += (c % 2 == 0) ? ".re" : ".im";
  }
  return s;
}

double monomial_mean(const EmpiricalSample& s, const std::vector<size_t>& mono) {
  size_t per = s.entries_per_matrix();
  size_t n = s.size();
  std::vector<double> vals(n);
  for (size_t m = 0; m < n; ++m) {
    double v = 1;
    for (size_t c : mono) v *= s.data[m * per + c];
    vals[m] = v;
  }
  return sorted_mean(vals);
}

// true when some two-row or two-column sign flip (an element of the special
// group) negates the monomial, forcing Haar average 0
bool forced_zero_by_symmetry(const std::vector<size_t>& mono, int k, bool unitary) {
  size_t per = unitary ? 2 : 1;
  auto row_of = [&](size_t c) { return int(c / per) / k; };
  auto col_of = [&](size_t c) { return int(c / per) % k; };
  for (int r1 = 0; r1 < k; ++r1)
    for (int r2 = r1 + 1; r2 < k; ++r2) {
      int deg = 0;
      for (size_t c : mono)
        if (row_of(c) == r1 || row_of(c) == r2) ++deg;
      if (deg % 2 == 1) return true;
    }
  for (int c1 = 0; c1 < k; ++c1)
    for (int c2 = c1 + 1; c2 < k; ++c2) {
      int deg = 0;
      for (size_t c : mono)
        if (col_of(c) == c1 || col_of(c) == c2) ++deg;
      if (deg % 2 == 1) return true;
    }
  return false;
}

DiscrepancyReport weyl_impl(const EmpiricalSample& sample, const EmpiricalSample& reference,
                            int max_degree, bool haar_reference) {
  if (sample.size() == 0) throw std::invalid_argument("weyl_discrepancy: empty sample");
  if (max_degree < 1 || max_degree > 4)
    throw std::invalid_argument("weyl_discrepancy: degree must be in 1..4");
  if (sample.k != reference.k || sample.unitary != reference.unitary)
    throw std::invalid_argument("weyl_discrepancy: incompatible samples");
  DiscrepancyReport rep;
  size_t ncomp = sample.entries_per_matrix();
  enumerate_monomials(ncomp, max_degree, [&](const std::vector<size_t>& mono) {
    DiscrepancyEntry e;
    e.statistic = monomial_name(mono, sample.k, sample.unitary);
    e.degree = int(mono.size());
    e.empirical = monomial_mean(sample, mono);
    if (haar_reference && forced_zero_by_symmetry(mono, sample.k, sample.unitary)) {
      e.reference = 0;
      e.reference_source = "exact-symmetry";
    } else {
      size_t per = reference.entries_per_matrix();
      size_t n = reference.size();
      std::vector<double> vals(n);
      for (size_t m = 0; m < n; ++m) {
        double v = 1;
        for (size_t c : mono) v *= reference.data[m * per + c];
        vals[m] = v;
      }
      e.reference = sorted_mean(vals);
      e.reference_source = haar_reference ? "monte-carlo" : "sample";
      e.mc_count = n;
      e.mc_stderr = sorted_stddev(vals, e.reference) / std::sqrt(double(n));
    }
    e.gap = std::fabs(e.empirical - e.reference);
    rep.entries.push_back(std::move(e));
  });
  return rep;
}

}  // namespace

double DiscrepancyReport::sup_gap(int degree) const {
  double s = 0;
  for (const auto& e : entries)
    if (e.degree == degree) s = std::max(s, e.gap);
  return s;
}

double DiscrepancyReport::sup_gap_up_to(int degree) const {
  double s = 0;
  for (const auto& e : entries)
    if (e.degree <= degree) s = std::max(s, e.gap);
  return s;
}

DiscrepancyReport weyl_discrepancy_haar(const EmpiricalSample& sample,
                                        const EmpiricalSample& haar_mc, int max_degree) {
  return weyl_impl(sample, haar_mc, max_degree, true);
}

DiscrepancyReport weyl_discrepancy(const EmpiricalSample& sample,
                                   const EmpiricalSample& reference, int max_degree) {
  return weyl_impl(sample, reference, max_degree, false);
}

DiscrepancyReport cap_discrepancy(const EmpiricalSample& sample,
                                  const std::array<double, 3>& direction,
                                  const std::vector<double>& cap_angles) {
  if (sample.k != 3 || sample.unitary)
    throw std::invalid_argument("cap_discrepancy: requires real 3x3 samples");
  double norm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                          direction[2] * direction[2]);
  if (std::fabs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("cap_discrepancy: direction must be a unit vector");
  DiscrepancyReport rep;
  size_t n = sample.size();
  for (double theta : cap_angles) {
    double cosT = std::cos(theta);
    // boundary images carry weight 1/2: atomic samples often sit exactly on
    // the cap boundary (signed axes), and the half-open choices bias them
    std::vector<double> vals(n);
    for (size_t m = 0; m < n; ++m) {
      const double* g = &sample.data[m * 9];
      double dot = 0;
      for (int i = 0; i < 3; ++i) {
        double gi = 0;
        for (int j = 0; j < 3; ++j) gi += g[i * 3 + j] * direction[j];
        dot += gi * direction[i];
      }
      if (dot > cosT + 1e-12)
        vals[m] = 1;
      else if (dot >= cosT - 1e-12)
        vals[m] = 0.5;
      else
        vals[m] = 0;
    }
    DiscrepancyEntry e;
    e.statistic = "cap(theta=" + std::to_string(theta) + ")";
    e.degree = 0;
    e.empirical = sorted_mean(vals);
    e.reference = (1.0 - cosT) / 2.0;
    e.reference_source = "exact-symmetry";
    e.gap = std::fabs(e.empirical - e.reference);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace scaliso
