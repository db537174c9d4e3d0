#include "scaliso/experiments.hpp"

#include "scaliso/rng.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

namespace scaliso {

std::vector<long long> ExperimentConfig::resolve_n() const {
  std::vector<long long> base = n_values;
  if (base.empty())
    for (long long n = n_from; n <= n_to; ++n) base.push_back(n);
  std::vector<long long> out;
  long long coprime_to = 0;
  if (filter.rfind("coprime:", 0) == 0) coprime_to = std::stoll(filter.substr(8));
  for (long long n : base) {
    if (n < 1) throw std::invalid_argument("config: n values must be >= 1");
    if (filter == "odd" && n % 2 == 0) continue;
    if (filter == "even" && n % 2 == 1) continue;
    if (coprime_to && std::gcd(n, coprime_to) != 1) continue;
    out.push_back(n);
  }
  return out;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["form"] = c.form;
  j["form2"] = c.form2;
  j["n_values"] = c.n_values;
  j["n_from"] = c.n_from;
  j["n_to"] = c.n_to;
  j["filter"] = c.filter;
  j["degree"] = c.degree;
  j["haar_samples"] = c.haar_samples;
  j["seed"] = c.seed;
  j["node_budget"] = c.node_budget;
  j["count_limit"] = c.count_limit;
  j["max_precision"] = c.max_precision;
  j["workers"] = c.workers;
  j["content_mode"] = c.content_mode;
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.form = j.value("form", c.form);
  c.form2 = j.value("form2", c.form2);
  c.n_values = j.value("n_values", c.n_values);
  c.n_from = j.value("n_from", c.n_from);
  c.n_to = j.value("n_to", c.n_to);
  c.filter = j.value("filter", c.filter);
  c.degree = j.value("degree", c.degree);
  c.haar_samples = j.value("haar_samples", c.haar_samples);
  c.seed = j.value("seed", c.seed);
  c.node_budget = j.value("node_budget", c.node_budget);
  c.count_limit = j.value("count_limit", c.count_limit);
  c.max_precision = j.value("max_precision", c.max_precision);
  c.workers = j.value("workers", c.workers);
  c.content_mode = j.value("content_mode", c.content_mode);
  c.out = j.value("out", c.out);
  c.format = j.value("format", c.format);
  return c;
}

int resolve_workers(int configured) {
  if (configured > 0) return configured;
  if (const char* env = std::getenv("SCALISO_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

namespace {

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void emit(std::ostream& os, const Json& j) { os << j.dump() << "\n"; }

EnumOptions enum_options(const ExperimentConfig& cfg) {
  EnumOptions o;
  o.node_budget = cfg.node_budget;
  o.max_solutions = cfg.count_limit;
  o.threads = resolve_workers(cfg.workers);
  o.content_mode = cfg.content_mode == "gaussian" ? ContentMode::Gaussian : ContentMode::Rational;
  return o;
}

bool is_canonical_q3(const Form& f) {
  return f.is_quadratic() && f.rank() == 3 && f.qgram == IntMatrix::identity(3);
}

}  // namespace

RunResult run_local_global_scan(const Form& f, const ExperimentConfig& cfg, std::ostream& os) {
  Timer timer;
  RunResult res;
  LocalBudget lb;
  lb.seed = cfg.seed;
  if (cfg.node_budget) lb.node_budget = cfg.node_budget;
  if (cfg.max_precision) lb.max_precision = cfg.max_precision;

  std::vector<long long> exceptions, unknowns;
  bool any_budget = false;
  std::vector<long long> ns = cfg.resolve_n();
  for (long long n : ns) {
    LocalProfile prof = local_profile(f, Int(long(n)), lb);
    EnumOptions eo = enum_options(cfg);
    SolutionSet sol = solve_scaled_isometry(f, Int(long(n)), eo);
    bool nonempty = sol.size() > 0;
    bool count_exact =
        !sol.stats.budget_exhausted && (cfg.count_limit == 0 || sol.size() < cfg.count_limit);
    any_budget |= sol.stats.budget_exhausted;

    Json row;
    row["type"] = "scan-row";
    row["n"] = n;
    row["local"] = profile_to_json(prof);
    row["count"] = sol.size();
    row["count_is_exact"] = count_exact;
    row["nonempty"] = nonempty;
    if (prof.undecided) {
      row["agree"] = "unknown";
      unknowns.push_back(n);
    } else {
      bool agree = prof.member == nonempty;
      row["agree"] = agree;
      if (!agree) exceptions.push_back(n);
    }
    row["nodes"] = sol.stats.nodes;
    emit(os, row);
  }
  Json summary;
  summary["type"] = "scan-summary";
  summary["rows"] = ns.size();
  summary["exceptions"] = exceptions;
  summary["unknown"] = unknowns;
  summary["budget_exhausted"] = any_budget;
  emit(os, summary);
  emit(os, Json{{"type", "timing"}, {"wall_ms", timer.ms()}});
  if (any_budget || !unknowns.empty()) res.exit_code = 2;
  return res;
}

RunResult run_equidist_sweep(const Form& f, const ExperimentConfig& cfg, std::ostream& os) {
  Timer timer;
  RunResult res;
  int k = f.rank();
  bool unitary = !f.is_quadratic();
  EmpiricalSample haar = haar_sample(k, cfg.haar_samples, derive_stream(cfg.seed, 0x4a41), unitary);

  std::vector<long long> ns = cfg.resolve_n();
  std::vector<double> gaps;
  std::vector<long long> gap_n;
  double max_stderr = 0;
  for (long long n : ns) {
    Json row;
    row["type"] = "equidist-row";
    row["n"] = n;
    SolutionSet sol;
    if (is_canonical_q3(f) && n % 2 == 1) {
      sol = denominator_n_rotations(n);
      row["path"] = "quaternion";
    } else {
      EnumOptions eo = enum_options(cfg);
      eo.max_solutions = 0;  // sweeps need the full set
      sol = solve_scaled_isometry(f, Int(long(n)), eo);
      row["path"] = "enumeration";
    }
    if (sol.size() == 0) {
      row["nonempty"] = false;
      emit(os, row);
      continue;
    }
    row["nonempty"] = true;
    row["sample_size"] = sol.size();
    EmpiricalSample emp = embed_solutions(f, sol);
    row["residual"] = emp.orthogonality_residual;
    DiscrepancyReport rep = weyl_discrepancy_haar(emp, haar, cfg.degree);
    row["sup_gap_deg1"] = rep.sup_gap(1);
    if (cfg.degree >= 2) row["sup_gap_deg2"] = rep.sup_gap(2);
    row["sup_gap"] = rep.sup_gap_up_to(cfg.degree);
    for (const auto& e : rep.entries)
      if (e.reference_source == "monte-carlo") max_stderr = std::max(max_stderr, e.mc_stderr);
    row["stats"] = report_to_json(rep);
    if (k == 3 && !unitary) {
      DiscrepancyReport caps = cap_discrepancy(
          emp, {1.0, 0.0, 0.0},
          {M_PI / 6, M_PI / 3, M_PI / 2, 2 * M_PI / 3});
      row["caps"] = report_to_json(caps);
      double capmax = 0;
      for (const auto& e : caps.entries) capmax = std::max(capmax, e.gap);
      row["sup_gap_caps"] = capmax;
    }
    gaps.push_back(cfg.degree >= 2 ? rep.sup_gap_up_to(2) : rep.sup_gap(1));
    gap_n.push_back(n);
    emit(os, row);
  }
  bool non_increasing = true;
  for (size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] > gaps[i - 1]) non_increasing = false;
  Json summary;
  summary["type"] = "equidist-summary";
  summary["n_list"] = gap_n;
  summary["sup_gaps"] = gaps;
  summary["non_increasing"] = non_increasing;
  summary["final_gap"] = gaps.empty() ? 0.0 : gaps.back();
  summary["haar_samples"] = cfg.haar_samples;
  summary["max_ref_stderr"] = max_stderr;
  summary["threshold_note"] = "acceptance threshold 0.05 at the largest n is a calibrated choice";
  emit(os, summary);
  emit(os, Json{{"type", "timing"}, {"wall_ms", timer.ms()}});
  return res;
}

RunResult run_genus_compare(const Form& f, const Form& g, const ExperimentConfig& cfg,
                            std::ostream& os) {
  Timer timer;
  RunResult res;
  GenusSearchBudget gb;
  gb.seed = cfg.seed;
  if (cfg.node_budget) gb.node_budget = cfg.node_budget;
  if (cfg.max_precision) gb.precision = cfg.max_precision;
  GenusVerdict verdict = genus_equivalent(f, g, gb);

  Json vj;
  vj["type"] = "genus-verdict";
  vj["status"] = verdict.status == GenusVerdict::Status::SameGenus ? "same_genus"
                 : verdict.status == GenusVerdict::Status::Distinct ? "distinct"
                                                                    : "undetermined";
  if (!verdict.detail.empty()) vj["detail"] = verdict.detail;
  Json wl = Json::array();
  for (const auto& [p, w] : verdict.witnesses)
    wl.push_back(Json{{"p", int_to_json(p)}, {"e", w.e}, {"g", matrix_to_json(w.g)}});
  vj["witnesses"] = wl;
  emit(os, vj);

  std::vector<long long> exceptions;
  for (long long n : cfg.resolve_n()) {
    EnumOptions eo = enum_options(cfg);
    SolutionSet sf = solve_scaled_isometry(f, Int(long(n)), eo);
    SolutionSet sg = solve_scaled_isometry(g, Int(long(n)), eo);
    Json row;
    row["type"] = "genus-row";
    row["n"] = n;
    row["count_f"] = sf.size();
    row["count_g"] = sg.size();
    bool exception = (sf.size() == 0) != (sg.size() == 0);
    row["exception"] = exception;
    if (exception) exceptions.push_back(n);
    emit(os, row);
  }
  Json summary;
  summary["type"] = "genus-summary";
  summary["exceptions"] = exceptions;
  emit(os, summary);
  emit(os, Json{{"type", "timing"}, {"wall_ms", timer.ms()}});
  return res;
}

}  // namespace scaliso
