#pragma once
// Experiment orchestration: local-global scans, equidistribution sweeps and
// genus comparisons, emitted as newline-delimited JSON records with one
// summary record per run.  Identical config + seed gives byte-identical
// reports apart from the trailing timing record.

#include "scaliso/cartan.hpp"
#include "scaliso/equidist.hpp"
#include "scaliso/json_io.hpp"
#include "scaliso/so3.hpp"

#include <ostream>

namespace scaliso {

struct ExperimentConfig {
  std::string form;   // path to the form JSON
  std::string form2;  // second form (genus comparison)
  std::vector<long long> n_values;  // explicit list; wins over the range
  long long n_from = 1;
  long long n_to = 0;
  std::string filter = "all";  // all | odd | even | coprime:N
  int degree = 2;
  uint64_t haar_samples = 100000;
  uint64_t seed = 1;
  uint64_t node_budget = 0;
  uint64_t count_limit = 0;  // 0 = exact counts; else stop counting at limit
  int max_precision = 0;
  int workers = 0;  // 0 = SCALISO_WORKERS or 1
  std::string content_mode = "rational";
  std::string out;            // empty = stdout
  std::string format = "json";

  bool operator==(const ExperimentConfig&) const = default;
  std::vector<long long> resolve_n() const;
};

Json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 partial (budget exhausted)
};

// one record per n: local profile, (possibly truncated) global count, and
// the local <=> global agreement flag
RunResult run_local_global_scan(const Form& f, const ExperimentConfig& cfg, std::ostream& os);

// one record per n: discrepancy report of the embedded solution set against
// a shared Haar Monte Carlo reference
RunResult run_equidist_sweep(const Form& f, const ExperimentConfig& cfg, std::ostream& os);

// genus verdict followed by a per-n count comparison table
RunResult run_genus_compare(const Form& f, const Form& g, const ExperimentConfig& cfg,
                            std::ostream& os);

int resolve_workers(int configured);

}  // namespace scaliso
