// scaliso: enumerate, certify and statistically analyze rational matrices of
// a given denominator in compact orthogonal and unitary groups.

#include "scaliso/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace scaliso;

namespace {

std::unique_ptr<std::ofstream> out_file;
std::ostream* open_out(const std::string& path) {
  if (path.empty() || path == "-") return &std::cout;
  out_file = std::make_unique<std::ofstream>(path);
  if (!*out_file) throw std::invalid_argument("cannot open output file: " + path);
  return out_file.get();
}

void write_solutions_csv(std::ostream& os, const SolutionSet& s) {
  for (const IntMatrix& m : s.qsolutions) {
    os << s.n.get_str();
    for (const auto& x : m.flat()) os << "," << x.get_str();
    os << "\n";
  }
  for (const GaussMatrix& m : s.hsolutions) {
    os << s.n.get_str();
    for (const auto& x : m.flat()) os << "," << x.re.get_str() << "," << x.im.get_str();
    os << "\n";
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  Json j;
  in >> j;
  cfg = config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rational matrices of given denominator in compact groups"};
  app.require_subcommand(1);

  // ---- enumerate ----
  std::string en_form, en_out, en_format = "csv", en_content = "rational";
  long long en_n = 1;
  uint64_t en_max = 0, en_budget = 0;
  int en_threads = 0;
  bool en_count_only = false, en_improper = false;
  auto* en = app.add_subcommand("enumerate", "enumerate T(n, F, Z) exactly");
  en->add_option("--form", en_form, "form JSON file")->required();
  en->add_option("--n", en_n, "level n")->required();
  en->add_flag("--count-only", en_count_only, "report the cardinality only");
  en->add_option("--max-solutions", en_max, "stop after this many solutions");
  en->add_option("--node-budget", en_budget, "search node budget");
  en->add_option("--threads", en_threads, "worker threads (0 = SCALISO_WORKERS)");
  en->add_option("--content-mode", en_content, "rational | gaussian coprimality")
      ->check(CLI::IsMember({"rational", "gaussian"}));
  en->add_flag("--improper", en_improper, "include det = -n^k solutions");
  en->add_option("--out", en_out, "output path (default stdout)");
  en->add_option("--format", en_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  // ---- local-check ----
  std::string lc_form;
  long long lc_n = 1, lc_p = 0;
  int lc_max_e = 0;
  uint64_t lc_seed = 1;
  std::string lc_out;
  auto* lc = app.add_subcommand("local-check", "p-adic solvability with certificates");
  lc->add_option("--form", lc_form, "form JSON file")->required();
  lc->add_option("--n", lc_n, "level n")->required();
  lc->add_option("--p", lc_p, "single prime (default: all primes dividing n)");
  lc->add_option("--max-e", lc_max_e, "override the precision ladder bound");
  lc->add_option("--seed", lc_seed, "search seed");
  lc->add_option("--out", lc_out, "output path");

  // ---- quat-gen ----
  long long qg_n = 1;
  bool qg_raw = false;
  std::string qg_out;
  auto* qg = app.add_subcommand("quat-gen", "denominator-n rotations from quaternions (odd n)");
  qg->add_option("--n", qg_n, "odd level n")->required();
  qg->add_flag("--raw-quaternions", qg_raw, "emit (a,b,c,d) tuples of norm n instead");
  qg->add_option("--out", qg_out, "output path");

  // ---- equidist ----
  ExperimentConfig eq_cfg;
  std::string eq_config_path;
  auto* eq = app.add_subcommand("equidist", "discrepancy of solution sets against Haar");
  eq->add_option("--config", eq_config_path, "config JSON (flags override)");
  eq->add_option("--form", eq_cfg.form, "form JSON file");
  eq->add_option("--n", eq_cfg.n_values, "levels n (repeatable)");
  eq->add_option("--n-from", eq_cfg.n_from, "range start");
  eq->add_option("--n-to", eq_cfg.n_to, "range end");
  eq->add_option("--filter", eq_cfg.filter, "all | odd | even | coprime:N");
  eq->add_option("--degree", eq_cfg.degree, "max monomial degree (1..4)");
  eq->add_option("--haar-samples", eq_cfg.haar_samples, "Monte Carlo reference size");
  eq->add_option("--seed", eq_cfg.seed, "master seed");
  eq->add_option("--out", eq_cfg.out, "output path");

  // ---- coset-volume ----
  std::string cv_type = "A1";
  long long cv_q = 2;
  int cv_m = 1;
  bool cv_oracle = false;
  std::string cv_out;
  auto* cv = app.add_subcommand("coset-volume", "Cartan double-coset cardinality");
  cv->add_option("--type", cv_type, "A1 | A2")->check(CLI::IsMember({"A1", "A2"}));
  cv->add_option("--q", cv_q, "residue field size (prime)")->required();
  cv->add_option("--coweight", cv_m, "translation multiple m")->required();
  cv->add_flag("--oracle", cv_oracle, "also run the sublattice-counting oracle");
  cv->add_option("--out", cv_out, "output path");

  // ---- scan ----
  ExperimentConfig sc_cfg;
  std::string sc_config_path;
  bool sc_existence = false;
  auto* sc = app.add_subcommand("scan", "local-global agreement scan over a range of n");
  sc->add_option("--config", sc_config_path, "config JSON (flags override)");
  sc->add_option("--form", sc_cfg.form, "form JSON file");
  sc->add_option("--n", sc_cfg.n_values, "levels n (repeatable)");
  sc->add_option("--n-from", sc_cfg.n_from, "range start");
  sc->add_option("--n-to", sc_cfg.n_to, "range end");
  sc->add_option("--filter", sc_cfg.filter, "all | odd | even | coprime:N");
  sc->add_option("--count-limit", sc_cfg.count_limit, "stop counting at this many (0 = exact)");
  sc->add_flag("--existence-only", sc_existence, "same as --count-limit 1");
  sc->add_option("--node-budget", sc_cfg.node_budget, "per-n search budget");
  sc->add_option("--seed", sc_cfg.seed, "master seed");
  sc->add_option("--workers", sc_cfg.workers, "worker threads");
  sc->add_option("--out", sc_cfg.out, "output path");

  // ---- genus-compare ----
  ExperimentConfig gc_cfg;
  std::string gc_config_path;
  auto* gc = app.add_subcommand("genus-compare", "genus verdict plus shared-denominator table");
  gc->add_option("--config", gc_config_path, "config JSON (flags override)");
  gc->add_option("--form", gc_cfg.form, "first form JSON file");
  gc->add_option("--form2", gc_cfg.form2, "second form JSON file");
  gc->add_option("--n-from", gc_cfg.n_from, "range start");
  gc->add_option("--n-to", gc_cfg.n_to, "range end");
  gc->add_option("--n", gc_cfg.n_values, "levels n (repeatable)");
  gc->add_option("--count-limit", gc_cfg.count_limit, "stop counting at this many");
  gc->add_option("--seed", gc_cfg.seed, "master seed");
  gc->add_option("--out", gc_cfg.out, "output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*en) {
      Form f = load_form(en_form);
      EnumOptions o;
      o.count_only = en_count_only;
      o.max_solutions = en_max;
      o.node_budget = en_budget;
      o.threads = resolve_workers(en_threads);
      o.content_mode = en_content == "gaussian" ? ContentMode::Gaussian : ContentMode::Rational;
      o.include_improper = en_improper;
      std::ostream& os = *open_out(en_out);
      if (en_count_only) {
        Int c = count_solutions(f, Int(long(en_n)), o);
        os << Json{{"type", "count"}, {"n", en_n}, {"count", int_to_json(c)}}.dump() << "\n";
      } else {
        SolutionSet s = solve_scaled_isometry(f, Int(long(en_n)), o);
        if (en_format == "csv") {
          write_solutions_csv(os, s);
        } else {
          Json j;
          j["type"] = "solutions";
          j["form"] = form_to_json(f);
          j["n"] = en_n;
          j["count"] = s.size();
          Json arr = Json::array();
          for (const auto& m : s.qsolutions) arr.push_back(matrix_to_json(m));
          for (const auto& m : s.hsolutions) arr.push_back(matrix_to_json(m));
          j["solutions"] = arr;
          j["nodes"] = s.stats.nodes;
          j["budget_exhausted"] = s.stats.budget_exhausted;
          os << j.dump() << "\n";
          os << Json{{"type", "timing"}, {"wall_ms", s.stats.wall_ms}}.dump() << "\n";
        }
        if (s.stats.budget_exhausted) return 2;
      }
      return 0;
    }
    if (*lc) {
      Form f = load_form(lc_form);
      LocalBudget b;
      b.seed = lc_seed;
      if (lc_max_e) b.max_precision = lc_max_e;
      std::ostream& os = *open_out(lc_out);
      if (lc_p > 0) {
        LocalVerdict v = local_solvable(f, Int(long(lc_n)), Int(long(lc_p)), b);
        os << verdict_to_json(v).dump() << "\n";
        return v.outcome == LocalVerdict::Outcome::Unknown ? 2 : 0;
      }
      LocalProfile prof = local_profile(f, Int(long(lc_n)), b);
      os << profile_to_json(prof).dump() << "\n";
      return prof.undecided ? 2 : 0;
    }
    if (*qg) {
      std::ostream& os = *open_out(qg_out);
      if (qg_raw) {
        for (const Quaternion& x : quaternions_of_norm(qg_n))
          os << x.a << "," << x.b << "," << x.c << "," << x.d << "\n";
      } else {
        SolutionSet s = denominator_n_rotations(qg_n);
        write_solutions_csv(os, s);
      }
      return 0;
    }
    if (*eq) {
      ExperimentConfig cfg;
      apply_config_file(cfg, eq_config_path);
      if (eq->count("--form")) cfg.form = eq_cfg.form;
      if (eq->count("--n")) cfg.n_values = eq_cfg.n_values;
      if (eq->count("--n-from")) cfg.n_from = eq_cfg.n_from;
      if (eq->count("--n-to")) cfg.n_to = eq_cfg.n_to;
      if (eq->count("--filter")) cfg.filter = eq_cfg.filter;
      if (eq->count("--degree")) cfg.degree = eq_cfg.degree;
      if (eq->count("--haar-samples")) cfg.haar_samples = eq_cfg.haar_samples;
      if (eq->count("--seed")) cfg.seed = eq_cfg.seed;
      if (eq->count("--out")) cfg.out = eq_cfg.out;
      Form f = load_form(cfg.form);
      RunResult r = run_equidist_sweep(f, cfg, *open_out(cfg.out));
      return r.exit_code;
    }
    if (*cv) {
      RootSystem t = cv_type == "A1" ? RootSystem::A1 : RootSystem::A2;
      AffineWeylElement w = t == RootSystem::A1
                                ? AffineWeylElement::translation_of(t, {cv_m})
                                : AffineWeylElement::translation_of(t, {cv_m, 0, -cv_m});
      DoubleCosetSize s = double_coset_size(w, Int(long(cv_q)));
      Json j;
      j["type"] = "coset-volume";
      j["root_system"] = cv_type;
      j["q"] = cv_q;
      j["coweight"] = cv_m;
      j["length"] = weighted_length(w);
      j["formula_value"] =
          s.integral ? int_to_json(s.int_value) : Json(s.value.get_str());
      Json lens = Json::array();
      for (const auto& [y, l] : s.orbit) lens.push_back(l);
      j["orbit_lengths"] = lens;
      if (cv_oracle) {
        CosetGroup g = t == RootSystem::A1 ? CosetGroup::SL2 : CosetGroup::SL3;
        Int oracle = direct_coset_count(Int(long(cv_q)), cv_m, g);
        j["oracle_value"] = int_to_json(oracle);
        j["match"] = s.integral && oracle == s.int_value;
      }
      *open_out(cv_out) << j.dump() << "\n";
      return 0;
    }
    if (*sc) {
      ExperimentConfig cfg;
      apply_config_file(cfg, sc_config_path);
      if (sc->count("--form")) cfg.form = sc_cfg.form;
      if (sc->count("--n")) cfg.n_values = sc_cfg.n_values;
      if (sc->count("--n-from")) cfg.n_from = sc_cfg.n_from;
      if (sc->count("--n-to")) cfg.n_to = sc_cfg.n_to;
      if (sc->count("--filter")) cfg.filter = sc_cfg.filter;
      if (sc->count("--count-limit")) cfg.count_limit = sc_cfg.count_limit;
      if (sc_existence) cfg.count_limit = 1;
      if (sc->count("--node-budget")) cfg.node_budget = sc_cfg.node_budget;
      if (sc->count("--seed")) cfg.seed = sc_cfg.seed;
      if (sc->count("--workers")) cfg.workers = sc_cfg.workers;
      if (sc->count("--out")) cfg.out = sc_cfg.out;
      Form f = load_form(cfg.form);
      RunResult r = run_local_global_scan(f, cfg, *open_out(cfg.out));
      return r.exit_code;
    }
    if (*gc) {
      ExperimentConfig cfg;
      apply_config_file(cfg, gc_config_path);
      if (gc->count("--form")) cfg.form = gc_cfg.form;
      if (gc->count("--form2")) cfg.form2 = gc_cfg.form2;
      if (gc->count("--n")) cfg.n_values = gc_cfg.n_values;
      if (gc->count("--n-from")) cfg.n_from = gc_cfg.n_from;
      if (gc->count("--n-to")) cfg.n_to = gc_cfg.n_to;
      if (gc->count("--count-limit")) cfg.count_limit = gc_cfg.count_limit;
      if (gc->count("--seed")) cfg.seed = gc_cfg.seed;
      if (gc->count("--out")) cfg.out = gc_cfg.out;
      Form f = load_form(cfg.form);
      Form g = load_form(cfg.form2);
      RunResult r = run_genus_compare(f, g, cfg, *open_out(cfg.out));
      return r.exit_code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
