#include "scaliso/json_io.hpp"

#include <fstream>

namespace scaliso {

Json int_to_json(const Int& x) {
  // doubles hold 53-bit integers exactly; beyond that use decimal strings
  static const Int lim = Int(1) << 53;
  if (x < lim && x > -lim) return Json(x.get_si());
  return Json(x.get_str());
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) return Int(j.get<std::string>());
  throw std::invalid_argument("expected integer or decimal string");
}

Json gaussian_to_json(const GaussianInt& x) {
  return Json::array({int_to_json(x.re), int_to_json(x.im)});
}

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json matrix_to_json(const GaussMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(gaussian_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

IntMatrix int_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
  int r = int(j.size()), c = int(j[0].size());
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (int(j[size_t(i)].size()) != c) throw std::invalid_argument("matrix: ragged rows");
    for (int l = 0; l < c; ++l) m(i, l) = int_from_json(j[size_t(i)][size_t(l)]);
  }
  return m;
}

GaussMatrix gauss_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected non-empty array");
  int r = int(j.size()), c = int(j[0].size());
  GaussMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int l = 0; l < c; ++l) {
      const Json& e = j[size_t(i)][size_t(l)];
      if (e.is_array()) {
        if (e.size() != 2) throw std::invalid_argument("gaussian entry: expected [re, im]");
        m(i, l) = GaussianInt(int_from_json(e[0]), int_from_json(e[1]));
      } else {
        m(i, l) = GaussianInt(int_from_json(e));
      }
    }
  return m;
}

Json form_to_json(const Form& f) {
  Json j;
  j["kind"] = f.is_quadratic() ? "quadratic" : "hermitian";
  j["gram"] = f.is_quadratic() ? matrix_to_json(f.qgram) : matrix_to_json(f.hgram);
  return j;
}

Form form_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") return Form::quadratic(int_matrix_from_json(j.at("gram")));
  if (kind == "hermitian") return Form::hermitian(gauss_matrix_from_json(j.at("gram")));
  throw std::invalid_argument("form: kind must be quadratic or hermitian");
}

Form load_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open form file: " + path);
  Json j;
  in >> j;
  return form_from_json(j);
}

Json verdict_to_json(const LocalVerdict& v) {
  Json j;
  j["p"] = int_to_json(v.p);
  j["n"] = int_to_json(v.n);
  switch (v.outcome) {
    case LocalVerdict::Outcome::Yes:
      j["outcome"] = "yes";
      j["method"] = v.method;
      j["precision"] = v.witness_precision;
      j["witness"] = v.witness.rows() ? matrix_to_json(v.witness) : matrix_to_json(v.gwitness);
      if (v.cert.lifted_to > 0) {
        j["lift_certificate"] = {{"base_precision", v.cert.base_precision},
                                 {"jacobian_val", v.cert.jacobian_val},
                                 {"lifted_to", v.cert.lifted_to}};
      }
      break;
    case LocalVerdict::Outcome::No:
      j["outcome"] = "no";
      j["method"] = v.method;
      j["exhausted_precision"] = v.exhausted_precision;
      break;
    case LocalVerdict::Outcome::Unknown:
      j["outcome"] = "unknown";
      j["reason"] = v.reason;
      break;
  }
  return j;
}

Json profile_to_json(const LocalProfile& p) {
  Json j;
  j["n"] = int_to_json(p.n);
  j["member"] = p.undecided ? Json("unknown") : Json(p.member);
  Json v = Json::array();
  for (const auto& verdict : p.verdicts) v.push_back(verdict_to_json(verdict));
  j["verdicts"] = v;
  return j;
}

Json report_to_json(const DiscrepancyReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json je;
    je["statistic"] = e.statistic;
    je["degree"] = e.degree;
    je["empirical"] = e.empirical;
    je["reference"] = e.reference;
    je["reference_source"] = e.reference_source;
    if (e.reference_source == "monte-carlo") {
      je["mc_count"] = e.mc_count;
      je["mc_stderr"] = e.mc_stderr;
    }
    je["gap"] = e.gap;
    entries.push_back(je);
  }
  return entries;
}

}  // namespace scaliso
