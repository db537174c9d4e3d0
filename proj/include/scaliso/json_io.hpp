#pragma once
// JSON (de)serialization: forms, matrices, integers beyond 53 bits as
// decimal strings, local verdicts and discrepancy reports.

#include "scaliso/equidist.hpp"
#include "scaliso/forms.hpp"
#include "scaliso/locals.hpp"

#include <json.hpp>

namespace scaliso {

using Json = nlohmann::json;

Json int_to_json(const Int& x);
Int int_from_json(const Json& j);
Json gaussian_to_json(const GaussianInt& x);

Json matrix_to_json(const IntMatrix& m);
Json matrix_to_json(const GaussMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);
GaussMatrix gauss_matrix_from_json(const Json& j);

// { "kind": "quadratic"|"hermitian", "gram": [[...]] }
Json form_to_json(const Form& f);
Form form_from_json(const Json& j);
Form load_form(const std::string& path);

Json verdict_to_json(const LocalVerdict& v);
Json profile_to_json(const LocalProfile& p);
Json report_to_json(const DiscrepancyReport& r);

}  // namespace scaliso
