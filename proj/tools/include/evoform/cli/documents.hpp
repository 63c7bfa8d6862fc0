#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "evoform/closure.hpp"
#include "evoform/error.hpp"
#include "evoform/evolution.hpp"
#include "evoform/form.hpp"
#include "evoform/geometry.hpp"

namespace evoform::cli {

using json = nlohmann::json;

/// Document does not match its schema. `pointer` is a JSON pointer into the
/// offending document, e.g. "/terms/0/indices".
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error("schema error at " + (pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(pointer) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

json read_json(const std::string& path);
/// Two-space indented text with sorted keys and a trailing newline.
std::string dump(const json& j);
void write_text(const std::string& path, const std::string& text);

/// Form document {"dim", "degree", "terms": [{"indices", "coeff"}], "coords"?}.
/// Coefficients are parsed over "coords" when present, else over `coords`,
/// else over the default names for the dimension.
DifferentialForm form_from_json(const json& j, const std::vector<std::string>* coords = nullptr,
                                const std::string& at = "");
json form_to_json(const DifferentialForm& f, const std::vector<std::string>& coords);
std::vector<std::string> form_coords(const json& j, const std::vector<std::string>* coords);

/// Chart document {"dim", "coords", "metric"?, "connection"?, "sample_box"?,
/// "star_shaped"?}; connection[s][b][a] = Gamma^s_{b a}.
Chart chart_from_json(const json& j, const ZeroTest& checks, const std::string& at = "");
json chart_to_json(const Chart& c);

/// Pseudostructure document {"constraints", "parametrization": {"params",
/// "map", "box"?} | null} over an ambient chart.
Pseudostructure pseudo_from_json(const json& j, const std::vector<std::string>& ambient, const SampleBox& box,
                                 const ZeroTest& checks, const std::string& at = "");
json pseudo_to_json(const Pseudostructure& ps);

/// Relation document {"chart", "psi": form | null, "omega": form | {"A": [...]},
/// "degree"}.
MaterialSystemSpec relation_from_json(const json& j, const ZeroTest& checks);
json relation_to_json(const MaterialSystemSpec& spec);

/// Functional document {"kind": "raw" | "jacobian_det" | "determinant" |
/// "poisson_bracket", ...} over the chart's coordinates.
DegeneracyFunctional functional_from_json(const json& j, const std::vector<std::string>& coords);

}  // namespace evoform::cli
