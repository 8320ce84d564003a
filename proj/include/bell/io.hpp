#pragma once

#include <json.hpp>
#include <string>

#include "bell/core.hpp"
#include "bell/quantum.hpp"

namespace bell::io {

using nlohmann::json;

// JSON schemas (field names are part of the on-disk contract):
//   behavior   {"scenario":{"parties","inputs","outputs"},"p":[...]}
//   expression {"scenario":...,"s":[...],"meta":{"local_bound","quantum_bound",
//               "ns_bound"}}
//   model      {"dims":[...],"rho":[[re,im],...],
//               "measurements":[party][input][outcome] -> [[re,im],...]}
json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const json& j);

json behavior_to_json(const Behavior& b);
Behavior behavior_from_json(const json& j);

json expression_to_json(const BellExpression& e);
BellExpression expression_from_json(const json& j);

json model_to_json(const quantum::QuantumModel& m);
// Hermiticity is enforced by symmetrization on load; the pre-symmetrization
// residual is reported through `hermiticity_residual`.
quantum::QuantumModel model_from_json(const json& j, double* hermiticity_residual = nullptr);

json matrix_to_json(const quantum::MatrixXcd& m);
quantum::MatrixXcd matrix_from_json(const json& j, int dim);

// Serialization with every float rendered as a decimal with 17 significant
// digits (bit-exact round trips).
std::string dump17(const json& j, int indent = -1);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace bell::io
