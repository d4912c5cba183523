// Copyright 2026 The gradate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>

#include "gradate/json_util.hpp"
#include "gradate/model.hpp"

namespace gradate {

using json = nlohmann::json;

json parameters_to_json(const Parameters& params) {
  params.validate();
  json doc;
  doc["version"] = 1;
  doc["d"] = params.input_dim();
  doc["d_prime"] = params.hidden_dim();
  doc["W_ns"] = matrix_to_json(params.w_ns);
  doc["B_ns"] = matrix_to_json(params.b_ns);
  doc["W_nn"] = matrix_to_json(params.w_nn);
  doc["B_nn"] = matrix_to_json(params.b_nn);
  return doc;
}

Parameters parameters_from_json(const json& doc, const std::vector<std::string>& allowed_extra) {
  if (!doc.is_object()) throw SchemaError("model: top level must be an object");
  static const std::vector<std::string> kKeys{"version", "d", "d_prime", "W_ns", "B_ns", "W_nn", "B_nn"};
  for (const auto& key : kKeys) {
    if (!doc.contains(key)) throw SchemaError("model: missing field '" + key + "'");
  }
  for (const auto& [key, _] : doc.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end() &&
        std::find(allowed_extra.begin(), allowed_extra.end(), key) == allowed_extra.end()) {
      throw SchemaError("model: unknown field '" + key + "'");
    }
  }
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != 1) {
    throw SchemaError("model: unsupported version (expected 1)");
  }
  if (!doc["d"].is_number_integer() || !doc["d_prime"].is_number_integer()) {
    throw SchemaError("model: 'd' and 'd_prime' must be integers");
  }
  const auto d = doc["d"].get<Eigen::Index>();
  const auto dp = doc["d_prime"].get<Eigen::Index>();
  if (d < 1 || dp < 1) throw SchemaError("model: dimensions must be positive");
  Parameters p;
  p.w_ns = matrix_from_json(doc["W_ns"], d, dp, "W_ns");
  p.b_ns = matrix_from_json(doc["B_ns"], dp, dp, "B_ns");
  p.w_nn = matrix_from_json(doc["W_nn"], d, dp, "W_nn");
  p.b_nn = matrix_from_json(doc["B_nn"], dp, dp, "B_nn");
  if (!p.all_finite()) throw SchemaError("model: non-finite parameter entries");
  return p;
}

}  // namespace gradate
