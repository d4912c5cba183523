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
#include <cctype>

#include "gradate/errors.hpp"
#include "gradate/json_util.hpp"
#include "gradate/train.hpp"

namespace gradate {

using json = nlohmann::json;

std::string variant_name(ContrastVariant v) {
  switch (v) {
    case ContrastVariant::kNs: return "NS";
    case ContrastVariant::kNsSs: return "NS+SS";
    case ContrastVariant::kNsNn: return "NS+NN";
    case ContrastVariant::kFull: return "NS+NN+SS";
  }
  return "NS+NN+SS";
}

ContrastVariant parse_variant(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto v : {ContrastVariant::kNs, ContrastVariant::kNsSs, ContrastVariant::kNsNn, ContrastVariant::kFull}) {
    if (upper == variant_name(v)) return v;
  }
  throw ArgumentError("unknown variant '" + std::string(name) + "' (expected NS, NS+SS, NS+NN or NS+NN+SS)");
}

void Hyperparams::validate() const {
  auto open_unit = [](double x) { return 0.0 < x && x < 1.0; };
  if (!open_unit(alpha)) throw ArgumentError("hyperparams: alpha must lie in (0, 1)");
  if (!open_unit(beta)) throw ArgumentError("hyperparams: beta must lie in (0, 1)");
  if (!open_unit(gamma)) throw ArgumentError("hyperparams: gamma must lie in (0, 1)");
  if (subgraph_size < 1) throw ArgumentError("hyperparams: subgraph_size must be at least 1");
  if (hidden_dim < 1) throw ArgumentError("hyperparams: hidden_dim must be at least 1");
  if (epochs < 0) throw ArgumentError("hyperparams: epochs must be non-negative");
  if (batch_size < 2) throw ArgumentError("hyperparams: batch_size must be at least 2");
  if (rounds < 1) throw ArgumentError("hyperparams: rounds must be at least 1");
  if (!(lr > 0.0)) throw ArgumentError("hyperparams: lr must be positive");
  if (!open_unit(restart)) throw ArgumentError("hyperparams: restart must lie in (0, 1)");
  augment.validate();
}

LossWeights Hyperparams::loss_weights() const {
  LossWeights w;
  w.alpha = alpha;
  w.ss_include_positive = ss_include_positive;
  const bool nn = variant == ContrastVariant::kNsNn || variant == ContrastVariant::kFull;
  const bool ss = variant == ContrastVariant::kNsSs || variant == ContrastVariant::kFull;
  w.ns = nn ? beta : 1.0;
  w.nn = nn ? 1.0 - beta : 0.0;
  w.ss = ss ? gamma : 0.0;
  return w;
}

double Hyperparams::score_ns_weight() const { return loss_weights().ns; }

namespace {

template <typename T>
T get_checked(const json& j, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!j.is_boolean()) throw SchemaError("");
    } else if constexpr (std::is_integral_v<T>) {
      if (!j.is_number_integer()) throw SchemaError("");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!j.is_number()) throw SchemaError("");
    } else {
      if (!j.is_string()) throw SchemaError("");
    }
    return j.get<T>();
  } catch (const std::exception&) {
    throw SchemaError("config: field '" + key + "' has the wrong type");
  }
}

}  // namespace

Hyperparams hyperparams_from_json(const json& doc, Hyperparams hp) {
  if (!doc.is_object()) throw SchemaError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "subgraph_size") hp.subgraph_size = get_checked<Index>(value, key);
    else if (key == "hidden_dim") hp.hidden_dim = get_checked<Index>(value, key);
    else if (key == "epochs") hp.epochs = get_checked<Index>(value, key);
    else if (key == "batch_size") hp.batch_size = get_checked<Index>(value, key);
    else if (key == "rounds") hp.rounds = get_checked<Index>(value, key);
    else if (key == "P") hp.augment.edge_proportion = get_checked<double>(value, key);
    else if (key == "alpha") hp.alpha = get_checked<double>(value, key);
    else if (key == "beta") hp.beta = get_checked<double>(value, key);
    else if (key == "gamma") hp.gamma = get_checked<double>(value, key);
    else if (key == "lr") hp.lr = get_checked<double>(value, key);
    else if (key == "restart") hp.restart = get_checked<double>(value, key);
    else if (key == "augmentation") hp.augment.method = parse_augment_method(get_checked<std::string>(value, key));
    else if (key == "noise_sigma") {
      if (value.is_null()) hp.augment.noise_sigma.reset();
      else hp.augment.noise_sigma = get_checked<double>(value, key);
    }
    else if (key == "mask_ratio") hp.augment.mask_ratio = get_checked<double>(value, key);
    else if (key == "teleport") hp.augment.teleport = get_checked<double>(value, key);
    else if (key == "top_k") hp.augment.top_k = get_checked<Index>(value, key);
    else if (key == "seed") hp.seed = get_checked<std::uint64_t>(value, key);
    else if (key == "regenerate_view") hp.regenerate_view = get_checked<bool>(value, key);
    else if (key == "variant") hp.variant = parse_variant(get_checked<std::string>(value, key));
    else if (key == "ss_include_positive") hp.ss_include_positive = get_checked<bool>(value, key);
    else throw SchemaError("config: unknown field '" + key + "'");
  }
  return hp;
}

json hyperparams_to_json(const Hyperparams& hp) {
  json j;
  j["subgraph_size"] = hp.subgraph_size;
  j["hidden_dim"] = hp.hidden_dim;
  j["epochs"] = hp.epochs;
  j["batch_size"] = hp.batch_size;
  j["rounds"] = hp.rounds;
  j["P"] = hp.augment.edge_proportion;
  j["alpha"] = hp.alpha;
  j["beta"] = hp.beta;
  j["gamma"] = hp.gamma;
  j["lr"] = hp.lr;
  j["restart"] = hp.restart;
  j["augmentation"] = augment_method_name(hp.augment.method);
  j["noise_sigma"] = hp.augment.noise_sigma ? json(*hp.augment.noise_sigma) : json(nullptr);
  j["mask_ratio"] = hp.augment.mask_ratio;
  j["teleport"] = hp.augment.teleport;
  j["top_k"] = hp.augment.top_k;
  j["seed"] = hp.seed;
  j["regenerate_view"] = hp.regenerate_view;
  j["variant"] = variant_name(hp.variant);
  j["ss_include_positive"] = hp.ss_include_positive;
  return j;
}

Hyperparams load_hyperparams(const std::filesystem::path& path, Hyperparams base) {
  return hyperparams_from_json(parse_json_document(read_text_file(path), "config " + path.string()), base);
}

std::string model_to_json_text(const Parameters& params, const std::optional<Hyperparams>& hp) {
  json doc = parameters_to_json(params);
  if (hp) doc["hyperparams"] = hyperparams_to_json(*hp);
  return doc.dump() + "\n";
}

ModelFile model_from_json_text(const std::string& text) {
  const json doc = parse_json_document(text, "model");
  ModelFile file;
  file.params = parameters_from_json(doc, {"hyperparams"});
  if (doc.contains("hyperparams")) file.hyperparams = hyperparams_from_json(doc["hyperparams"]);
  return file;
}

void save_model(const std::filesystem::path& path, const Parameters& params, const std::optional<Hyperparams>& hp) {
  write_text_file(path, model_to_json_text(params, hp));
}

ModelFile load_model(const std::filesystem::path& path) { return model_from_json_text(read_text_file(path)); }

}  // namespace gradate
