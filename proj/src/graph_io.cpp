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
#include <fstream>
#include <sstream>

#include "gradate/errors.hpp"
#include "gradate/graph.hpp"
#include "gradate/json_util.hpp"

namespace gradate {

using json = nlohmann::json;

namespace {

Index expect_index(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw SchemaError("dataset: field '" + field + "' must be an integer");
  return j.get<Index>();
}

}  // namespace

Graph graph_from_json_text(const std::string& text) {
  const json doc = parse_json_document(text, "dataset");
  if (!doc.is_object()) throw SchemaError("dataset: top level must be an object");
  for (const char* key : {"num_nodes", "features", "edges"}) {
    if (!doc.contains(key)) throw SchemaError(std::string("dataset: missing field '") + key + "'");
  }
  for (const auto& [key, _] : doc.items()) {
    if (key != "name" && key != "num_nodes" && key != "features" && key != "edges" && key != "labels") {
      throw SchemaError("dataset: unknown field '" + key + "'");
    }
  }

  const Index n = expect_index(doc["num_nodes"], "num_nodes");
  if (n < 0) throw SchemaError("dataset: 'num_nodes' must be non-negative");

  const json& feats = doc["features"];
  if (!feats.is_array() || static_cast<Index>(feats.size()) != n) {
    throw SchemaError("dataset: 'features' must be an array of num_nodes rows");
  }
  const Index d = n > 0 && feats[0].is_array() ? static_cast<Index>(feats[0].size()) : 0;
  Eigen::MatrixXd features(n, d);
  for (Index i = 0; i < n; ++i) {
    const json& row = feats[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      throw SchemaError("dataset: features[" + std::to_string(i) + "] must have " + std::to_string(d) + " entries");
    }
    for (Index k = 0; k < d; ++k) {
      if (!row[k].is_number()) {
        throw SchemaError("dataset: features[" + std::to_string(i) + "][" + std::to_string(k) + "] is not a number");
      }
      features(i, k) = row[k].get<double>();
    }
  }

  const json& edge_list = doc["edges"];
  if (!edge_list.is_array()) throw SchemaError("dataset: 'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(edge_list.size());
  for (std::size_t k = 0; k < edge_list.size(); ++k) {
    const json& e = edge_list[k];
    const std::string where = "edges[" + std::to_string(k) + "]";
    if (!e.is_array() || e.size() != 2) throw SchemaError("dataset: " + where + " must be a pair");
    const Index u = expect_index(e[0], where + "[0]");
    const Index v = expect_index(e[1], where + "[1]");
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw IndexError("dataset: " + where + " = [" + std::to_string(u) + "," + std::to_string(v) +
                       "] references a node >= num_nodes " + std::to_string(n));
    }
    if (u == v) throw ValidationError("dataset: " + where + " is a self-loop on node " + std::to_string(u));
    edges.emplace_back(u, v);
  }

  std::optional<std::vector<int>> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    const json& lab = doc["labels"];
    if (!lab.is_array() || static_cast<Index>(lab.size()) != n) {
      throw SchemaError("dataset: 'labels' must be an array of num_nodes entries");
    }
    labels.emplace(n);
    for (Index i = 0; i < n; ++i) {
      if (!lab[i].is_number_integer() || (lab[i] != 0 && lab[i] != 1)) {
        throw SchemaError("dataset: labels[" + std::to_string(i) + "] must be 0 or 1");
      }
      (*labels)[i] = lab[i].get<int>();
    }
  }

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw SchemaError("dataset: 'name' must be a string");
    name = doc["name"].get<std::string>();
  }
  return Graph(n, std::move(edges), std::move(features), std::move(labels), std::move(name));
}

std::string graph_to_json_text(const Graph& g) {
  json doc;
  doc["name"] = g.name();
  doc["num_nodes"] = g.num_nodes();
  doc["features"] = matrix_to_json(g.features());
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  doc["edges"] = std::move(edges);
  if (g.labels()) doc["labels"] = *g.labels();
  return doc.dump() + "\n";
}

Graph load_graph(const std::filesystem::path& path) {
  return graph_from_json_text(read_text_file(path));
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  write_text_file(path, graph_to_json_text(g));
}

}  // namespace gradate
