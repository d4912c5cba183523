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

#ifndef GRADATE_GRAPH_HPP_
#define GRADATE_GRAPH_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gradate/random.hpp"

namespace gradate {

using Index = Eigen::Index;
using Edge = std::pair<Index, Index>;

/// Symmetrically normalized adjacency D^-1/2 (A + I) D^-1/2, stored dense.
/// Subgraphs are tiny, and the only full-graph use is the diffusion
/// augmentation, which needs a dense solve anyway.
using NormalizedAdjacency = Eigen::MatrixXd;

/// Undirected attributed graph.
///
/// Edges are stored once per pair as (u, v) with u < v, sorted, plus a CSR
/// neighbor index that holds both directions. Construction canonicalizes
/// and deduplicates the edge list and rejects self-loops, out-of-range ids,
/// and a feature matrix whose row count differs from the node count.
/// Instances are immutable; the `with_*` helpers build modified copies.
class Graph {
 public:
  Graph() = default;
  Graph(Index num_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
        std::optional<std::vector<int>> labels = std::nullopt, std::string name = {});

  Index num_nodes() const { return num_nodes_; }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }
  Index feature_dim() const { return features_.cols(); }

  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::MatrixXd& features() const { return features_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  const std::string& name() const { return name_; }

  std::span<const Index> neighbors(Index v) const;
  Index degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(Index u, Index v) const;

  Graph with_edges(std::vector<Edge> edges) const;
  Graph with_features(Eigen::MatrixXd features) const;
  Graph with_labels(std::optional<std::vector<int>> labels) const;

  /// Re-checks every storage invariant; throws ValidationError on failure.
  void validate() const;

 private:
  Index num_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<Index> offsets_{0};
  std::vector<Index> adjacency_;
  Eigen::MatrixXd features_;
  std::optional<std::vector<int>> labels_;
  std::string name_;
};

/// Normalized adjacency of the whole graph.
NormalizedAdjacency normalize_adjacency(const Graph& g);

/// Normalized adjacency of the subgraph induced on `nodes`, in that order.
/// A position whose id already occurred earlier in the list is padding: it
/// gets a self-loop and no other edges.
NormalizedAdjacency normalize_adjacency(const Graph& g, std::span<const Index> nodes);

struct AnomalyLabels {
  std::vector<Index> structural;  // sorted
  std::vector<Index> feature;     // sorted
  std::vector<Index> all;         // sorted union
};

struct InjectionConfig {
  Index n_structural = 0;
  Index n_feature = 0;
  Index clique_size = 15;
  Index candidate_pool = 50;
};

struct InjectionResult {
  Graph graph;
  AnomalyLabels labels;
};

/// Injects clique (structural) and far-feature-copy (feature) anomalies on
/// disjoint nodes drawn from currently unlabeled nodes. The returned graph
/// carries labels marking both sets (merged with any existing labels).
InjectionResult inject_anomalies(const Graph& g, const InjectionConfig& config, Rng& rng);

struct SyntheticConfig {
  Index num_nodes = 500;
  Index feature_dim = 32;
  Index num_blocks = 5;
  double p_in = 0.05;
  double p_out = 0.002;
  double mean_scale = 1.0;   // std of per-block mean entries
  double noise_scale = 1.0;  // std of per-node noise around the block mean
};

/// Stochastic block model with per-block Gaussian features. Blocks are
/// contiguous id ranges of near-equal size.
Graph generate_synthetic(const SyntheticConfig& config, Rng& rng);

/// Block id of node `v` under generate_synthetic's layout.
Index synthetic_block_of(Index v, Index num_nodes, Index num_blocks);

// Dataset JSON:
//   {"name": str, "num_nodes": int, "features": [[float...]...],
//    "edges": [[u, v]...], "labels": [0|1...] (optional)}
Graph graph_from_json_text(const std::string& text);
std::string graph_to_json_text(const Graph& g);
Graph load_graph(const std::filesystem::path& path);
void save_graph(const Graph& g, const std::filesystem::path& path);

}  // namespace gradate

#endif  // GRADATE_GRAPH_HPP_
