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

#include "gradate/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gradate/errors.hpp"

namespace gradate {

Graph::Graph(Index num_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
             std::optional<std::vector<int>> labels, std::string name)
    : num_nodes_(num_nodes),
      features_(std::move(features)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
  if (num_nodes_ < 0) throw ArgumentError("graph: negative node count");
  if (features_.rows() != num_nodes_) {
    throw ValidationError("graph: features have " + std::to_string(features_.rows()) +
                          " rows, expected " + std::to_string(num_nodes_));
  }
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) {
      throw IndexError("graph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") out of range for " + std::to_string(num_nodes_) + " nodes");
    }
    if (u == v) throw ValidationError("graph: self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  if (labels_) {
    if (static_cast<Index>(labels_->size()) != num_nodes_) {
      throw ValidationError("graph: labels have " + std::to_string(labels_->size()) +
                            " entries, expected " + std::to_string(num_nodes_));
    }
    for (int l : *labels_) {
      if (l != 0 && l != 1) throw ValidationError("graph: labels must be 0 or 1");
    }
  }

  offsets_.assign(num_nodes_ + 1, 0);
  for (const auto& [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * edges_.size());
  std::vector<Index> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
  for (Index i = 0; i < num_nodes_; ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

std::span<const Index> Graph::neighbors(Index v) const {
  return {adjacency_.data() + offsets_[v], static_cast<std::size_t>(degree(v))};
}

bool Graph::has_edge(Index u, Index v) const {
  if (u == v) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::with_edges(std::vector<Edge> edges) const {
  return Graph(num_nodes_, std::move(edges), features_, labels_, name_);
}

Graph Graph::with_features(Eigen::MatrixXd features) const {
  return Graph(num_nodes_, edges_, std::move(features), labels_, name_);
}

Graph Graph::with_labels(std::optional<std::vector<int>> labels) const {
  return Graph(num_nodes_, edges_, features_, std::move(labels), name_);
}

void Graph::validate() const {
  if (features_.rows() != num_nodes_) throw ValidationError("graph: feature row count");
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto [u, v] = edges_[k];
    if (!(0 <= u && u < v && v < num_nodes_)) throw ValidationError("graph: malformed edge");
    if (k > 0 && edges_[k - 1] >= edges_[k]) throw ValidationError("graph: unsorted or duplicate edge");
    if (!has_edge(u, v) || !has_edge(v, u)) throw ValidationError("graph: asymmetric adjacency");
  }
  if (static_cast<std::size_t>(offsets_.back()) != 2 * edges_.size()) {
    throw ValidationError("graph: adjacency size mismatch");
  }
}

NormalizedAdjacency normalize_adjacency(const Graph& g) {
  std::vector<Index> all(g.num_nodes());
  std::iota(all.begin(), all.end(), Index{0});
  return normalize_adjacency(g, all);
}

NormalizedAdjacency normalize_adjacency(const Graph& g, std::span<const Index> nodes) {
  const auto n = static_cast<Index>(nodes.size());
  std::vector<bool> padding(n, false);
  for (Index a = 0; a < n; ++a) {
    if (nodes[a] < 0 || nodes[a] >= g.num_nodes()) {
      throw IndexError("normalize_adjacency: node " + std::to_string(nodes[a]) + " out of range");
    }
    for (Index b = 0; b < a; ++b) {
      if (nodes[b] == nodes[a]) {
        padding[a] = true;
        break;
      }
    }
  }

  Eigen::MatrixXd adj = Eigen::MatrixXd::Identity(n, n);
  for (Index a = 0; a < n; ++a) {
    if (padding[a]) continue;
    for (Index b = a + 1; b < n; ++b) {
      if (!padding[b] && g.has_edge(nodes[a], nodes[b])) adj(a, b) = adj(b, a) = 1.0;
    }
  }
  const Eigen::VectorXd inv_sqrt_deg = adj.rowwise().sum().array().rsqrt();
  return inv_sqrt_deg.asDiagonal() * adj * inv_sqrt_deg.asDiagonal();
}

namespace {

// Partial Fisher-Yates: moves a uniform sample of `k` elements to the front.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index<std::size_t>(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

}  // namespace

InjectionResult inject_anomalies(const Graph& g, const InjectionConfig& config, Rng& rng) {
  const Index n = g.num_nodes();
  if (config.n_structural < 0 || config.n_feature < 0) {
    throw ArgumentError("inject_anomalies: negative anomaly count");
  }
  if (config.n_structural > 0 && (config.clique_size < 2 || config.n_structural % config.clique_size != 0)) {
    throw ArgumentError("inject_anomalies: structural count " + std::to_string(config.n_structural) +
                        " is not a multiple of clique size " + std::to_string(config.clique_size));
  }
  if (config.candidate_pool < 1 && config.n_feature > 0) {
    throw ArgumentError("inject_anomalies: candidate pool must be positive");
  }

  std::vector<int> labels = g.labels().value_or(std::vector<int>(n, 0));
  std::vector<Index> free_nodes;
  for (Index v = 0; v < n; ++v) {
    if (labels[v] == 0) free_nodes.push_back(v);
  }
  const Index wanted = config.n_structural + config.n_feature;
  if (wanted > static_cast<Index>(free_nodes.size())) {
    throw ArgumentError("inject_anomalies: need " + std::to_string(wanted) + " unlabeled nodes, have " +
                        std::to_string(free_nodes.size()));
  }
  if (wanted == 0) return {g, {}};

  partial_shuffle(free_nodes, static_cast<std::size_t>(wanted), rng);
  AnomalyLabels result;
  result.structural.assign(free_nodes.begin(), free_nodes.begin() + config.n_structural);
  result.feature.assign(free_nodes.begin() + config.n_structural, free_nodes.begin() + wanted);

  std::vector<Edge> edges = g.edges();
  for (Index c = 0; c < config.n_structural; c += config.clique_size) {
    for (Index a = c; a < c + config.clique_size; ++a) {
      for (Index b = a + 1; b < c + config.clique_size; ++b) {
        edges.emplace_back(result.structural[a], result.structural[b]);
      }
    }
  }

  const Eigen::MatrixXd& original = g.features();
  Eigen::MatrixXd features = original;
  std::vector<Index> others(n > 0 ? n - 1 : 0);
  for (Index target : result.feature) {
    // Candidates are every node except the target.
    for (Index v = 0, k = 0; v < n; ++v) {
      if (v != target) others[k++] = v;
    }
    const auto pool = static_cast<std::size_t>(std::min<Index>(config.candidate_pool, n - 1));
    if (pool == 0) continue;
    partial_shuffle(others, pool, rng);
    Index farthest = others[0];
    double best = -1.0;
    for (std::size_t k = 0; k < pool; ++k) {
      const double dist = (original.row(target) - original.row(others[k])).norm();
      if (dist > best) {
        best = dist;
        farthest = others[k];
      }
    }
    features.row(target) = original.row(farthest);
  }

  for (Index v : result.structural) labels[v] = 1;
  for (Index v : result.feature) labels[v] = 1;
  std::sort(result.structural.begin(), result.structural.end());
  std::sort(result.feature.begin(), result.feature.end());
  std::merge(result.structural.begin(), result.structural.end(), result.feature.begin(),
             result.feature.end(), std::back_inserter(result.all));

  return {Graph(n, std::move(edges), std::move(features), std::move(labels), g.name()), std::move(result)};
}

Index synthetic_block_of(Index v, Index num_nodes, Index num_blocks) {
  // Blocks are [floor(b*n/k), floor((b+1)*n/k)).
  Index b = (v * num_blocks) / num_nodes;
  while (b + 1 < num_blocks && v >= ((b + 1) * num_nodes) / num_blocks) ++b;
  while (b > 0 && v < (b * num_nodes) / num_blocks) --b;
  return b;
}

Graph generate_synthetic(const SyntheticConfig& config, Rng& rng) {
  const Index n = config.num_nodes;
  const Index blocks = config.num_blocks;
  if (blocks < 1 || n < blocks) throw ArgumentError("generate_synthetic: need n >= num_blocks >= 1");
  if (config.feature_dim < 1) throw ArgumentError("generate_synthetic: feature_dim must be positive");
  if (!(0.0 <= config.p_out && config.p_out < config.p_in && config.p_in <= 1.0)) {
    throw ArgumentError("generate_synthetic: need 0 <= p_out < p_in <= 1");
  }
  if (config.mean_scale < 0.0 || config.noise_scale < 0.0) {
    throw ArgumentError("generate_synthetic: scales must be non-negative");
  }

  std::vector<Index> block(n);
  for (Index v = 0; v < n; ++v) block[v] = synthetic_block_of(v, n, blocks);

  std::vector<Edge> edges;
  for (Index u = 0; u < n; ++u) {
    for (Index v = u + 1; v < n; ++v) {
      const double p = block[u] == block[v] ? config.p_in : config.p_out;
      if (uniform01(rng) < p) edges.emplace_back(u, v);
    }
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd means(blocks, config.feature_dim);
  for (Index b = 0; b < blocks; ++b) {
    for (Index k = 0; k < config.feature_dim; ++k) means(b, k) = config.mean_scale * normal(rng);
  }
  Eigen::MatrixXd features(n, config.feature_dim);
  for (Index v = 0; v < n; ++v) {
    for (Index k = 0; k < config.feature_dim; ++k) {
      features(v, k) = means(block[v], k) + config.noise_scale * normal(rng);
    }
  }
  return Graph(n, std::move(edges), std::move(features), std::nullopt, "synthetic-sbm");
}

}  // namespace gradate
