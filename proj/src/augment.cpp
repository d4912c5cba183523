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

#include "gradate/augment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>

#include "gradate/errors.hpp"

namespace gradate {

namespace {

// Diffusion entries at or below this are treated as absent.
constexpr double kDiffusionFloor = 1e-9;
constexpr Index kMaxDiffusionNodes = 20000;

template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index<std::size_t>(rng, items.size() - i);
    std::swap(items[i], items[j]);
  }
}

std::vector<Edge> enumerate_non_edges(const Graph& g) {
  std::vector<Edge> out;
  for (Index u = 0; u < g.num_nodes(); ++u) {
    auto nb = g.neighbors(u);
    auto it = std::upper_bound(nb.begin(), nb.end(), u);
    for (Index v = u + 1; v < g.num_nodes(); ++v) {
      if (it != nb.end() && *it == v) {
        ++it;
        continue;
      }
      out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace

std::string augment_method_name(AugmentMethod method) {
  switch (method) {
    case AugmentMethod::kEdgeModification: return "em";
    case AugmentMethod::kGaussianNoise: return "gnf";
    case AugmentMethod::kFeatureMask: return "fm";
    case AugmentMethod::kGraphDiffusion: return "gd";
  }
  return "em";
}

AugmentMethod parse_augment_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "em") return AugmentMethod::kEdgeModification;
  if (lower == "gnf") return AugmentMethod::kGaussianNoise;
  if (lower == "fm") return AugmentMethod::kFeatureMask;
  if (lower == "gd") return AugmentMethod::kGraphDiffusion;
  throw ArgumentError("unknown augmentation '" + std::string(name) + "' (expected em, gnf, fm or gd)");
}

void AugmentConfig::validate() const {
  if (!(0.0 <= edge_proportion && edge_proportion <= 1.0)) throw ArgumentError("augment: P must lie in [0, 1]");
  if (noise_sigma && !(*noise_sigma >= 0.0)) throw ArgumentError("augment: noise_sigma must be non-negative");
  if (!(0.0 <= mask_ratio && mask_ratio <= 1.0)) throw ArgumentError("augment: mask_ratio must lie in [0, 1]");
  if (!(0.0 < teleport && teleport < 1.0)) throw ArgumentError("augment: teleport must lie in (0, 1)");
  if (top_k < 0) throw ArgumentError("augment: top_k must be non-negative");
}

Graph edge_modification(const Graph& g, double proportion, Rng& rng) {
  if (!(0.0 <= proportion && proportion <= 1.0)) throw ArgumentError("edge_modification: P must lie in [0, 1]");
  const Index m = g.num_edges();
  const auto r = static_cast<Index>(std::llround(proportion * static_cast<double>(m) / 2.0));
  if (r == 0) return g;

  const Index n = g.num_nodes();
  const Index pairs = n * (n - 1) / 2;
  const Index available = pairs - m;
  if (r > available) {
    throw FeasibilityError("edge_modification: need " + std::to_string(r) + " non-edges to add but only " +
                           std::to_string(available) + " exist (shortfall " + std::to_string(r - available) + ")");
  }

  std::vector<Edge> edges = g.edges();
  partial_shuffle(edges, static_cast<std::size_t>(r), rng);
  std::vector<Edge> result(edges.begin() + r, edges.end());

  std::vector<Edge> added;
  const bool dense = 2 * m > pairs;
  bool sampled = false;
  if (!dense) {
    std::set<Edge> chosen;
    const Index max_attempts = 100 * r + 1000;
    for (Index attempt = 0; attempt < max_attempts && static_cast<Index>(chosen.size()) < r; ++attempt) {
      Index u = uniform_index(rng, n);
      Index v = uniform_index(rng, n);
      if (u == v) continue;
      if (u > v) std::swap(u, v);
      if (g.has_edge(u, v)) continue;
      if (chosen.insert({u, v}).second) added.emplace_back(u, v);
    }
    sampled = static_cast<Index>(added.size()) == r;
  }
  if (!sampled) {
    added = enumerate_non_edges(g);
    partial_shuffle(added, static_cast<std::size_t>(r), rng);
    added.resize(r);
  }
  result.insert(result.end(), added.begin(), added.end());
  return g.with_edges(std::move(result));
}

Graph gaussian_noise_features(const Graph& g, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw ArgumentError("gaussian_noise_features: sigma must be non-negative");
  return gaussian_noise_features(g, Eigen::VectorXd::Constant(g.feature_dim(), sigma), rng);
}

Graph gaussian_noise_features(const Graph& g, const Eigen::VectorXd& sigmas, Rng& rng) {
  if (sigmas.size() != g.feature_dim()) throw ArgumentError("gaussian_noise_features: one sigma per column required");
  if ((sigmas.array() < 0.0).any()) throw ArgumentError("gaussian_noise_features: sigma must be non-negative");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd features = g.features();
  for (Index i = 0; i < features.rows(); ++i) {
    for (Index k = 0; k < features.cols(); ++k) features(i, k) += sigmas[k] * normal(rng);
  }
  return g.with_features(std::move(features));
}

Graph feature_mask(const Graph& g, double ratio, Rng& rng) {
  if (!(0.0 <= ratio && ratio <= 1.0)) throw ArgumentError("feature_mask: ratio must lie in [0, 1]");
  Eigen::MatrixXd features = g.features();
  const Index total = features.size();
  const auto count = static_cast<Index>(std::llround(ratio * static_cast<double>(total)));
  std::vector<Index> cells(total);
  std::iota(cells.begin(), cells.end(), Index{0});
  partial_shuffle(cells, static_cast<std::size_t>(count), rng);
  for (Index c = 0; c < count; ++c) features.data()[cells[c]] = 0.0;
  return g.with_features(std::move(features));
}

Eigen::MatrixXd diffusion_matrix(const Graph& g, double teleport) {
  if (!(0.0 < teleport && teleport < 1.0)) throw ArgumentError("graph_diffusion: teleport must lie in (0, 1)");
  if (g.num_nodes() > kMaxDiffusionNodes) {
    throw ArgumentError("graph_diffusion: dense diffusion limited to " + std::to_string(kMaxDiffusionNodes) + " nodes");
  }
  const Index n = g.num_nodes();
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(n, n) - (1.0 - teleport) * normalize_adjacency(g);
  Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw NumericalError("graph_diffusion: Cholesky factorization failed");
  Eigen::MatrixXd s = teleport * llt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!s.allFinite()) throw NumericalError("graph_diffusion: non-finite diffusion matrix");
  return s;
}

Graph graph_diffusion(const Graph& g, double teleport, Index top_k) {
  if (top_k < 0) throw ArgumentError("graph_diffusion: top_k must be non-negative");
  const Eigen::MatrixXd s = diffusion_matrix(g, teleport);
  const Index n = g.num_nodes();
  std::vector<Edge> edges;
  std::vector<Index> candidates;
  for (Index i = 0; i < n; ++i) {
    candidates.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i && s(i, j) > kDiffusionFloor) candidates.push_back(j);
    }
    const auto keep = std::min<std::size_t>(static_cast<std::size_t>(top_k), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep), candidates.end(),
                      [&](Index a, Index b) { return s(i, a) > s(i, b) || (s(i, a) == s(i, b) && a < b); });
    for (std::size_t k = 0; k < keep; ++k) edges.emplace_back(i, candidates[k]);
  }
  return g.with_edges(std::move(edges));
}

Graph augment(const Graph& g, const AugmentConfig& config, Rng& rng) {
  config.validate();
  switch (config.method) {
    case AugmentMethod::kEdgeModification:
      return edge_modification(g, config.edge_proportion, rng);
    case AugmentMethod::kGaussianNoise: {
      if (config.noise_sigma) return gaussian_noise_features(g, *config.noise_sigma, rng);
      const Eigen::MatrixXd& x = g.features();
      Eigen::VectorXd sigmas = Eigen::VectorXd::Zero(x.cols());
      if (x.rows() > 0) {
        const Eigen::RowVectorXd mean = x.colwise().mean();
        sigmas = 0.1 * ((x.rowwise() - mean).array().square().colwise().mean().sqrt()).transpose();
      }
      return gaussian_noise_features(g, sigmas, rng);
    }
    case AugmentMethod::kFeatureMask:
      return feature_mask(g, config.mask_ratio, rng);
    case AugmentMethod::kGraphDiffusion: {
      Index k = config.top_k;
      if (k == 0) {
        const double avg = g.num_nodes() > 0 ? static_cast<double>(g.num_edges()) / static_cast<double>(g.num_nodes()) : 0.0;
        k = std::max<Index>(1, std::llround(avg));
      }
      return graph_diffusion(g, config.teleport, k);
    }
  }
  return g;
}

SubgraphSample make_subgraph_sample(const Graph& g, std::vector<Index> nodes) {
  if (nodes.empty()) throw ArgumentError("subgraph: empty node list");
  SubgraphSample sample;
  sample.norm_adj = normalize_adjacency(g, nodes);
  const Index n = static_cast<Index>(nodes.size());
  sample.features_full = Eigen::MatrixXd::Zero(n, g.feature_dim());
  sample.features_full.row(0) = g.features().row(nodes[0]);
  for (Index a = 1; a < n; ++a) {
    if (nodes[a] != nodes[0]) sample.features_full.row(a) = g.features().row(nodes[a]);
  }
  sample.features_masked = sample.features_full;
  sample.features_masked.row(0).setZero();
  sample.propagated = sample.norm_adj * sample.features_masked;
  sample.nodes = std::move(nodes);
  return sample;
}

SubgraphSample rwr_subgraph(const Graph& g, Index target, Index size, double restart, Rng& rng) {
  if (target < 0 || target >= g.num_nodes()) {
    throw IndexError("rwr_subgraph: target " + std::to_string(target) + " out of range");
  }
  if (size < 1) throw ArgumentError("rwr_subgraph: size must be at least 1");
  if (!(0.0 < restart && restart < 1.0)) throw ArgumentError("rwr_subgraph: restart must lie in (0, 1)");

  std::vector<Index> nodes{target};
  nodes.reserve(size);
  const Index max_steps = 20 * size;
  Index current = target;
  for (Index step = 0; step < max_steps && static_cast<Index>(nodes.size()) < size; ++step) {
    auto nb = g.neighbors(current);
    if (nb.empty() || uniform01(rng) < restart) {
      current = target;
      continue;
    }
    current = nb[uniform_index<std::size_t>(rng, nb.size())];
    if (std::find(nodes.begin(), nodes.end(), current) == nodes.end()) nodes.push_back(current);
  }
  nodes.resize(size, target);
  return make_subgraph_sample(g, std::move(nodes));
}

}  // namespace gradate
