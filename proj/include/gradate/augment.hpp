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

#ifndef GRADATE_AUGMENT_HPP_
#define GRADATE_AUGMENT_HPP_

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gradate/graph.hpp"
#include "gradate/random.hpp"

namespace gradate {

enum class AugmentMethod {
  kEdgeModification,  // EM
  kGaussianNoise,     // GNF
  kFeatureMask,       // FM
  kGraphDiffusion,    // GD
};

std::string augment_method_name(AugmentMethod method);  // "em", "gnf", "fm", "gd"
AugmentMethod parse_augment_method(std::string_view name);  // case-insensitive

struct AugmentConfig {
  AugmentMethod method = AugmentMethod::kEdgeModification;
  double edge_proportion = 0.2;
  // Unset: 0.1 times each feature column's standard deviation.
  std::optional<double> noise_sigma;
  double mask_ratio = 0.2;
  double teleport = 0.15;
  // 0 picks max(1, round(M / N)).
  Index top_k = 0;

  void validate() const;
};

/// Drops round(P*M/2) uniformly chosen edges and adds as many uniformly
/// chosen non-edges of the input graph. Edge count is preserved.
Graph edge_modification(const Graph& g, double proportion, Rng& rng);

/// Adds i.i.d. N(0, sigma^2) noise to every feature entry.
Graph gaussian_noise_features(const Graph& g, double sigma, Rng& rng);
/// Per-column noise: column k gets N(0, sigmas[k]^2).
Graph gaussian_noise_features(const Graph& g, const Eigen::VectorXd& sigmas, Rng& rng);

/// Zeroes a uniform random subset of round(ratio*N*d) feature entries.
Graph feature_mask(const Graph& g, double ratio, Rng& rng);

/// Personalized-PageRank diffusion teleport*(I - (1-teleport)*Â)^-1, sparsified
/// to the top_k off-diagonal entries per row and returned as an unweighted
/// symmetric graph.
Graph graph_diffusion(const Graph& g, double teleport, Index top_k);

/// The dense diffusion matrix itself.
Eigen::MatrixXd diffusion_matrix(const Graph& g, double teleport);

/// Second-view construction per config.
Graph augment(const Graph& g, const AugmentConfig& config, Rng& rng);

/// A target-centred subgraph. Row 0 is the target; its features are zeroed
/// in `features_masked`. Padding positions repeat the target id and have
/// zero features in both matrices and a lone self-loop in `norm_adj`.
struct SubgraphSample {
  std::vector<Index> nodes;
  NormalizedAdjacency norm_adj;
  Eigen::MatrixXd features_masked;
  Eigen::MatrixXd features_full;
  // norm_adj * features_masked, the parameter-free half of the GCN layer.
  Eigen::MatrixXd propagated;

  Index size() const { return static_cast<Index>(nodes.size()); }
};

/// Random walk with restart from `target`; keeps the first size-1 distinct
/// nodes visited within 20*size steps, padding with the target id.
SubgraphSample rwr_subgraph(const Graph& g, Index target, Index size, double restart, Rng& rng);

/// Builds the sample for an explicit node list (target first).
SubgraphSample make_subgraph_sample(const Graph& g, std::vector<Index> nodes);

}  // namespace gradate

#endif  // GRADATE_AUGMENT_HPP_
