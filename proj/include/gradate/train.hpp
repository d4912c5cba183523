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

#ifndef GRADATE_TRAIN_HPP_
#define GRADATE_TRAIN_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradate/augment.hpp"
#include "gradate/graph.hpp"
#include "gradate/model.hpp"
#include "json.hpp"

namespace gradate {

/// Which contrasts are trained and scored. Node-subgraph is always on.
enum class ContrastVariant {
  kNs,      // NS
  kNsSs,    // NS+SS
  kNsNn,    // NS+NN
  kFull,    // NS+NN+SS
};

std::string variant_name(ContrastVariant v);
ContrastVariant parse_variant(std::string_view name);

struct Hyperparams {
  Index subgraph_size = 4;
  Index hidden_dim = 64;
  Index epochs = 400;
  Index batch_size = 300;
  Index rounds = 256;
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.1;
  double lr = 1e-3;
  double restart = 0.15;
  AugmentConfig augment;  // edge_proportion is P
  std::uint64_t seed = 0;
  bool regenerate_view = true;  // rebuild the augmented view every epoch
  ContrastVariant variant = ContrastVariant::kFull;
  bool ss_include_positive = true;

  void validate() const;

  LossWeights loss_weights() const;
  /// Weight of the node-subgraph score in the final fusion (beta, or 1 when
  /// the node-node branch is disabled).
  double score_ns_weight() const;
};

// Config JSON uses exactly these keys, all optional:
//   subgraph_size, hidden_dim, epochs, batch_size, rounds, P, alpha, beta,
//   gamma, lr, restart, augmentation, noise_sigma, mask_ratio, teleport,
//   top_k, seed, regenerate_view, variant, ss_include_positive
Hyperparams hyperparams_from_json(const nlohmann::json& doc, Hyperparams base = {});
nlohmann::json hyperparams_to_json(const Hyperparams& hp);
Hyperparams load_hyperparams(const std::filesystem::path& path, Hyperparams base = {});

/// Random permutation of 0..n-1 cut into chunks of `batch_size`; a trailing
/// singleton is merged into the previous chunk.
std::vector<std::vector<Index>> make_batches(Index n, Index batch_size, Rng& rng);

/// For each position k, a uniformly drawn other position in [0, size).
std::vector<Index> pair_negatives(Index size, Rng& rng);

struct EpochLoss {
  Index epoch = 0;  // 1-based
  double l_ns = 0.0;
  double l_nn = 0.0;
  double l_ss = 0.0;
  double joint = 0.0;
};

struct TrainOptions {
  std::int64_t threads = 1;  // subgraph sampling workers
};

struct TrainResult {
  Parameters params;
  std::vector<EpochLoss> history;
};

/// Parameters the trainer starts from for this graph and seed.
Parameters initial_parameters(const Graph& g, const Hyperparams& hp);

/// Subgraph samples of `nodes` in one view, each from its own stream keyed
/// by (stream, seed, epoch-or-round, view, node).
std::vector<SubgraphSample> sample_subgraphs(const Graph& view, std::span<const Index> nodes, const Hyperparams& hp,
                                             Stream stream, std::uint64_t epoch, int view_index,
                                             std::int64_t threads);

TrainResult train(const Graph& g, const Hyperparams& hp, const TrainOptions& options = {});

std::string loss_history_csv(const std::vector<EpochLoss>& history);

struct ModelFile {
  Parameters params;
  std::optional<Hyperparams> hyperparams;
};

/// Model JSON plus an optional "hyperparams" object recording the
/// training configuration.
std::string model_to_json_text(const Parameters& params, const std::optional<Hyperparams>& hp);
ModelFile model_from_json_text(const std::string& text);
void save_model(const std::filesystem::path& path, const Parameters& params, const std::optional<Hyperparams>& hp);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace gradate

#endif  // GRADATE_TRAIN_HPP_
