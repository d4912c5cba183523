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

#include "gradate/train.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "gradate/errors.hpp"
#include "gradate/json_util.hpp"
#include "gradate/parallel.hpp"

namespace gradate {

std::vector<std::vector<Index>> make_batches(Index n, Index batch_size, Rng& rng) {
  if (n < 2) throw ArgumentError("make_batches: need at least two nodes");
  if (batch_size < 2) throw ArgumentError("make_batches: batch size must be at least 2");
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<Index>> batches;
  for (Index start = 0; start < n; start += batch_size) {
    const Index stop = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + start, order.begin() + stop);
  }
  if (batches.size() > 1 && batches.back().size() == 1) {
    const Index last = batches.back().front();
    batches.pop_back();
    batches.back().push_back(last);
  }
  return batches;
}

std::vector<Index> pair_negatives(Index size, Rng& rng) {
  if (size < 2) throw ArgumentError("pair_negatives: need at least two targets");
  std::vector<Index> partner(size);
  for (Index k = 0; k < size; ++k) {
    const Index draw = uniform_index(rng, size - 1);
    partner[k] = draw >= k ? draw + 1 : draw;
  }
  return partner;
}

Parameters initial_parameters(const Graph& g, const Hyperparams& hp) {
  Rng rng = make_rng(hp.seed, Stream::kInit);
  return initialize_parameters(g.feature_dim(), hp.hidden_dim, rng);
}

std::vector<SubgraphSample> sample_subgraphs(const Graph& view, std::span<const Index> nodes, const Hyperparams& hp,
                                             Stream stream, std::uint64_t epoch, int view_index,
                                             std::int64_t threads) {
  std::vector<SubgraphSample> samples(nodes.size());
  parallel_for(static_cast<std::int64_t>(nodes.size()), threads, [&](std::int64_t k) {
    const auto node = static_cast<std::uint64_t>(nodes[k]);
    Rng rng = make_rng(hp.seed, stream, {epoch, static_cast<std::uint64_t>(view_index), node});
    samples[k] = rwr_subgraph(view, nodes[k], hp.subgraph_size, hp.restart, rng);
  });
  return samples;
}

TrainResult train(const Graph& g, const Hyperparams& hp, const TrainOptions& options) {
  hp.validate();
  if (g.num_nodes() < 2) throw ArgumentError("train: graph needs at least two nodes");
  if (g.feature_dim() < 1) throw ArgumentError("train: graph has no features");

  TrainResult result;
  result.params = initial_parameters(g, hp);
  OptimizerState state = OptimizerState::zeros_like(result.params);
  const AdamConfig adam{hp.lr, 0.9, 0.999, 1e-8};
  const LossWeights weights = hp.loss_weights();

  std::optional<Graph> fixed_view;
  if (!hp.regenerate_view && hp.epochs > 0) {
    Rng rng = make_rng(hp.seed, Stream::kView, {0});
    fixed_view = augment(g, hp.augment, rng);
  }

  for (Index epoch = 1; epoch <= hp.epochs; ++epoch) {
    const auto e = static_cast<std::uint64_t>(epoch);
    Graph regenerated;
    if (!fixed_view) {
      Rng rng = make_rng(hp.seed, Stream::kView, {e});
      regenerated = augment(g, hp.augment, rng);
    }
    const Graph& view2 = fixed_view ? *fixed_view : regenerated;

    Rng batch_rng = make_rng(hp.seed, Stream::kBatch, {e});
    const auto batches = make_batches(g.num_nodes(), hp.batch_size, batch_rng);

    EpochLoss epoch_loss;
    epoch_loss.epoch = epoch;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& nodes = batches[b];
      ContrastBatch batch;
      Rng pair_rng = make_rng(hp.seed, Stream::kPair, {e, b});
      batch.partner = pair_negatives(static_cast<Index>(nodes.size()), pair_rng);
      batch.views[0] = sample_subgraphs(g, nodes, hp, Stream::kSample, e, 0, options.threads);
      batch.views[1] = sample_subgraphs(view2, nodes, hp, Stream::kSample, e, 1, options.threads);

      LossAndGradients lg;
      try {
        lg = backward(batch, result.params, weights);
        if (!lg.grads.all_finite()) throw NumericalError("non-finite gradient");
        adam_step(result.params, lg.grads, state, adam);
        if (!result.params.all_finite()) throw NumericalError("non-finite parameters after update");
      } catch (const NumericalError& err) {
        throw NumericalError("train: epoch " + std::to_string(epoch) + ", batch " + std::to_string(b) + ": " +
                             err.what());
      }
      const double w = static_cast<double>(nodes.size());
      epoch_loss.l_ns += w * lg.output.loss_ns;
      epoch_loss.l_nn += w * lg.output.loss_nn;
      epoch_loss.l_ss += w * lg.output.loss_ss;
      epoch_loss.joint += w * lg.output.joint;
    }
    const double n = static_cast<double>(g.num_nodes());
    epoch_loss.l_ns /= n;
    epoch_loss.l_nn /= n;
    epoch_loss.l_ss /= n;
    epoch_loss.joint /= n;
    result.history.push_back(epoch_loss);
  }
  return result;
}

std::string loss_history_csv(const std::vector<EpochLoss>& history) {
  std::ostringstream out;
  out << "epoch,l_ns,l_nn,l_ss,joint\n";
  for (const auto& h : history) {
    out << h.epoch << ',' << format_double(h.l_ns) << ',' << format_double(h.l_nn) << ',' << format_double(h.l_ss)
        << ',' << format_double(h.joint) << '\n';
  }
  return out.str();
}

}  // namespace gradate
