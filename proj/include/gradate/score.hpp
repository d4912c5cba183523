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

#ifndef GRADATE_SCORE_HPP_
#define GRADATE_SCORE_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "gradate/graph.hpp"
#include "gradate/model.hpp"
#include "gradate/train.hpp"

namespace gradate {

/// Per-round scores and their aggregate: final = mean + population std.
struct ScoreTable {
  Eigen::MatrixXd rounds;  // R x N
  Eigen::VectorXd mean;
  Eigen::VectorXd std;
  Eigen::VectorXd final;
};

/// Fuses the per-branch, per-view scores (each s_neg - s_pos):
///   s = alpha*s1 + (1-alpha)*s2,  ŝ = alpha*ŝ1 + (1-alpha)*ŝ2,
///   S = beta*s + (1-beta)*ŝ.
template <typename Scalar>
Scalar fuse_scores(Scalar ns_view1, Scalar ns_view2, Scalar nn_view1, Scalar nn_view2, Scalar alpha, Scalar beta) {
  const Scalar s = alpha * ns_view1 + (Scalar(1) - alpha) * ns_view2;
  const Scalar s_hat = alpha * nn_view1 + (Scalar(1) - alpha) * nn_view2;
  return beta * s + (Scalar(1) - beta) * s_hat;
}

/// One scoring round over every node: fresh augmented view, fresh RWR
/// samples, and a fresh negative partner per node drawn from all nodes.
Eigen::VectorXd score_round(const Graph& g, const Parameters& params, const Hyperparams& hp, Index round_index);

ScoreTable aggregate_scores(const Eigen::MatrixXd& rounds);

/// hp.rounds rounds, run on up to `threads` workers. The result does not
/// depend on `threads`.
ScoreTable score_graph(const Graph& g, const Parameters& params, const Hyperparams& hp, std::int64_t threads = 1);

/// "node_id,score[,label]" with one row per node.
std::string scores_csv(const Eigen::VectorXd& scores, const std::optional<std::vector<int>>& labels);

struct ScoreFile {
  Eigen::VectorXd scores;
  std::optional<std::vector<int>> labels;
};
ScoreFile parse_scores_csv(const std::string& text);

}  // namespace gradate

#endif  // GRADATE_SCORE_HPP_
