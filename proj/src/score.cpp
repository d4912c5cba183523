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

#include "gradate/score.hpp"

#include <numeric>
#include <sstream>

#include "gradate/errors.hpp"
#include "gradate/json_util.hpp"
#include "gradate/parallel.hpp"

namespace gradate {

Eigen::VectorXd score_round(const Graph& g, const Parameters& params, const Hyperparams& hp, Index round_index) {
  hp.validate();
  params.validate();
  if (params.input_dim() != g.feature_dim()) {
    throw ArgumentError("score_round: model expects " + std::to_string(params.input_dim()) +
                        " features, graph has " + std::to_string(g.feature_dim()));
  }
  const Index n = g.num_nodes();
  if (n < 2) throw ArgumentError("score_round: graph needs at least two nodes");
  const auto r = static_cast<std::uint64_t>(round_index);

  Rng view_rng = make_rng(hp.seed, Stream::kScoreView, {r});
  const Graph view2 = augment(g, hp.augment, view_rng);
  Rng pair_rng = make_rng(hp.seed, Stream::kScorePair, {r});
  const std::vector<Index> partner = pair_negatives(n, pair_rng);

  std::vector<Index> nodes(n);
  std::iota(nodes.begin(), nodes.end(), Index{0});
  std::array<ViewScores, 2> scores;
  for (int v = 0; v < 2; ++v) {
    const auto samples = sample_subgraphs(v == 0 ? g : view2, nodes, hp, Stream::kScoreSample, r, v, 1);
    scores[v] = view_scores(embed_view(samples, params), params, partner);
  }

  const double beta = hp.score_ns_weight();
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) {
    out[i] = fuse_scores(scores[0].ns_neg[i] - scores[0].ns_pos[i], scores[1].ns_neg[i] - scores[1].ns_pos[i],
                         scores[0].nn_neg[i] - scores[0].nn_pos[i], scores[1].nn_neg[i] - scores[1].nn_pos[i],
                         hp.alpha, beta);
  }
  return out;
}

ScoreTable aggregate_scores(const Eigen::MatrixXd& rounds) {
  if (rounds.rows() < 1 || rounds.cols() < 1) throw ArgumentError("aggregate_scores: empty score matrix");
  ScoreTable t;
  t.rounds = rounds;
  t.mean = rounds.colwise().mean().transpose();
  t.std = ((rounds.rowwise() - t.mean.transpose()).array().square().colwise().mean().sqrt()).transpose();
  t.final = t.mean + t.std;
  return t;
}

ScoreTable score_graph(const Graph& g, const Parameters& params, const Hyperparams& hp, std::int64_t threads) {
  hp.validate();
  const double checksum = parameter_checksum(params);
  Eigen::MatrixXd rounds(hp.rounds, g.num_nodes());
  parallel_for(hp.rounds, threads, [&](std::int64_t r) { rounds.row(r) = score_round(g, params, hp, r).transpose(); });
  if (parameter_checksum(params) != checksum) throw NumericalError("score_graph: parameters changed during scoring");
  return aggregate_scores(rounds);
}

std::string scores_csv(const Eigen::VectorXd& scores, const std::optional<std::vector<int>>& labels) {
  if (labels && static_cast<Index>(labels->size()) != scores.size()) {
    throw ArgumentError("scores_csv: label count mismatch");
  }
  std::ostringstream out;
  out << (labels ? "node_id,score,label\n" : "node_id,score\n");
  for (Index i = 0; i < scores.size(); ++i) {
    out << i << ',' << format_double(scores[i]);
    if (labels) out << ',' << (*labels)[i];
    out << '\n';
  }
  return out.str();
}

ScoreFile parse_scores_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("scores: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_label = false;
  if (line == "node_id,score,label") has_label = true;
  else if (line != "node_id,score") throw SchemaError("scores: unexpected header '" + line + "'");

  std::vector<double> scores;
  std::vector<int> labels;
  Index line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string id, score, label;
    std::getline(row, id, ',');
    std::getline(row, score, ',');
    if (has_label) std::getline(row, label, ',');
    try {
      std::size_t used = 0;
      const long long node = std::stoll(id, &used);
      if (used != id.size() || node != static_cast<long long>(scores.size())) throw SchemaError("");
      scores.push_back(std::stod(score, &used));
      if (used != score.size()) throw SchemaError("");
      if (has_label) {
        const int l = std::stoi(label, &used);
        if (used != label.size() || (l != 0 && l != 1)) throw SchemaError("");
        labels.push_back(l);
      }
    } catch (const std::exception&) {
      throw SchemaError("scores: malformed row at line " + std::to_string(line_no) + ": '" + line + "'");
    }
  }
  ScoreFile f;
  f.scores = Eigen::Map<Eigen::VectorXd>(scores.data(), static_cast<Index>(scores.size()));
  if (has_label) f.labels = std::move(labels);
  return f;
}

}  // namespace gradate
