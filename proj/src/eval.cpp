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

#include "gradate/eval.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gradate/errors.hpp"
#include "gradate/json_util.hpp"
#include "gradate/parallel.hpp"
#include "gradate/score.hpp"

namespace gradate {

namespace {

void check_inputs(const Eigen::VectorXd& scores, std::span<const int> labels, Index& positives, Index& negatives) {
  if (static_cast<Index>(labels.size()) != scores.size()) throw ArgumentError("auc: score/label length mismatch");
  positives = negatives = 0;
  for (int l : labels) {
    if (l == 1) ++positives;
    else if (l == 0) ++negatives;
    else throw ArgumentError("auc: labels must be 0 or 1");
  }
  if (positives == 0 || negatives == 0) throw ArgumentError("auc: need at least one positive and one negative label");
  if (!scores.allFinite()) throw ArgumentError("auc: scores must be finite");
}

}  // namespace

double auc(const Eigen::VectorXd& scores, std::span<const int> labels) {
  Index pos = 0;
  Index neg = 0;
  check_inputs(scores, labels, pos, neg);
  const Index n = scores.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  for (Index start = 0; start < n;) {
    Index stop = start;
    while (stop < n && scores[order[stop]] == scores[order[start]]) ++stop;
    // Ranks start..stop-1 (1-based: start+1..stop) share their average.
    const double midrank = 0.5 * static_cast<double>(start + 1 + stop);
    for (Index k = start; k < stop; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    start = stop;
  }
  const double p = static_cast<double>(pos);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

RocCurve roc_points(const Eigen::VectorXd& scores, std::span<const int> labels) {
  Index pos = 0;
  Index neg = 0;
  check_inputs(scores, labels, pos, neg);
  const Index n = scores.size();
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.emplace_back(0.0, 0.0);
  Index tp = 0;
  Index fp = 0;
  for (Index start = 0; start < n;) {
    Index stop = start;
    while (stop < n && scores[order[stop]] == scores[order[start]]) {
      if (labels[order[stop]] == 1) ++tp;
      else ++fp;
      ++stop;
    }
    const auto& [x0, y0] = curve.points.back();
    const double x1 = static_cast<double>(fp) / static_cast<double>(neg);
    const double y1 = static_cast<double>(tp) / static_cast<double>(pos);
    curve.auc += (x1 - x0) * (y0 + y1) / 2.0;
    curve.points.emplace_back(x1, y1);
    start = stop;
  }
  return curve;
}

std::string roc_csv(const RocCurve& curve) {
  std::ostringstream out;
  out << "fpr,tpr\n";
  for (const auto& [fpr, tpr] : curve.points) out << format_double(fpr) << ',' << format_double(tpr) << '\n';
  return out.str();
}

AblationArm parse_ablation_arm(std::string_view text, AugmentMethod fallback) {
  AblationArm arm;
  arm.augmentation = fallback;
  const auto colon = text.find(':');
  arm.variant = parse_variant(text.substr(0, colon));
  if (colon != std::string_view::npos) arm.augmentation = parse_augment_method(text.substr(colon + 1));
  return arm;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ArgumentError("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

AblationResult run_ablation(const Graph& g, const Hyperparams& hp, const std::vector<AblationArm>& arms,
                            const std::vector<std::uint64_t>& seeds, std::int64_t threads) {
  if (!g.labels()) throw ArgumentError("run_ablation: graph has no labels");
  if (arms.empty() || seeds.empty()) throw ArgumentError("run_ablation: need at least one variant and one seed");
  hp.validate();

  AblationResult result;
  result.rows.resize(arms.size() * seeds.size());
  const auto runs = static_cast<std::int64_t>(result.rows.size());
  // Each run is single-threaded; runs go in parallel.
  parallel_for(runs, threads, [&](std::int64_t idx) {
    const auto& arm = arms[static_cast<std::size_t>(idx) / seeds.size()];
    const auto seed = seeds[static_cast<std::size_t>(idx) % seeds.size()];
    Hyperparams run_hp = hp;
    run_hp.variant = arm.variant;
    run_hp.augment.method = arm.augmentation;
    run_hp.seed = seed;
    const TrainResult trained = train(g, run_hp);
    const ScoreTable table = score_graph(g, trained.params, run_hp, 1);
    result.rows[idx] = {arm, seed, auc(table.final, *g.labels())};
  });

  for (std::size_t a = 0; a < arms.size(); ++a) {
    std::vector<double> values;
    for (std::size_t s = 0; s < seeds.size(); ++s) values.push_back(result.rows[a * seeds.size() + s].auc);
    AblationSummary summary;
    summary.arm = arms[a];
    summary.runs = values.size();
    summary.mean_auc = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    summary.median_auc = median(values);
    result.summary.push_back(summary);
  }
  return result;
}

std::string ablation_csv(const AblationResult& result) {
  std::ostringstream out;
  out << "variant,augmentation,seed,auc\n";
  for (const auto& row : result.rows) {
    out << variant_name(row.arm.variant) << ',' << augment_method_name(row.arm.augmentation) << ',' << row.seed
        << ',' << format_double(row.auc) << '\n';
  }
  return out.str();
}

}  // namespace gradate
