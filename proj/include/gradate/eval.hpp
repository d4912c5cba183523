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

#ifndef GRADATE_EVAL_HPP_
#define GRADATE_EVAL_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradate/augment.hpp"
#include "gradate/graph.hpp"
#include "gradate/train.hpp"

namespace gradate {

/// Mann-Whitney AUC with midranks: ties between an anomaly and a normal
/// node count one half.
double auc(const Eigen::VectorXd& scores, std::span<const int> labels);

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr), from (0,0) to (1,1)
  double auc = 0.0;                               // trapezoidal area
};

/// One point per distinct score threshold, swept from high to low.
RocCurve roc_points(const Eigen::VectorXd& scores, std::span<const int> labels);

std::string roc_csv(const RocCurve& curve);

/// A contrast variant paired with the augmentation that builds view 2.
struct AblationArm {
  ContrastVariant variant = ContrastVariant::kFull;
  AugmentMethod augmentation = AugmentMethod::kEdgeModification;
};

/// "NS+NN" or "NS+NN:gd"; the augmentation defaults to `fallback`.
AblationArm parse_ablation_arm(std::string_view text, AugmentMethod fallback);

struct AblationRow {
  AblationArm arm;
  std::uint64_t seed = 0;
  double auc = 0.0;
};

struct AblationSummary {
  AblationArm arm;
  double mean_auc = 0.0;
  double median_auc = 0.0;
  std::size_t runs = 0;
};

struct AblationResult {
  std::vector<AblationRow> rows;
  std::vector<AblationSummary> summary;  // one per arm, in input order
};

/// Trains and scores every (arm, seed) pair from scratch and reports AUC.
/// The graph must carry labels.
AblationResult run_ablation(const Graph& g, const Hyperparams& hp, const std::vector<AblationArm>& arms,
                            const std::vector<std::uint64_t>& seeds, std::int64_t threads = 1);

std::string ablation_csv(const AblationResult& result);

double median(std::vector<double> values);

}  // namespace gradate

#endif  // GRADATE_EVAL_HPP_
