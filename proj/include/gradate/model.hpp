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

#ifndef GRADATE_MODEL_HPP_
#define GRADATE_MODEL_HPP_

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gradate/augment.hpp"
#include "gradate/errors.hpp"
#include "gradate/random.hpp"
#include "json.hpp"

namespace gradate {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

// Scores are kept inside [kScoreClip, 1 - kScoreClip] before any log.
inline constexpr double kScoreClip = 1e-7;

// ---------------------------------------------------------------------------
// Building blocks. Each accepts any Eigen expression and evaluates in the
// expression's scalar type.
// ---------------------------------------------------------------------------

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-x));
  const Scalar ex = exp(x);
  return ex / (Scalar(1) + ex);
}

template <typename Scalar>
Scalar clamp_score(Scalar s) {
  const Scalar lo(kScoreClip);
  const Scalar hi = Scalar(1) - lo;
  return s < lo ? lo : (s > hi ? hi : s);
}

/// ReLU(norm_adj * h * w): a single GCN layer on one subgraph.
template <typename DA, typename DH, typename DW>
MatrixX<typename DA::Scalar> gcn_layer_forward(const Eigen::MatrixBase<DA>& norm_adj,
                                               const Eigen::MatrixBase<DH>& h,
                                               const Eigen::MatrixBase<DW>& w) {
  if (norm_adj.rows() != norm_adj.cols() || norm_adj.cols() != h.rows() || h.cols() != w.rows()) {
    throw ArgumentError("gcn_layer_forward: shape mismatch");
  }
  using Scalar = typename DA::Scalar;
  return (norm_adj * h * w).cwiseMax(Scalar(0));
}

/// ReLU(x * w). Callers pass the weight matrix shared with the paired GCN.
template <typename DX, typename DW>
RowVectorX<typename DX::Scalar> mlp_forward(const Eigen::MatrixBase<DX>& x, const Eigen::MatrixBase<DW>& w) {
  if (x.rows() != 1 || x.cols() != w.rows()) throw ArgumentError("mlp_forward: shape mismatch");
  using Scalar = typename DX::Scalar;
  return (x * w).cwiseMax(Scalar(0));
}

/// Mean over rows.
template <typename DZ>
RowVectorX<typename DZ::Scalar> readout_mean(const Eigen::MatrixBase<DZ>& rows) {
  if (rows.rows() < 1) throw ArgumentError("readout_mean: need at least one row");
  return rows.colwise().mean();
}

/// sigmoid(z * b * e^T).
template <typename DZ, typename DE, typename DB>
typename DZ::Scalar bilinear_score(const Eigen::MatrixBase<DZ>& z, const Eigen::MatrixBase<DE>& e,
                                   const Eigen::MatrixBase<DB>& b) {
  if (z.rows() != 1 || e.rows() != 1 || z.cols() != b.rows() || e.cols() != b.cols()) {
    throw ArgumentError("bilinear_score: shape mismatch");
  }
  return sigmoid((z * b * e.transpose())(0, 0));
}

/// One target's subgraph-subgraph term
///   -log( exp(z1_i.z2_i) / (exp(z1_i.z1_j) + exp(z1_i.z2_j)) ).
/// With `include_positive` the positive pair also joins the denominator.
template <typename Scalar>
Scalar ss_contrast_term(Scalar positive_dot, Scalar negative_dot_1, Scalar negative_dot_2,
                        bool include_positive = false) {
  using std::exp;
  using std::log;
  Scalar top = negative_dot_1 > negative_dot_2 ? negative_dot_1 : negative_dot_2;
  if (include_positive && positive_dot > top) top = positive_dot;
  Scalar sum = exp(negative_dot_1 - top) + exp(negative_dot_2 - top);
  if (include_positive) sum += exp(positive_dot - top);
  return -positive_dot + top + log(sum);
}

/// Batch-mean subgraph-subgraph loss. Row k of each matrix is the
/// embedding for target k (z1_i, z2_i) or for its negative partner (z1_j, z2_j).
template <typename D1, typename D2, typename D3, typename D4>
typename D1::Scalar ss_contrast_loss(const Eigen::MatrixBase<D1>& z1_i, const Eigen::MatrixBase<D2>& z2_i,
                                     const Eigen::MatrixBase<D3>& z1_j, const Eigen::MatrixBase<D4>& z2_j,
                                     bool include_positive = false) {
  using Scalar = typename D1::Scalar;
  const Eigen::Index n = z1_i.rows();
  if (n < 1 || z2_i.rows() != n || z1_j.rows() != n || z2_j.rows() != n || z2_i.cols() != z1_i.cols() ||
      z1_j.cols() != z1_i.cols() || z2_j.cols() != z1_i.cols()) {
    throw ArgumentError("ss_contrast_loss: shape mismatch");
  }
  Scalar total(0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Scalar term = ss_contrast_term<Scalar>(z1_i.row(k).dot(z2_i.row(k)), z1_i.row(k).dot(z1_j.row(k)),
                                                 z1_i.row(k).dot(z2_j.row(k)), include_positive);
    using std::isfinite;
    if (!isfinite(term)) throw NumericalError("ss_contrast_loss: non-finite term at row " + std::to_string(k));
    total += term;
  }
  return total / Scalar(n);
}

/// beta * l_ns + (1 - beta) * l_nn + gamma * l_ss; beta and gamma in (0, 1).
double joint_loss(double l_ns, double l_nn, double l_ss, double beta, double gamma);

// ---------------------------------------------------------------------------
// Trainable state.
// ---------------------------------------------------------------------------

/// The four trainable matrices: a shared GCN/MLP weight and a bilinear
/// matrix for each of the node-subgraph and node-node branches.
template <typename Scalar>
struct BasicParameters {
  MatrixX<Scalar> w_ns;  // d x d'
  MatrixX<Scalar> b_ns;  // d' x d'
  MatrixX<Scalar> w_nn;  // d x d'
  MatrixX<Scalar> b_nn;  // d' x d'

  static BasicParameters zeros(Eigen::Index d, Eigen::Index d_prime) {
    return {MatrixX<Scalar>::Zero(d, d_prime), MatrixX<Scalar>::Zero(d_prime, d_prime),
            MatrixX<Scalar>::Zero(d, d_prime), MatrixX<Scalar>::Zero(d_prime, d_prime)};
  }

  Eigen::Index input_dim() const { return w_ns.rows(); }
  Eigen::Index hidden_dim() const { return w_ns.cols(); }

  std::array<MatrixX<Scalar>*, 4> matrices() { return {&w_ns, &b_ns, &w_nn, &b_nn}; }
  std::array<const MatrixX<Scalar>*, 4> matrices() const { return {&w_ns, &b_ns, &w_nn, &b_nn}; }

  bool all_finite() const {
    return w_ns.allFinite() && b_ns.allFinite() && w_nn.allFinite() && b_nn.allFinite();
  }

  bool same_shape(const BasicParameters& o) const {
    for (int k = 0; k < 4; ++k) {
      if (matrices()[k]->rows() != o.matrices()[k]->rows() || matrices()[k]->cols() != o.matrices()[k]->cols()) {
        return false;
      }
    }
    return true;
  }

  /// Throws ArgumentError unless shapes agree with (d, d') and entries are finite.
  void validate() const {
    const auto d = input_dim();
    const auto dp = hidden_dim();
    if (d < 1 || dp < 1 || w_nn.rows() != d || w_nn.cols() != dp || b_ns.rows() != dp || b_ns.cols() != dp ||
        b_nn.rows() != dp || b_nn.cols() != dp) {
      throw ArgumentError("parameters: inconsistent shapes");
    }
    if (!all_finite()) throw ArgumentError("parameters: non-finite entries");
  }
};

using Parameters = BasicParameters<double>;
using Gradients = BasicParameters<double>;

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], fan_in = row count of each matrix.
Parameters initialize_parameters(Eigen::Index d, Eigen::Index d_prime, Rng& rng);

/// Sum of all entries; used to check that read-only code leaves parameters alone.
double parameter_checksum(const Parameters& p);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  Parameters first_moment;
  Parameters second_moment;
  long step = 0;

  static OptimizerState zeros_like(const Parameters& p) {
    return {Parameters::zeros(p.input_dim(), p.hidden_dim()), Parameters::zeros(p.input_dim(), p.hidden_dim()), 0};
  }
};

/// One bias-corrected adaptive-moment update, in place.
void adam_step(Parameters& params, const Gradients& grads, OptimizerState& state, const AdamConfig& config);

// ---------------------------------------------------------------------------
// Batched contrast.
// ---------------------------------------------------------------------------

/// Targets of one batch with their subgraphs in both views and the
/// negative partner of each target (a position in the same batch). The same
/// partner serves every contrast.
struct ContrastBatch {
  std::array<std::vector<SubgraphSample>, 2> views;
  std::vector<Eigen::Index> partner;

  Eigen::Index size() const { return static_cast<Eigen::Index>(partner.size()); }
  void validate(Eigen::Index feature_dim) const;
};

/// Effective loss weights. Full model: ns = beta, nn = 1 - beta, ss = gamma.
struct LossWeights {
  double alpha = 0.5;
  double ns = 0.5;
  double nn = 0.5;
  double ss = 0.1;
  bool ss_include_positive = true;
};

/// Per-target embeddings of one view, with the pre-activations backward needs.
struct ViewEmbeddings {
  Eigen::MatrixXd z;         // subgraph readouts, B x d'
  Eigen::MatrixXd e;         // target MLP embeddings (node-subgraph weights)
  Eigen::MatrixXd u;         // masked target's GCN row (node-node weights)
  Eigen::MatrixXd e_hat;     // target MLP embeddings (node-node weights)
  Eigen::MatrixXd e_pre, u_pre, e_hat_pre;
  std::vector<Eigen::MatrixXd> gcn_pre;  // per target, n_i x d'
};

ViewEmbeddings embed_view(const std::vector<SubgraphSample>& samples, const Parameters& params);

/// Clamped similarity scores for one view.
struct ViewScores {
  Eigen::VectorXd ns_pos, ns_neg;  // sigmoid(z_i B e_i), sigmoid(z_j B e_i)
  Eigen::VectorXd nn_pos, nn_neg;  // sigmoid(u_i B' ê_i), sigmoid(u_i B' ê_j)
};

ViewScores view_scores(const ViewEmbeddings& emb, const Parameters& params, const std::vector<Eigen::Index>& partner);

struct NsContrastOutput {
  std::array<Eigen::VectorXd, 2> pos, neg;
  std::array<double, 2> view_loss{};
  double loss = 0.0;
  std::array<Eigen::MatrixXd, 2> z;  // subgraph embeddings per view, B x d'
};

struct NnContrastOutput {
  std::array<Eigen::VectorXd, 2> pos, neg;
  std::array<double, 2> view_loss{};
  double loss = 0.0;
};

NsContrastOutput ns_contrast_forward(const ContrastBatch& batch, const Parameters& params, double alpha);
NnContrastOutput nn_contrast_forward(const ContrastBatch& batch, const Parameters& params, double alpha);

struct ContrastBatchOutput {
  std::array<ViewScores, 2> scores;
  std::array<double, 2> ns_view_loss{}, nn_view_loss{};
  double loss_ns = 0.0;
  double loss_nn = 0.0;
  double loss_ss = 0.0;
  double joint = 0.0;
  std::array<Eigen::MatrixXd, 2> z;
};

ContrastBatchOutput contrast_forward(const ContrastBatch& batch, const Parameters& params, const LossWeights& weights);

struct LossAndGradients {
  ContrastBatchOutput output;
  Gradients grads;
};

/// Forward pass plus exact gradients of the weighted joint loss.
LossAndGradients backward(const ContrastBatch& batch, const Parameters& params, const LossWeights& weights);

// Model file: {"version": 1, "d", "d_prime", "W_ns", "B_ns", "W_nn", "B_nn"}.
// Extra top-level keys listed in `allowed_extra` are tolerated by the reader.
nlohmann::json parameters_to_json(const Parameters& params);
Parameters parameters_from_json(const nlohmann::json& doc, const std::vector<std::string>& allowed_extra = {});

}  // namespace gradate

#endif  // GRADATE_MODEL_HPP_
