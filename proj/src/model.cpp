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

#include "gradate/model.hpp"

#include <cmath>
#include <string>

namespace gradate {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

bool unclamped(double s) { return s > kScoreClip && s < 1.0 - kScoreClip; }

double bce_pair(double pos, double neg) { return -std::log(pos) - std::log(1.0 - neg); }

MatrixXd relu_mask(const MatrixXd& pre) { return (pre.array() > 0.0).cast<double>().matrix(); }

}  // namespace

double joint_loss(double l_ns, double l_nn, double l_ss, double beta, double gamma) {
  if (!(0.0 < beta && beta < 1.0)) throw ArgumentError("joint_loss: beta must lie in (0, 1)");
  if (!(0.0 < gamma && gamma < 1.0)) throw ArgumentError("joint_loss: gamma must lie in (0, 1)");
  return beta * l_ns + (1.0 - beta) * l_nn + gamma * l_ss;
}

Parameters initialize_parameters(Index d, Index d_prime, Rng& rng) {
  if (d < 1 || d_prime < 1) throw ArgumentError("initialize_parameters: dimensions must be positive");
  Parameters p = Parameters::zeros(d, d_prime);
  for (MatrixXd* m : p.matrices()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(m->rows()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Index c = 0; c < m->cols(); ++c) {
      for (Index r = 0; r < m->rows(); ++r) (*m)(r, c) = dist(rng);
    }
  }
  return p;
}

double parameter_checksum(const Parameters& p) {
  double sum = 0.0;
  for (const MatrixXd* m : p.matrices()) sum += m->sum();
  return sum;
}

void adam_step(Parameters& params, const Gradients& grads, OptimizerState& state, const AdamConfig& config) {
  if (!params.same_shape(grads) || !params.same_shape(state.first_moment) || !params.same_shape(state.second_moment)) {
    throw ArgumentError("adam_step: shape mismatch");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  auto p = params.matrices();
  auto g = grads.matrices();
  auto m = state.first_moment.matrices();
  auto v = state.second_moment.matrices();
  for (int k = 0; k < 4; ++k) {
    *m[k] = config.beta1 * *m[k] + (1.0 - config.beta1) * *g[k];
    *v[k] = config.beta2 * *v[k] + (1.0 - config.beta2) * g[k]->cwiseProduct(*g[k]);
    p[k]->array() -= config.lr * (m[k]->array() / c1) / ((v[k]->array() / c2).sqrt() + config.eps);
  }
}

void ContrastBatch::validate(Index feature_dim) const {
  const Index n = size();
  if (n < 2) throw ArgumentError("contrast batch: need at least two targets");
  for (const auto& view : views) {
    if (static_cast<Index>(view.size()) != n) throw ArgumentError("contrast batch: view size mismatch");
    for (const auto& s : view) {
      if (s.features_full.cols() != feature_dim || s.propagated.rows() != s.size() || s.size() < 1) {
        throw ArgumentError("contrast batch: sample shape mismatch");
      }
    }
  }
  for (Index k = 0; k < n; ++k) {
    if (partner[k] < 0 || partner[k] >= n || partner[k] == k) {
      throw ArgumentError("contrast batch: invalid negative partner at position " + std::to_string(k));
    }
  }
}

ViewEmbeddings embed_view(const std::vector<SubgraphSample>& samples, const Parameters& params) {
  const Index n = static_cast<Index>(samples.size());
  const Index d = params.input_dim();
  const Index dp = params.hidden_dim();
  ViewEmbeddings out;
  out.z.resize(n, dp);
  out.e_pre.resize(n, dp);
  out.u_pre.resize(n, dp);
  out.e_hat_pre.resize(n, dp);
  out.gcn_pre.resize(n);
  for (Index k = 0; k < n; ++k) {
    const SubgraphSample& s = samples[k];
    if (s.features_full.cols() != d) throw ArgumentError("embed_view: feature dimension mismatch with parameters");
    out.gcn_pre[k].noalias() = s.propagated * params.w_ns;
    out.z.row(k) = readout_mean(out.gcn_pre[k].cwiseMax(0.0));
    const auto x = s.features_full.row(0);
    out.e_pre.row(k).noalias() = x * params.w_ns;
    out.u_pre.row(k).noalias() = s.propagated.row(0) * params.w_nn;
    out.e_hat_pre.row(k).noalias() = x * params.w_nn;
  }
  out.e = out.e_pre.cwiseMax(0.0);
  out.u = out.u_pre.cwiseMax(0.0);
  out.e_hat = out.e_hat_pre.cwiseMax(0.0);
  if (!out.z.allFinite() || !out.e.allFinite() || !out.u.allFinite() || !out.e_hat.allFinite()) {
    for (Index k = 0; k < n; ++k) {
      if (!out.z.row(k).allFinite() || !out.e.row(k).allFinite() || !out.u.row(k).allFinite() ||
          !out.e_hat.row(k).allFinite()) {
        throw NumericalError("embed_view: non-finite embedding for target node " + std::to_string(samples[k].nodes[0]));
      }
    }
  }
  return out;
}

ViewScores view_scores(const ViewEmbeddings& emb, const Parameters& params, const std::vector<Index>& partner) {
  const Index n = emb.z.rows();
  if (static_cast<Index>(partner.size()) != n) throw ArgumentError("view_scores: partner list size mismatch");
  // Rows of (e B^T) and (ê B'^T) let each logit be one dot product.
  const MatrixXd e_b = emb.e * params.b_ns.transpose();
  const MatrixXd u_b = emb.u * params.b_nn;
  ViewScores s;
  s.ns_pos.resize(n);
  s.ns_neg.resize(n);
  s.nn_pos.resize(n);
  s.nn_neg.resize(n);
  for (Index k = 0; k < n; ++k) {
    const Index j = partner[k];
    s.ns_pos[k] = clamp_score(sigmoid(emb.z.row(k).dot(e_b.row(k))));
    s.ns_neg[k] = clamp_score(sigmoid(emb.z.row(j).dot(e_b.row(k))));
    s.nn_pos[k] = clamp_score(sigmoid(u_b.row(k).dot(emb.e_hat.row(k))));
    s.nn_neg[k] = clamp_score(sigmoid(u_b.row(k).dot(emb.e_hat.row(j))));
  }
  return s;
}

namespace {

struct BatchForward {
  std::array<ViewEmbeddings, 2> emb;
  ContrastBatchOutput out;
};

BatchForward forward_impl(const ContrastBatch& batch, const Parameters& params, const LossWeights& w) {
  params.validate();
  batch.validate(params.input_dim());
  const Index n = batch.size();
  const std::array<double, 2> view_weight{w.alpha, 1.0 - w.alpha};
  BatchForward f;
  for (int v = 0; v < 2; ++v) {
    f.emb[v] = embed_view(batch.views[v], params);
    f.out.scores[v] = view_scores(f.emb[v], params, batch.partner);
    const ViewScores& s = f.out.scores[v];
    double ns = 0.0;
    double nn = 0.0;
    for (Index k = 0; k < n; ++k) {
      ns += bce_pair(s.ns_pos[k], s.ns_neg[k]);
      nn += bce_pair(s.nn_pos[k], s.nn_neg[k]);
    }
    f.out.ns_view_loss[v] = ns / static_cast<double>(n);
    f.out.nn_view_loss[v] = nn / static_cast<double>(n);
    f.out.z[v] = f.emb[v].z;
  }
  f.out.loss_ns = view_weight[0] * f.out.ns_view_loss[0] + view_weight[1] * f.out.ns_view_loss[1];
  f.out.loss_nn = view_weight[0] * f.out.nn_view_loss[0] + view_weight[1] * f.out.nn_view_loss[1];

  double ss = 0.0;
  const MatrixXd& z1 = f.emb[0].z;
  const MatrixXd& z2 = f.emb[1].z;
  for (Index k = 0; k < n; ++k) {
    const Index j = batch.partner[k];
    const double term = ss_contrast_term(z1.row(k).dot(z2.row(k)), z1.row(k).dot(z1.row(j)),
                                         z1.row(k).dot(z2.row(j)), w.ss_include_positive);
    if (!std::isfinite(term)) {
      throw NumericalError("ss_contrast_loss: non-finite term for target node " +
                           std::to_string(batch.views[0][k].nodes[0]));
    }
    ss += term;
  }
  f.out.loss_ss = ss / static_cast<double>(n);
  f.out.joint = w.ns * f.out.loss_ns + w.nn * f.out.loss_nn + w.ss * f.out.loss_ss;
  return f;
}

}  // namespace

ContrastBatchOutput contrast_forward(const ContrastBatch& batch, const Parameters& params, const LossWeights& weights) {
  return forward_impl(batch, params, weights).out;
}

NsContrastOutput ns_contrast_forward(const ContrastBatch& batch, const Parameters& params, double alpha) {
  LossWeights w;
  w.alpha = alpha;
  const ContrastBatchOutput o = contrast_forward(batch, params, w);
  NsContrastOutput r;
  for (int v = 0; v < 2; ++v) {
    r.pos[v] = o.scores[v].ns_pos;
    r.neg[v] = o.scores[v].ns_neg;
    r.view_loss[v] = o.ns_view_loss[v];
    r.z[v] = o.z[v];
  }
  r.loss = o.loss_ns;
  return r;
}

NnContrastOutput nn_contrast_forward(const ContrastBatch& batch, const Parameters& params, double alpha) {
  LossWeights w;
  w.alpha = alpha;
  const ContrastBatchOutput o = contrast_forward(batch, params, w);
  NnContrastOutput r;
  for (int v = 0; v < 2; ++v) {
    r.pos[v] = o.scores[v].nn_pos;
    r.neg[v] = o.scores[v].nn_neg;
    r.view_loss[v] = o.nn_view_loss[v];
  }
  r.loss = o.loss_nn;
  return r;
}

LossAndGradients backward(const ContrastBatch& batch, const Parameters& params, const LossWeights& w) {
  BatchForward f = forward_impl(batch, params, w);
  const Index n = batch.size();
  const Index dp = params.hidden_dim();
  const double inv_n = 1.0 / static_cast<double>(n);
  const std::array<double, 2> view_weight{w.alpha, 1.0 - w.alpha};

  Gradients g = Gradients::zeros(params.input_dim(), dp);
  // Upstream gradients of the per-target embeddings, per view.
  std::array<MatrixXd, 2> dz, de, du, de_hat;
  for (int v = 0; v < 2; ++v) {
    dz[v] = MatrixXd::Zero(n, dp);
    de[v] = MatrixXd::Zero(n, dp);
    du[v] = MatrixXd::Zero(n, dp);
    de_hat[v] = MatrixXd::Zero(n, dp);
  }

  for (int v = 0; v < 2; ++v) {
    const ViewEmbeddings& emb = f.emb[v];
    const ViewScores& s = f.out.scores[v];
    const double c_ns = w.ns * view_weight[v] * inv_n;
    const double c_nn = w.nn * view_weight[v] * inv_n;
    for (Index k = 0; k < n; ++k) {
      const Index j = batch.partner[k];
      if (c_ns != 0.0) {
        // d/da of -log(sigmoid(a)) is -(1 - s); of -log(1 - sigmoid(b)) is s.
        const double ga = unclamped(s.ns_pos[k]) ? -c_ns * (1.0 - s.ns_pos[k]) : 0.0;
        const double gb = unclamped(s.ns_neg[k]) ? c_ns * s.ns_neg[k] : 0.0;
        const RowVectorXd e_bt = emb.e.row(k) * params.b_ns.transpose();
        g.b_ns.noalias() += (ga * emb.z.row(k).transpose() + gb * emb.z.row(j).transpose()) * emb.e.row(k);
        dz[v].row(k) += ga * e_bt;
        dz[v].row(j) += gb * e_bt;
        de[v].row(k) += (ga * emb.z.row(k) + gb * emb.z.row(j)) * params.b_ns;
      }
      if (c_nn != 0.0) {
        const double gc = unclamped(s.nn_pos[k]) ? -c_nn * (1.0 - s.nn_pos[k]) : 0.0;
        const double gd = unclamped(s.nn_neg[k]) ? c_nn * s.nn_neg[k] : 0.0;
        g.b_nn.noalias() += emb.u.row(k).transpose() * (gc * emb.e_hat.row(k) + gd * emb.e_hat.row(j));
        du[v].row(k) += (gc * emb.e_hat.row(k) + gd * emb.e_hat.row(j)) * params.b_nn.transpose();
        const RowVectorXd u_b = emb.u.row(k) * params.b_nn;
        de_hat[v].row(k) += gc * u_b;
        de_hat[v].row(j) += gd * u_b;
      }
    }
  }

  if (w.ss != 0.0) {
    const MatrixXd& z1 = f.emb[0].z;
    const MatrixXd& z2 = f.emb[1].z;
    const double c_ss = w.ss * inv_n;
    for (Index k = 0; k < n; ++k) {
      const Index j = batch.partner[k];
      const double pos = z1.row(k).dot(z2.row(k));
      const double n1 = z1.row(k).dot(z1.row(j));
      const double n2 = z1.row(k).dot(z2.row(j));
      double top = std::max(n1, n2);
      if (w.ss_include_positive) top = std::max(top, pos);
      const double e1 = std::exp(n1 - top);
      const double e2 = std::exp(n2 - top);
      const double e0 = w.ss_include_positive ? std::exp(pos - top) : 0.0;
      const double denom = e0 + e1 + e2;
      const double g_pos = c_ss * (-1.0 + e0 / denom);
      const double g_n1 = c_ss * e1 / denom;
      const double g_n2 = c_ss * e2 / denom;
      dz[0].row(k) += g_pos * z2.row(k) + g_n1 * z1.row(j) + g_n2 * z2.row(j);
      dz[1].row(k) += g_pos * z1.row(k);
      dz[0].row(j) += g_n1 * z1.row(k);
      dz[1].row(j) += g_n2 * z1.row(k);
    }
  }

  for (int v = 0; v < 2; ++v) {
    const ViewEmbeddings& emb = f.emb[v];
    for (Index k = 0; k < n; ++k) {
      const SubgraphSample& s = batch.views[v][k];
      if (!dz[v].row(k).isZero(0.0)) {
        // Readout spreads dz evenly over rows; ReLU gates it.
        const MatrixXd d_pre = relu_mask(emb.gcn_pre[k]).array().rowwise() *
                               (dz[v].row(k) / static_cast<double>(s.size())).array();
        g.w_ns.noalias() += s.propagated.transpose() * d_pre;
      }
      const auto x = s.features_full.row(0);
      g.w_ns.noalias() += x.transpose() * de[v].row(k).cwiseProduct(relu_mask(emb.e_pre.row(k)));
      g.w_nn.noalias() += s.propagated.row(0).transpose() * du[v].row(k).cwiseProduct(relu_mask(emb.u_pre.row(k)));
      g.w_nn.noalias() += x.transpose() * de_hat[v].row(k).cwiseProduct(relu_mask(emb.e_hat_pre.row(k)));
    }
  }

  return {std::move(f.out), std::move(g)};
}

}  // namespace gradate
