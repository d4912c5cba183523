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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "gradate/errors.hpp"
#include "gradate/train.hpp"
#include "test_support.hpp"

using namespace gradate;

namespace {

Hyperparams small_hp() {
  Hyperparams hp;
  hp.epochs = 3;
  hp.batch_size = 16;
  hp.hidden_dim = 8;
  hp.rounds = 4;
  hp.seed = 7;
  return hp;
}

Graph small_graph() {
  SyntheticConfig cfg;
  cfg.num_nodes = 60;
  cfg.feature_dim = 6;
  cfg.num_blocks = 3;
  cfg.p_in = 0.2;
  cfg.p_out = 0.01;
  Rng rng(3);
  return generate_synthetic(cfg, rng);
}

bool same_params(const Parameters& a, const Parameters& b) {
  return a.w_ns == b.w_ns && a.b_ns == b.b_ns && a.w_nn == b.w_nn && a.b_nn == b.b_nn;
}

}  // namespace

TEST_CASE("make_batches") {
  Rng rng(1);
  auto sizes = [](const std::vector<std::vector<Index>>& bs) {
    std::vector<std::size_t> s;
    for (const auto& b : bs) s.push_back(b.size());
    return s;
  };
  CHECK(sizes(make_batches(10, 4, rng)) == std::vector<std::size_t>{4, 4, 2});
  CHECK(sizes(make_batches(9, 4, rng)) == std::vector<std::size_t>{4, 5});
  CHECK(sizes(make_batches(8, 4, rng)) == std::vector<std::size_t>{4, 4});
  CHECK(sizes(make_batches(3, 300, rng)) == std::vector<std::size_t>{3});

  const auto bs = make_batches(101, 7, rng);
  std::vector<Index> all;
  for (const auto& b : bs) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  std::vector<Index> want(101);
  std::iota(want.begin(), want.end(), Index{0});
  CHECK(all == want);

  CHECK_THROWS_AS(make_batches(1, 4, rng), ArgumentError);
  CHECK_THROWS_AS(make_batches(10, 1, rng), ArgumentError);
}

TEST_CASE("pair_negatives") {
  Rng rng(2);
  CHECK(pair_negatives(2, rng) == std::vector<Index>{1, 0});
  CHECK_THROWS_AS(pair_negatives(1, rng), ArgumentError);

  // Each position draws uniformly over the others.
  const Index size = 5;
  const int draws = 100000;
  std::vector<std::vector<int>> counts(size, std::vector<int>(size, 0));
  for (int t = 0; t < draws / size; ++t) {
    const auto p = pair_negatives(size, rng);
    for (Index k = 0; k < size; ++k) {
      REQUIRE(p[k] != k);
      REQUIRE(p[k] >= 0);
      REQUIRE(p[k] < size);
      ++counts[k][p[k]];
    }
  }
  for (Index k = 0; k < size; ++k) {
    const double expected = static_cast<double>(draws / size) / (size - 1);
    double chi2 = 0.0;
    for (Index j = 0; j < size; ++j) {
      if (j == k) continue;
      chi2 += (counts[k][j] - expected) * (counts[k][j] - expected) / expected;
    }
    // 3 degrees of freedom; 16.27 is the 0.999 quantile.
    CHECK(chi2 < 16.27);
  }
}

TEST_CASE("zero epochs returns the initial parameters") {
  const Graph g = small_graph();
  Hyperparams hp = small_hp();
  hp.epochs = 0;
  const auto result = train(g, hp);
  CHECK(result.history.empty());
  CHECK(same_params(result.params, initial_parameters(g, hp)));
}

TEST_CASE("training is deterministic and independent of thread count") {
  const Graph g = small_graph();
  const Hyperparams hp = small_hp();
  const auto a = train(g, hp, TrainOptions{1});
  const auto b = train(g, hp, TrainOptions{1});
  const auto c = train(g, hp, TrainOptions{4});
  CHECK(same_params(a.params, b.params));
  CHECK(same_params(a.params, c.params));
  CHECK(loss_history_csv(a.history) == loss_history_csv(c.history));
  Hyperparams other = hp;
  other.seed = 8;
  CHECK(!same_params(a.params, train(g, other).params));
}

TEST_CASE("every augmentation and variant trains with finite losses") {
  const Graph g = small_graph();
  for (const char* method : {"em", "gnf", "fm", "gd"}) {
    for (const char* variant : {"NS", "NS+SS", "NS+NN", "NS+NN+SS"}) {
      Hyperparams hp = small_hp();
      hp.epochs = 2;
      hp.augment.method = parse_augment_method(method);
      hp.variant = parse_variant(variant);
      const auto result = train(g, hp);
      REQUIRE(result.history.size() == 2);
      for (const auto& e : result.history) {
        CHECK(std::isfinite(e.joint));
        CHECK(std::isfinite(e.l_ns));
        CHECK(e.epoch >= 1);
      }
      CHECK(result.params.all_finite());
      if (hp.variant == ContrastVariant::kNs) {
        // Only the node-subgraph term enters the objective.
        CHECK(result.history[0].joint == doctest::Approx(result.history[0].l_ns).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("joint loss decreases over training") {
  SyntheticConfig cfg;
  cfg.num_nodes = 200;
  cfg.feature_dim = 16;
  cfg.num_blocks = 4;
  cfg.p_in = 0.08;
  cfg.p_out = 0.005;
  Rng rng(11);
  const Graph base = generate_synthetic(cfg, rng);
  InjectionConfig inj;
  inj.n_structural = 10;
  inj.n_feature = 10;
  inj.clique_size = 5;
  const Graph g = inject_anomalies(base, inj, rng).graph;
  std::vector<double> drops;
  for (std::uint64_t seed : {1, 2, 3}) {
    Hyperparams hp;
    hp.epochs = 50;
    hp.batch_size = 64;
    hp.hidden_dim = 32;
    hp.seed = seed;
    const auto h = train(g, hp).history;
    double first = 0.0, last = 0.0;
    for (int k = 0; k < 5; ++k) {
      first += h[k].joint / 5;
      last += h[h.size() - 1 - k].joint / 5;
    }
    drops.push_back(first - last);
  }
  std::sort(drops.begin(), drops.end());
  CHECK(drops[1] > 0.0);
}

TEST_CASE("loss weights per variant") {
  Hyperparams hp;
  hp.alpha = 0.6;
  hp.beta = 0.3;
  hp.gamma = 0.2;
  hp.variant = ContrastVariant::kFull;
  auto w = hp.loss_weights();
  CHECK(w.alpha == 0.6);
  CHECK(w.ns == 0.3);
  CHECK(w.nn == doctest::Approx(0.7));
  CHECK(w.ss == 0.2);
  CHECK(hp.score_ns_weight() == 0.3);
  hp.variant = ContrastVariant::kNs;
  w = hp.loss_weights();
  CHECK(w.ns == 1.0);
  CHECK(w.nn == 0.0);
  CHECK(w.ss == 0.0);
  CHECK(hp.score_ns_weight() == 1.0);
  hp.variant = ContrastVariant::kNsSs;
  CHECK(hp.loss_weights().ss == 0.2);
  hp.variant = ContrastVariant::kNsNn;
  CHECK(hp.loss_weights().ss == 0.0);
  CHECK_THROWS_AS(parse_variant("NN"), ArgumentError);
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  hp.batch_size = 1;
  CHECK_THROWS(hp.validate());
  hp = Hyperparams{};
  hp.epochs = -1;
  CHECK_THROWS(hp.validate());
  hp = Hyperparams{};
  hp.beta = 1.0;
  CHECK_THROWS(hp.validate());
  hp = Hyperparams{};
  hp.augment.edge_proportion = 1.5;
  CHECK_THROWS(hp.validate());
  CHECK_NOTHROW(Hyperparams{}.validate());
}

TEST_CASE("config JSON") {
  const auto doc = nlohmann::json::parse(R"({"epochs": 12, "P": 0.4, "augmentation": "gd", "variant": "NS+NN",
                                              "seed": 5, "alpha": 0.25})");
  const Hyperparams hp = hyperparams_from_json(doc);
  CHECK(hp.epochs == 12);
  CHECK(hp.augment.edge_proportion == 0.4);
  CHECK(hp.augment.method == AugmentMethod::kGraphDiffusion);
  CHECK(hp.variant == ContrastVariant::kNsNn);
  CHECK(hp.seed == 5);
  CHECK(hp.alpha == 0.25);
  CHECK(hp.batch_size == 300);

  const Hyperparams back = hyperparams_from_json(hyperparams_to_json(hp));
  CHECK(hyperparams_to_json(back) == hyperparams_to_json(hp));

  CHECK_THROWS_AS(hyperparams_from_json(nlohmann::json::parse(R"({"epoch": 3})")), SchemaError);
  CHECK_THROWS_AS(hyperparams_from_json(nlohmann::json::parse(R"({"epochs": "3"})")), SchemaError);
  CHECK_THROWS_AS(hyperparams_from_json(nlohmann::json::parse(R"([1, 2])")), SchemaError);
}

TEST_CASE("model file round trip keeps the training configuration") {
  testing::TempDir dir;
  const Graph g = small_graph();
  Hyperparams hp = small_hp();
  hp.augment.method = AugmentMethod::kFeatureMask;
  const auto p = initial_parameters(g, hp);
  save_model(dir.file("m.json"), p, hp);
  const ModelFile m = load_model(dir.file("m.json"));
  CHECK(same_params(m.params, p));
  REQUIRE(m.hyperparams.has_value());
  CHECK(hyperparams_to_json(*m.hyperparams) == hyperparams_to_json(hp));

  save_model(dir.file("plain.json"), p, std::nullopt);
  CHECK(!load_model(dir.file("plain.json")).hyperparams.has_value());
  CHECK_THROWS_AS(load_model(dir.file("missing.json")), std::runtime_error);
}

TEST_CASE("identical views with gamma = 0 and alpha = 1 reduce to the one-view NS loss") {
  Rng rng(5);
  const Graph g = testing::random_graph(10, 4, 0.4, rng);
  auto batch = testing::random_batch(g, 4, 4, rng);
  batch.views[1] = batch.views[0];
  const Parameters p = initialize_parameters(4, 6, rng);
  const auto out = contrast_forward(batch, p, LossWeights{1.0, 0.5, 0.5, 0.0, true});
  CHECK(out.loss_ns == out.ns_view_loss[0]);
  CHECK(out.ns_view_loss[0] == out.ns_view_loss[1]);
  // With identical views, P = 0 edge modification leaves the graph as-is.
  const Graph same = edge_modification(g, 0.0, rng);
  CHECK(same.edges() == g.edges());
}
