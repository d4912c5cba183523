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

#include "gradate/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "gradate/errors.hpp"
#include "gradate/eval.hpp"
#include "gradate/graph.hpp"
#include "gradate/json_util.hpp"
#include "gradate/parallel.hpp"
#include "gradate/score.hpp"
#include "gradate/train.hpp"

namespace gradate {

namespace {

// Flags that override config values; unset flags leave the config alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> aug;
  std::optional<Index> epochs, batch_size, hidden_dim, subgraph_size, rounds, top_k;
  std::optional<double> alpha, beta, gamma, lr, edge_proportion, restart, noise_sigma, mask_ratio, teleport;
  std::optional<std::string> variant;

  void add_to(CLI::App* cmd, bool with_variant) {
    cmd->add_option("--seed", seed, "Random seed (overrides config 'seed'; default 0)");
    cmd->add_option("--aug", aug, "Second-view augmentation: em|gnf|fm|gd (default em)")
        ->check(CLI::IsMember({"em", "gnf", "fm", "gd"}, CLI::ignore_case));
    cmd->add_option("--epochs", epochs, "Training epochs (default 400)");
    cmd->add_option("--batch-size", batch_size, "Batch size, at least 2 (default 300)");
    cmd->add_option("--hidden-dim", hidden_dim, "Embedding dimension (default 64)");
    cmd->add_option("--subgraph-size", subgraph_size, "RWR subgraph size (default 4)");
    cmd->add_option("--rounds", rounds, "Scoring rounds recorded with the model (default 256)");
    cmd->add_option("--alpha", alpha, "View balance in (0,1) (default 0.5)");
    cmd->add_option("--beta", beta, "Node-subgraph vs node-node balance in (0,1) (default 0.5)");
    cmd->add_option("--gamma", gamma, "Subgraph-subgraph loss weight in (0,1) (default 0.1)");
    cmd->add_option("--lr", lr, "Learning rate (default 0.001)");
    cmd->add_option("-P,--edge-proportion", edge_proportion, "Edge modification proportion P (default 0.2)");
    cmd->add_option("--restart", restart, "RWR restart probability (default 0.15)");
    cmd->add_option("--noise-sigma", noise_sigma, "GNF noise std (default 0.1 x per-column std)");
    cmd->add_option("--mask-ratio", mask_ratio, "FM masked fraction (default 0.2)");
    cmd->add_option("--teleport", teleport, "GD teleport probability (default 0.15)");
    cmd->add_option("--top-k", top_k, "GD edges kept per row, 0 = round(M/N) (default 0)");
    if (with_variant) {
      cmd->add_option("--variant", variant, "Contrasts: NS|NS+SS|NS+NN|NS+NN+SS (default NS+NN+SS)");
    }
  }

  void apply(Hyperparams& hp) const {
    if (seed) hp.seed = *seed;
    if (aug) hp.augment.method = parse_augment_method(*aug);
    if (epochs) hp.epochs = *epochs;
    if (batch_size) hp.batch_size = *batch_size;
    if (hidden_dim) hp.hidden_dim = *hidden_dim;
    if (subgraph_size) hp.subgraph_size = *subgraph_size;
    if (rounds) hp.rounds = *rounds;
    if (alpha) hp.alpha = *alpha;
    if (beta) hp.beta = *beta;
    if (gamma) hp.gamma = *gamma;
    if (lr) hp.lr = *lr;
    if (edge_proportion) hp.augment.edge_proportion = *edge_proportion;
    if (restart) hp.restart = *restart;
    if (noise_sigma) hp.augment.noise_sigma = *noise_sigma;
    if (mask_ratio) hp.augment.mask_ratio = *mask_ratio;
    if (teleport) hp.augment.teleport = *teleport;
    if (top_k) hp.augment.top_k = *top_k;
    if (variant) hp.variant = parse_variant(*variant);
  }
};

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ArgumentError*>(&e)) return "argument";
  if (dynamic_cast<const IndexError*>(&e)) return "index";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const ValidationError*>(&e)) return "validation";
  if (dynamic_cast<const FeasibilityError*>(&e)) return "feasibility";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  return "runtime";
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

template <typename T>
std::vector<T> split_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    if constexpr (std::is_same_v<T, std::string>) {
      out.push_back(item);
    } else {
      std::size_t used = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != item.size()) throw ArgumentError("invalid list entry '" + item + "'");
      out.push_back(static_cast<T>(v));
    }
  }
  return out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-view, multi-scale contrastive graph anomaly detection"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // synth
  SyntheticConfig synth;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a stochastic-block-model dataset");
  synth_cmd->add_option("--nodes", synth.num_nodes, "Number of nodes")->required();
  synth_cmd->add_option("--dim", synth.feature_dim, "Feature dimension")->required();
  synth_cmd->add_option("--blocks", synth.num_blocks, "Number of blocks")->required();
  synth_cmd->add_option("--p-in", synth.p_in, "Within-block edge probability")->capture_default_str();
  synth_cmd->add_option("--p-out", synth.p_out, "Between-block edge probability")->capture_default_str();
  synth_cmd->add_option("--mean-scale", synth.mean_scale, "Std of block mean entries")->capture_default_str();
  synth_cmd->add_option("--noise-scale", synth.noise_scale, "Std of per-node feature noise")->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed, "Random seed")->required();
  synth_cmd->add_option("--out", synth_out, "Output dataset JSON")->required();

  // inject
  InjectionConfig inject;
  std::string inject_in, inject_out;
  std::uint64_t inject_seed = 0;
  auto* inject_cmd = app.add_subcommand("inject", "Inject structural and feature anomalies");
  inject_cmd->add_option("--in", inject_in, "Input dataset JSON")->required()->check(CLI::ExistingFile);
  inject_cmd->add_option("--out", inject_out, "Output dataset JSON")->required();
  inject_cmd->add_option("--structural", inject.n_structural, "Structural anomaly count")->required();
  inject_cmd->add_option("--feature", inject.n_feature, "Feature anomaly count")->required();
  inject_cmd->add_option("--clique-size", inject.clique_size, "Nodes per injected clique")->capture_default_str();
  inject_cmd->add_option("--pool", inject.candidate_pool, "Candidates per feature anomaly")->capture_default_str();
  inject_cmd->add_option("--seed", inject_seed, "Random seed")->required();

  // train
  std::string train_data, train_config, train_out = "model.json", train_log;
  std::int64_t train_threads = 1;
  Overrides train_over;
  auto* train_cmd = app.add_subcommand("train", "Train the contrastive scorer");
  train_cmd->add_option("--data", train_data, "Dataset JSON")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--config", train_config, "Hyperparameter JSON")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "Output model JSON")->capture_default_str();
  train_cmd->add_option("--log", train_log, "Per-epoch loss CSV (epoch,l_ns,l_nn,l_ss,joint)");
  train_cmd->add_option("--threads", train_threads, "Sampling threads")->capture_default_str();
  train_over.add_to(train_cmd, true);

  // score
  std::string score_data, score_model, score_out, score_config;
  std::optional<Index> score_rounds;
  std::optional<std::uint64_t> score_seed;
  std::int64_t score_threads = hardware_threads();
  auto* score_cmd = app.add_subcommand("score", "Multi-round anomaly scoring");
  score_cmd->add_option("--data", score_data, "Dataset JSON")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--model", score_model, "Model JSON from train")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--rounds", score_rounds, "Scoring rounds (default: model's, else 256)");
  score_cmd->add_option("--seed", score_seed, "Random seed (default: model's training seed)");
  score_cmd->add_option("--config", score_config, "Hyperparameter JSON overriding the model's")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--threads", score_threads, "Parallel rounds (default: all cores)");
  score_cmd->add_option("--out", score_out, "Output scores CSV")->required();

  // eval
  std::string eval_scores, eval_data, eval_roc;
  auto* eval_cmd = app.add_subcommand("eval", "AUC of a scores file against dataset labels");
  eval_cmd->add_option("--scores", eval_scores, "Scores CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--data", eval_data, "Labelled dataset JSON")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--roc", eval_roc, "Write ROC points CSV (fpr,tpr)");

  // ablate
  std::string ablate_data, ablate_config, ablate_variants, ablate_seeds, ablate_out;
  std::int64_t ablate_threads = hardware_threads();
  Overrides ablate_over;
  auto* ablate_cmd = app.add_subcommand("ablate", "Train/score/evaluate contrast and augmentation variants");
  ablate_cmd->add_option("--data", ablate_data, "Labelled dataset JSON")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--config", ablate_config, "Hyperparameter JSON")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--variants", ablate_variants, "Comma list, e.g. NS,NS+NN,NS+NN+SS:gd")->required();
  ablate_cmd->add_option("--seeds", ablate_seeds, "Comma list of seeds")->required();
  ablate_cmd->add_option("--out", ablate_out, "Output CSV (variant,augmentation,seed,auc)")->required();
  ablate_cmd->add_option("--threads", ablate_threads, "Parallel runs (default: all cores)");
  ablate_over.add_to(ablate_cmd, false);

  std::vector<const char*> argv{"gradate"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*synth_cmd) {
      Rng rng = make_rng(synth_seed, Stream::kSynth);
      save_graph(generate_synthetic(synth, rng), synth_out);
      out << "wrote " << synth_out << '\n';
    } else if (*inject_cmd) {
      const Graph g = load_graph(inject_in);
      Rng rng = make_rng(inject_seed, Stream::kInject);
      const InjectionResult r = inject_anomalies(g, inject, rng);
      save_graph(r.graph, inject_out);
      out << "structural=" << r.labels.structural.size() << " feature=" << r.labels.feature.size() << '\n';
    } else if (*train_cmd) {
      const Graph g = load_graph(train_data);
      Hyperparams hp = load_hyperparams(train_config);
      train_over.apply(hp);
      hp.validate();
      const TrainResult result = train(g, hp, {train_threads});
      save_model(train_out, result.params, hp);
      if (!train_log.empty()) write_text_file(train_log, loss_history_csv(result.history));
      if (!result.history.empty()) {
        out << "epochs=" << result.history.size() << " final_loss=" << format_double(result.history.back().joint)
            << '\n';
      }
    } else if (*score_cmd) {
      const Graph g = load_graph(score_data);
      const ModelFile model = load_model(score_model);
      Hyperparams hp = model.hyperparams.value_or(Hyperparams{});
      if (!score_config.empty()) hp = load_hyperparams(score_config, hp);
      if (score_rounds) hp.rounds = *score_rounds;
      if (score_seed) hp.seed = *score_seed;
      hp.validate();
      const ScoreTable table = score_graph(g, model.params, hp, score_threads);
      write_text_file(score_out, scores_csv(table.final, g.labels()));
      out << "scored " << g.num_nodes() << " nodes over " << hp.rounds << " rounds\n";
    } else if (*eval_cmd) {
      const Graph g = load_graph(eval_data);
      if (!g.labels()) throw ArgumentError("eval: dataset has no labels");
      const ScoreFile scores = parse_scores_csv(read_text_file(eval_scores));
      if (scores.scores.size() != g.num_nodes()) {
        throw ArgumentError("eval: scores file has " + std::to_string(scores.scores.size()) + " rows, dataset has " +
                            std::to_string(g.num_nodes()) + " nodes");
      }
      const double value = auc(scores.scores, *g.labels());
      if (!eval_roc.empty()) write_text_file(eval_roc, roc_csv(roc_points(scores.scores, *g.labels())));
      out << "auc=" << format_double(value) << '\n';
    } else if (*ablate_cmd) {
      const Graph g = load_graph(ablate_data);
      Hyperparams hp = load_hyperparams(ablate_config);
      ablate_over.apply(hp);
      hp.validate();
      std::vector<AblationArm> arms;
      for (const auto& v : split_list<std::string>(ablate_variants)) {
        arms.push_back(parse_ablation_arm(v, hp.augment.method));
      }
      const auto seeds = split_list<std::uint64_t>(ablate_seeds);
      const AblationResult result = run_ablation(g, hp, arms, seeds, ablate_threads);
      write_text_file(ablate_out, ablation_csv(result));
      for (const auto& s : result.summary) {
        out << "variant=" << variant_name(s.arm.variant) << " augmentation=" << augment_method_name(s.arm.augmentation)
            << " runs=" << s.runs << " mean_auc=" << format_double(s.mean_auc)
            << " median_auc=" << format_double(s.median_auc) << '\n';
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << error_kind(e) << ": " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

int run_command(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace gradate
