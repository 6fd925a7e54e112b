#include "hagmn/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "hagmn/losses.hpp"
#include "hagmn/rng.hpp"

namespace hagmn {

ModelConfig TrainConfig::model_config() const {
  ModelConfig m;
  m.d = d;
  m.hidden = hidden;
  m.n_mp = n_mp;
  m.heads = heads;
  m.tied_rounds = tied_rounds;
  m.literal_attention = literal_attention;
  m.use_egt = use_egt;
  m.use_vgt = use_vgt;
  m.use_rowcol = use_rowcol;
  m.seed = seed;
  return m;
}

void TrainConfig::validate() const {
  if (alpha < 0.0) throw std::invalid_argument("train config: alpha must be >= 0");
  if (lr <= 0.0) throw std::invalid_argument("train config: lr must be > 0");
  if (epochs < 1) throw std::invalid_argument("train config: epochs must be >= 1");
  if (pairs_per_epoch < 0)
    throw std::invalid_argument("train config: pairs_per_epoch must be >= 0");
  if (patience < 1) throw std::invalid_argument("train config: patience must be >= 1");
  model_config().validate();
}

PairLosses pair_losses(Tape& tape, const ForwardResult& fr, const DenseMatrix& gt,
                       double alpha) {
  PairLosses out;
  out.perm = perm_loss(tape, fr.match_prob_node, gt);
  out.tcp = tcp_loss(tape, fr.tcp_node, tcp_target(fr.match_prob, gt));
  out.total = total_loss(tape, out.perm, out.tcp, alpha);
  return out;
}

TrainResult train(const DatasetSplit& split, const TrainConfig& cfg,
                  const Checkpoint* resume, const EpochCallback& on_epoch) {
  cfg.validate();

  std::vector<IndividualHypergraph> graphs;
  graphs.reserve(split.train.size());
  for (const auto& tree : split.train) graphs.push_back(build_individual(tree));

  // same-view ordered pairs (Algorithm-1 pairing constraint applies in
  // training too: anatomy varies across view angles)
  std::vector<std::pair<std::size_t, std::size_t>> universe;
  for (std::size_t i = 0; i < graphs.size(); ++i)
    for (std::size_t j = 0; j < graphs.size(); ++j)
      if (i != j && graphs[i].view == graphs[j].view) universe.emplace_back(i, j);
  if (universe.empty())
    throw std::runtime_error("train: no same-view pair available in D_tr");

  for (const auto& g : graphs)
    if (g.d != cfg.d)
      throw std::invalid_argument("train: corpus feature dimension " +
                                  std::to_string(g.d) + " != configured d " +
                                  std::to_string(cfg.d));

  TrainResult result{ModelParams::init(cfg.model_config()),
                     ModelParams::init(cfg.model_config()),
                     AdamState(AdamConfig{cfg.lr}),
                     {},
                     0,
                     std::numeric_limits<double>::infinity()};
  ModelParams params = ModelParams::init(cfg.model_config());
  if (resume) {
    if (resume->params.cfg.d != cfg.d || resume->params.cfg.hidden != cfg.hidden)
      throw std::invalid_argument("train: resume checkpoint shape mismatch");
    params = resume->params;
    if (resume->adam_config) {
      result.adam = AdamState(*resume->adam_config);
      result.adam.moments() = resume->adam_moments;
      result.adam.set_step_count(resume->adam_step_count);
    }
  }

  const int pairs =
      cfg.pairs_per_epoch > 0 ? cfg.pairs_per_epoch : static_cast<int>(split.train.size());
  Rng sampler(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  const AssocConfig assoc_cfg{cfg.max_alignments};

  const int start_epoch = resume ? resume->epoch : 0;
  for (int epoch = start_epoch; epoch < start_epoch + cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    double sum_perm = 0.0, sum_tcp = 0.0, sum_total = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const auto [i, j] = universe[sampler.below(universe.size())];
      const AssocGraph assoc = build_assoc(graphs[i], graphs[j], assoc_cfg);
      const DenseMatrix gt = ground_truth_assignment(*assoc.g1, *assoc.g2);
      Tape tape;
      std::map<std::string, NodeId> param_nodes;
      ForwardResult fr;
      PairLosses losses;
      try {
        fr = forward(tape, assoc, params, &param_nodes);
        losses = pair_losses(tape, fr, gt, cfg.alpha);
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch) +
                                 " pair " + std::to_string(p) + " (" +
                                 graphs[i].tree_id + " vs " + graphs[j].tree_id +
                                 "): " + e.what());
      }
      sum_perm += tape.value(losses.perm).at(0, 0);
      sum_tcp += tape.value(losses.tcp).at(0, 0);
      sum_total += tape.value(losses.total).at(0, 0);
      tape.backward(losses.total);
      result.adam.step(params.named_tensors(), extract_gradients(tape, param_nodes));
    }
    const double inv = 1.0 / static_cast<double>(pairs);
    EpochStats stats;
    stats.epoch = epoch;
    stats.perm = sum_perm * inv;
    stats.tcp = sum_tcp * inv;
    stats.total = sum_total * inv;
    stats.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!std::isfinite(stats.total))
      throw std::runtime_error("train: non-finite epoch loss at epoch " +
                               std::to_string(epoch));
    result.history.push_back(stats);
    if (stats.total < result.best_total) {
      result.best_total = stats.total;
      result.best_epoch = epoch;
      result.params = params;
    }
    if (on_epoch) on_epoch(stats, params, result.adam);
    if (epoch - result.best_epoch >= cfg.patience) break;
  }
  result.final_params = params;
  return result;
}

}  // namespace hagmn
