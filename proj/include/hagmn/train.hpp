#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hagmn/checkpoint.hpp"
#include "hagmn/dataset.hpp"
#include "hagmn/hypergraph.hpp"
#include "hagmn/model.hpp"

namespace hagmn {

struct TrainConfig {
  double alpha = 0.1;   // confidence-loss weight in the total loss
  double lr = 1e-4;
  int n_mp = 2;
  int epochs = 100;
  int pairs_per_epoch = 0;  // 0 -> |D_tr|
  std::uint64_t seed = 0;
  std::size_t hidden = 64;
  std::size_t d = 121;
  int patience = 10;  // early stop after this many epochs without improvement
  int heads = 1;
  bool tied_rounds = true;
  bool literal_attention = false;
  bool use_egt = true;
  bool use_vgt = true;
  bool use_rowcol = true;
  int max_alignments = 6;

  ModelConfig model_config() const;
  void validate() const;
};

struct EpochStats {
  int epoch = 0;
  double perm = 0.0;
  double tcp = 0.0;
  double total = 0.0;  // perm + alpha * tcp, per Eq. 23
  double wall_s = 0.0;
};

struct TrainResult {
  ModelParams params;       // best-total-loss weights
  ModelParams final_params; // weights after the last epoch
  AdamState adam;
  std::vector<EpochStats> history;
  int best_epoch = 0;
  double best_total = 0.0;
};

using EpochCallback = std::function<void(const EpochStats&, const ModelParams&,
                                         const AdamState&)>;

/// Trains on same-view-angle ordered pairs sampled uniformly from D_tr,
/// one association graph per optimizer step. Deterministic under a fixed
/// seed. Throws when no same-view pair exists or when the loss diverges.
TrainResult train(const DatasetSplit& split, const TrainConfig& cfg,
                  const Checkpoint* resume = nullptr,
                  const EpochCallback& on_epoch = nullptr);

/// Losses for one prepared pair; exposed for tests.
struct PairLosses {
  NodeId perm = 0;
  NodeId tcp = 0;
  NodeId total = 0;
};
PairLosses pair_losses(Tape& tape, const ForwardResult& fr, const DenseMatrix& gt,
                       double alpha);

}  // namespace hagmn
