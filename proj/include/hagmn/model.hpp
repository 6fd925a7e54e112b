#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hagmn/adam.hpp"
#include "hagmn/assoc.hpp"
#include "hagmn/mlp.hpp"
#include "hagmn/tape.hpp"

namespace hagmn {

struct ModelConfig {
  std::size_t d = 121;
  std::size_t hidden = 64;
  int n_mp = 2;        // message-passing rounds
  int heads = 1;       // attention heads; must divide hidden
  bool tied_rounds = true;
  bool literal_attention = false;  // printed mean-pooled form of Eqs. 10-11/13-14
  bool use_egt = true;
  bool use_vgt = true;
  bool use_rowcol = true;          // row/column constraint elements
  bool rowcol_in_vgt = true;       // rows/cols join each vertex's VGT key set
  std::uint64_t seed = 0;

  void validate() const;
};

/// One message-passing round's weights: EGT attention + update, VGT attention
/// + update, row/column GCN updates.
struct RoundParams {
  Mlp a_e_q, a_e_k, a_e_v, g_e;
  Mlp a_v_q, a_v_k, a_v_v, g_v;
  Mlp g_r, g_c;
};

/// All learnable weights. Every MLP is 2 layers of `hidden` neurons with
/// ReLU between, linear output. With tied rounds a single RoundParams block
/// is reused for all n_mp rounds.
struct ModelParams {
  ModelConfig cfg;
  Mlp f_v_emb;  // 2d -> hidden
  Mlp f_e_emb;  // 6d -> hidden
  Mlp f_r_emb;  // 1 -> hidden
  Mlp f_c_emb;  // 1 -> hidden
  std::vector<RoundParams> rounds;
  Mlp f_dec;   // hidden -> 2
  Mlp f_conf;  // 2 -> 1, sigmoid applied on top

  static ModelParams init(const ModelConfig& cfg);
  std::vector<NamedTensor> named_tensors();
  std::size_t parameter_count() const;
  std::size_t round_block(int round) const {
    return cfg.tied_rounds ? 0 : static_cast<std::size_t>(round);
  }
};

/// Decoder outputs in the association graph's internal orientation
/// (n1 <= n2). match_prob holds the probability of the "match" class per
/// vertex; tcp holds the confidence head's approximated TCP.
struct ForwardResult {
  NodeId match_prob_node = 0;  // (n1*n2) x 1 on the tape
  NodeId tcp_node = 0;         // (n1*n2) x 1
  DenseMatrix match_prob;      // n1 x n2
  DenseMatrix tcp;             // n1 x n2
};

/// One forward pass of the network over an association graph. Step methods
/// are exposed so each stage can be exercised in isolation; `run` performs
/// embed + n_mp rounds of (egt, vgt, rowcol) and `decode` applies the
/// classifier and confidence head.
class HagmnForward {
 public:
  HagmnForward(Tape& tape, const AssocGraph& assoc, ModelParams& params);

  void embed();
  void egt_step(int round = 0);
  void vgt_step(int round = 0);
  void rowcol_step(int round = 0);
  void run();
  ForwardResult decode();

  NodeId vertex_state() const { return v_; }
  NodeId edge_state() const { return e_; }
  NodeId row_state() const { return r_; }
  NodeId col_state() const { return c_; }
  NodeId last_egt_attention() const { return egt_att_; }
  NodeId last_vgt_attention() const { return vgt_att_; }
  const std::map<std::string, NodeId>& param_nodes() const { return param_nodes_; }

 private:
  struct BoundMlp {
    const Mlp* spec = nullptr;
    MlpNodes nodes;
  };
  struct BoundRound {
    BoundMlp a_e_q, a_e_k, a_e_v, g_e;
    BoundMlp a_v_q, a_v_k, a_v_v, g_v;
    BoundMlp g_r, g_c;
  };

  BoundMlp bind(const std::string& name, Mlp& m);
  const BoundRound& round_params(int round) const;
  NodeId apply(const BoundMlp& m, NodeId x) {
    return mlp_apply(tape_, *m.spec, m.nodes, x);
  }

  Tape& tape_;
  const AssocGraph& assoc_;
  ModelParams& params_;
  std::map<std::string, NodeId> param_nodes_;

  BoundMlp f_v_emb_, f_e_emb_, f_r_emb_, f_c_emb_, f_dec_, f_conf_;
  std::vector<BoundRound> rounds_;
  std::shared_ptr<AttentionSpec> egt_spec_, vgt_spec_;

  bool embedded_ = false;
  NodeId v_ = 0, e_ = 0, r_ = 0, c_ = 0;
  NodeId egt_att_ = 0, vgt_att_ = 0;
  NodeId row_mean_const_ = 0, col_mean_const_ = 0;
};

/// embed + rounds + decode in one call; `param_nodes` (optional) receives the
/// tape bindings for gradient extraction.
ForwardResult forward(Tape& tape, const AssocGraph& assoc, ModelParams& params,
                      std::map<std::string, NodeId>* param_nodes = nullptr);

/// Gradients for every bound parameter after tape.backward(); parameters the
/// loss never touched come back as zeros.
std::map<std::string, DenseMatrix> extract_gradients(
    const Tape& tape, const std::map<std::string, NodeId>& param_nodes);

}  // namespace hagmn
