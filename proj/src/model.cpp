#include "hagmn/model.hpp"

#include <stdexcept>

#include "hagmn/rng.hpp"

namespace hagmn {

namespace {

void collect(std::vector<NamedTensor>& out, const std::string& prefix, Mlp& m) {
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    out.push_back({prefix + ".w" + std::to_string(l), &m.weights[l]});
    out.push_back({prefix + ".b" + std::to_string(l), &m.biases[l]});
  }
}

}  // namespace

void ModelConfig::validate() const {
  if (d == 0) throw std::invalid_argument("model config: d must be positive");
  if (hidden == 0) throw std::invalid_argument("model config: hidden must be positive");
  if (n_mp < 0) throw std::invalid_argument("model config: n_mp must be >= 0");
  if (heads < 1 || hidden % static_cast<std::size_t>(heads) != 0)
    throw std::invalid_argument("model config: heads must divide hidden");
  if (literal_attention && heads != 1)
    throw std::invalid_argument("model config: literal attention is single-head");
}

ModelParams ModelParams::init(const ModelConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t h = cfg.hidden;
  ModelParams p;
  p.cfg = cfg;
  p.f_v_emb = Mlp::glorot(2 * cfg.d, h, h, 2, rng);
  p.f_e_emb = Mlp::glorot(6 * cfg.d, h, h, 2, rng);
  p.f_r_emb = Mlp::glorot(1, h, h, 2, rng);
  p.f_c_emb = Mlp::glorot(1, h, h, 2, rng);
  const std::size_t n_rounds =
      cfg.tied_rounds ? 1 : static_cast<std::size_t>(std::max(1, cfg.n_mp));
  for (std::size_t r = 0; r < n_rounds; ++r) {
    RoundParams rp;
    rp.a_e_q = Mlp::glorot(h, h, h, 2, rng);
    rp.a_e_k = Mlp::glorot(h, h, h, 2, rng);
    rp.a_e_v = Mlp::glorot(h, h, h, 2, rng);
    rp.g_e = Mlp::glorot(2 * h, h, h, 2, rng);
    rp.a_v_q = Mlp::glorot(h, h, h, 2, rng);
    rp.a_v_k = Mlp::glorot(h, h, h, 2, rng);
    rp.a_v_v = Mlp::glorot(h, h, h, 2, rng);
    rp.g_v = Mlp::glorot(2 * h, h, h, 2, rng);
    rp.g_r = Mlp::glorot(2 * h, h, h, 2, rng);
    rp.g_c = Mlp::glorot(2 * h, h, h, 2, rng);
    p.rounds.push_back(std::move(rp));
  }
  p.f_dec = Mlp::glorot(h, h, 2, 2, rng);
  p.f_conf = Mlp::glorot(2, h, 1, 2, rng);
  return p;
}

std::vector<NamedTensor> ModelParams::named_tensors() {
  std::vector<NamedTensor> out;
  collect(out, "f_v_emb", f_v_emb);
  collect(out, "f_e_emb", f_e_emb);
  collect(out, "f_r_emb", f_r_emb);
  collect(out, "f_c_emb", f_c_emb);
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const std::string pre = "round" + std::to_string(r) + ".";
    collect(out, pre + "a_e_q", rounds[r].a_e_q);
    collect(out, pre + "a_e_k", rounds[r].a_e_k);
    collect(out, pre + "a_e_v", rounds[r].a_e_v);
    collect(out, pre + "g_e", rounds[r].g_e);
    collect(out, pre + "a_v_q", rounds[r].a_v_q);
    collect(out, pre + "a_v_k", rounds[r].a_v_k);
    collect(out, pre + "a_v_v", rounds[r].a_v_v);
    collect(out, pre + "g_v", rounds[r].g_v);
    collect(out, pre + "g_r", rounds[r].g_r);
    collect(out, pre + "g_c", rounds[r].g_c);
  }
  collect(out, "f_dec", f_dec);
  collect(out, "f_conf", f_conf);
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = f_v_emb.parameter_count() + f_e_emb.parameter_count() +
                  f_r_emb.parameter_count() + f_c_emb.parameter_count() +
                  f_dec.parameter_count() + f_conf.parameter_count();
  for (const auto& r : rounds)
    n += r.a_e_q.parameter_count() + r.a_e_k.parameter_count() +
         r.a_e_v.parameter_count() + r.g_e.parameter_count() +
         r.a_v_q.parameter_count() + r.a_v_k.parameter_count() +
         r.a_v_v.parameter_count() + r.g_v.parameter_count() +
         r.g_r.parameter_count() + r.g_c.parameter_count();
  return n;
}

HagmnForward::BoundMlp HagmnForward::bind(const std::string& name, Mlp& m) {
  BoundMlp b;
  b.spec = &m;
  b.nodes = bind_mlp(tape_, m);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    param_nodes_[name + ".w" + std::to_string(l)] = b.nodes.weights[l];
    param_nodes_[name + ".b" + std::to_string(l)] = b.nodes.biases[l];
  }
  return b;
}

HagmnForward::HagmnForward(Tape& tape, const AssocGraph& assoc, ModelParams& params)
    : tape_(tape), assoc_(assoc), params_(params) {
  params.cfg.validate();
  if (assoc.d != params.cfg.d)
    throw std::invalid_argument("forward: graph feature dimension " +
                                std::to_string(assoc.d) + " != model d " +
                                std::to_string(params.cfg.d));
  f_v_emb_ = bind("f_v_emb", params_.f_v_emb);
  f_e_emb_ = bind("f_e_emb", params_.f_e_emb);
  f_r_emb_ = bind("f_r_emb", params_.f_r_emb);
  f_c_emb_ = bind("f_c_emb", params_.f_c_emb);
  for (std::size_t r = 0; r < params_.rounds.size(); ++r) {
    const std::string pre = "round" + std::to_string(r) + ".";
    BoundRound br;
    br.a_e_q = bind(pre + "a_e_q", params_.rounds[r].a_e_q);
    br.a_e_k = bind(pre + "a_e_k", params_.rounds[r].a_e_k);
    br.a_e_v = bind(pre + "a_e_v", params_.rounds[r].a_e_v);
    br.g_e = bind(pre + "g_e", params_.rounds[r].g_e);
    br.a_v_q = bind(pre + "a_v_q", params_.rounds[r].a_v_q);
    br.a_v_k = bind(pre + "a_v_k", params_.rounds[r].a_v_k);
    br.a_v_v = bind(pre + "a_v_v", params_.rounds[r].a_v_v);
    br.g_v = bind(pre + "g_v", params_.rounds[r].g_v);
    br.g_r = bind(pre + "g_r", params_.rounds[r].g_r);
    br.g_c = bind(pre + "g_c", params_.rounds[r].g_c);
    rounds_.push_back(std::move(br));
  }
  f_dec_ = bind("f_dec", params_.f_dec);
  f_conf_ = bind("f_conf", params_.f_conf);

  // N_v(E): the three incident vertices per hyperedge
  auto egt = std::make_shared<AttentionSpec>();
  egt->heads = params_.cfg.heads;
  egt->literal = params_.cfg.literal_attention;
  for (const auto& e : assoc_.edges)
    egt->neighbors.push_back({e.vertices[0], e.vertices[1], e.vertices[2]});
  egt_spec_ = std::move(egt);

  // N_e(V), optionally extended with the vertex's row and column elements
  // whose key rows sit after the hyperedge block
  auto vgt = std::make_shared<AttentionSpec>();
  vgt->heads = params_.cfg.heads;
  vgt->literal = params_.cfg.literal_attention;
  const bool with_rowcol = params_.cfg.use_rowcol && params_.cfg.rowcol_in_vgt;
  const std::uint32_t n_e = static_cast<std::uint32_t>(assoc_.edges.size());
  for (std::size_t i = 0; i < assoc_.n1; ++i) {
    for (std::size_t a = 0; a < assoc_.n2; ++a) {
      auto nbs = assoc_.vertex_edges[assoc_.vertex_index(i, a)];
      if (with_rowcol) {
        nbs.push_back(n_e + static_cast<std::uint32_t>(i));
        nbs.push_back(n_e + static_cast<std::uint32_t>(assoc_.n1 + a));
      }
      vgt->neighbors.push_back(std::move(nbs));
    }
  }
  vgt_spec_ = std::move(vgt);
}

void HagmnForward::embed() {
  if (embedded_) throw std::logic_error("forward: embed called twice");
  embedded_ = true;
  v_ = apply(f_v_emb_, tape_.constant(assoc_.vertex_features));
  e_ = apply(f_e_emb_, tape_.constant(assoc_.edge_features));
  if (params_.cfg.use_rowcol) {
    // constraint features start at zero (the L1-norm regularization elements)
    r_ = apply(f_r_emb_, tape_.constant(DenseMatrix::zeros(assoc_.n1, 1)));
    c_ = apply(f_c_emb_, tape_.constant(DenseMatrix::zeros(assoc_.n2, 1)));
    DenseMatrix row_mean(assoc_.n1, assoc_.vertex_count());
    DenseMatrix col_mean(assoc_.n2, assoc_.vertex_count());
    for (std::size_t i = 0; i < assoc_.n1; ++i)
      for (std::size_t a = 0; a < assoc_.n2; ++a) {
        row_mean.at(i, assoc_.vertex_index(i, a)) = 1.0 / static_cast<double>(assoc_.n2);
        col_mean.at(a, assoc_.vertex_index(i, a)) = 1.0 / static_cast<double>(assoc_.n1);
      }
    row_mean_const_ = tape_.constant(std::move(row_mean));
    col_mean_const_ = tape_.constant(std::move(col_mean));
  }
}

const HagmnForward::BoundRound& HagmnForward::round_params(int round) const {
  const std::size_t rb = params_.round_block(round);
  if (rb >= rounds_.size())
    throw std::logic_error("forward: round index exceeds the parameter blocks");
  return rounds_[rb];
}

void HagmnForward::egt_step(int round) {
  if (!embedded_) throw std::logic_error("forward: egt_step before embed");
  if (!params_.cfg.use_egt || assoc_.edges.empty()) return;  // pass-through
  const BoundRound& rp = round_params(round);
  const NodeId q = apply(rp.a_e_q, e_);
  const NodeId k = apply(rp.a_e_k, v_);
  const NodeId val = apply(rp.a_e_v, v_);
  egt_att_ = tape_.attention(q, k, val, egt_spec_);
  e_ = apply(rp.g_e, tape_.concat_cols({e_, egt_att_}));
}

void HagmnForward::vgt_step(int round) {
  if (!embedded_) throw std::logic_error("forward: vgt_step before embed");
  if (!params_.cfg.use_vgt) return;  // pass-through
  const BoundRound& rp = round_params(round);
  NodeId kv = e_;
  if (params_.cfg.use_rowcol && params_.cfg.rowcol_in_vgt)
    kv = tape_.concat_rows({e_, r_, c_});
  const NodeId q = apply(rp.a_v_q, v_);
  const NodeId k = apply(rp.a_v_k, kv);
  const NodeId val = apply(rp.a_v_v, kv);
  vgt_att_ = tape_.attention(q, k, val, vgt_spec_);
  v_ = apply(rp.g_v, tape_.concat_cols({v_, vgt_att_}));
}

void HagmnForward::rowcol_step(int round) {
  if (!embedded_) throw std::logic_error("forward: rowcol_step before embed");
  if (!params_.cfg.use_rowcol) return;
  const BoundRound& rp = round_params(round);
  // Eqs. 16-17: concat with the mean of the row's / column's vertex features
  const NodeId row_mean = tape_.matmul(row_mean_const_, v_);
  const NodeId col_mean = tape_.matmul(col_mean_const_, v_);
  r_ = apply(rp.g_r, tape_.concat_cols({r_, row_mean}));
  c_ = apply(rp.g_c, tape_.concat_cols({c_, col_mean}));
}

void HagmnForward::run() {
  embed();
  for (int t = 0; t < params_.cfg.n_mp; ++t) {
    egt_step(t);
    vgt_step(t);
    rowcol_step(t);
  }
}

ForwardResult HagmnForward::decode() {
  const NodeId logits = apply(f_dec_, v_);
  const NodeId probs = tape_.softmax_rows(logits);
  ForwardResult out;
  out.match_prob_node = tape_.slice_col(probs, 1);
  out.tcp_node = tape_.sigmoid(apply(f_conf_, logits));
  out.match_prob = DenseMatrix(assoc_.n1, assoc_.n2);
  out.tcp = DenseMatrix(assoc_.n1, assoc_.n2);
  const DenseMatrix& mp = tape_.value(out.match_prob_node);
  const DenseMatrix& tc = tape_.value(out.tcp_node);
  for (std::size_t i = 0; i < assoc_.n1; ++i)
    for (std::size_t a = 0; a < assoc_.n2; ++a) {
      out.match_prob.at(i, a) = mp.at(assoc_.vertex_index(i, a), 0);
      out.tcp.at(i, a) = tc.at(assoc_.vertex_index(i, a), 0);
    }
  return out;
}

ForwardResult forward(Tape& tape, const AssocGraph& assoc, ModelParams& params,
                      std::map<std::string, NodeId>* param_nodes) {
  HagmnForward fwd(tape, assoc, params);
  fwd.run();
  ForwardResult out = fwd.decode();
  if (param_nodes) *param_nodes = fwd.param_nodes();
  return out;
}

std::map<std::string, DenseMatrix> extract_gradients(
    const Tape& tape, const std::map<std::string, NodeId>& param_nodes) {
  std::map<std::string, DenseMatrix> grads;
  for (const auto& [name, node] : param_nodes) grads[name] = tape.gradient(node);
  return grads;
}

}  // namespace hagmn
