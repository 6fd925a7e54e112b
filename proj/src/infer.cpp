#include "hagmn/infer.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace hagmn {

std::vector<double> structural_weight(const IndividualHypergraph& graph,
                                      const std::vector<int>& labels,
                                      const AnatomyTable& table) {
  if (labels.size() != graph.n())
    throw std::invalid_argument("structural_weight: label count mismatch");
  for (int l : labels)
    if (l < -1 || l >= kNumClasses)
      throw std::invalid_argument("structural_weight: unknown class label " +
                                  std::to_string(l));
  std::vector<double> t_e(graph.n(), 1.0);
  for (std::size_t i = 0; i < graph.n(); ++i) {
    const auto& nbs = graph.adjacency[i];
    if (nbs.empty()) continue;  // isolated node carries no structural evidence
    std::size_t ok = 0;
    if (labels[i] >= 0) {
      for (std::size_t nb : nbs)
        if (labels[nb] >= 0 && table.allowed(static_cast<ArteryClass>(labels[i]),
                                             static_cast<ArteryClass>(labels[nb])))
          ++ok;
    }
    t_e[i] = static_cast<double>(ok) / static_cast<double>(nbs.size());
  }
  return t_e;
}

MatchOutcome match_pair(const IndividualHypergraph& test,
                        const IndividualHypergraph& tmpl, ModelParams& params,
                        const InferConfig& cfg) {
  const AssocGraph assoc = build_assoc(test, tmpl, AssocConfig{cfg.max_alignments});
  Tape tape;
  const ForwardResult fr = forward(tape, assoc, params);

  MatchOutcome out;
  out.flops = tape.flops();
  if (assoc.swapped) {
    out.match_prob = transpose(fr.match_prob);
  } else {
    out.match_prob = fr.match_prob;
  }
  const DenseMatrix tcp = assoc.swapped ? transpose(fr.tcp) : fr.tcp;

  DenseMatrix cost(out.match_prob.rows, out.match_prob.cols);
  for (std::size_t k = 0; k < cost.size(); ++k) {
    const double p = std::min(1.0 - 1e-12, std::max(1e-12, out.match_prob.data[k]));
    cost.data[k] =
        cfg.cost == InferConfig::CostTransform::kNegLog ? -std::log(p) : 1.0 - p;
  }
  out.assignment = hungarian(cost);

  out.labels.assign(test.n(), -1);
  out.tcp.assign(test.n(), 0.0);
  for (std::size_t i = 0; i < test.n(); ++i) {
    const int col = out.assignment.row_to_col[i];
    if (col < 0) continue;
    out.labels[i] = static_cast<int>(tmpl.classes[static_cast<std::size_t>(col)]);
    out.tcp[i] = tcp.at(i, static_cast<std::size_t>(col));
  }
  return out;
}

InferResult infer_with_uq(const IndividualHypergraph& test,
                          const std::vector<const IndividualHypergraph*>& templates,
                          ModelParams& params, const InferConfig& cfg) {
  if (templates.empty()) throw std::invalid_argument("infer: empty template set");
  if (!(cfg.t_c > 0.0 && cfg.t_c <= 1.0))
    throw std::invalid_argument("infer: T_c must be in (0, 1]");
  bool any_same_view = false;
  for (const auto* t : templates) any_same_view |= (t->view == test.view);
  if (!any_same_view)
    throw std::runtime_error("infer: no template shares view angle " + test.view +
                             " with tree " + test.tree_id);

  const AnatomyTable table = AnatomyTable::standard(cfg.allow_lad_lcx_contact);
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = test.n();

  InferResult result;
  result.labels.assign(n, -1);
  result.verdicts.resize(n);
  std::vector<bool> accepted(n, false);

  struct Vote {
    double weight = 0.0;
    int count = 0;
    NodeVerdict best;  // strongest single contribution for this class
  };
  std::vector<std::array<Vote, kNumClasses>> votes(n);

  int rank = -1;
  for (const IndividualHypergraph* tmpl : templates) {
    if (tmpl->view != test.view) continue;  // Algorithm 1 line 3
    ++rank;
    const MatchOutcome match = match_pair(test, *tmpl, params, cfg);
    result.flops += match.flops;
    ++result.templates_compared;
    const std::vector<double> t_e = structural_weight(test, match.labels, table);

    for (std::size_t j = 0; j < n; ++j) {
      if (match.labels[j] < 0) continue;
      NodeVerdict v;
      v.node_id = test.node_ids[j];
      v.node_index = static_cast<int>(j);
      v.predicted = match.labels[j];
      v.t_e = t_e[j];
      v.tcp = match.tcp[j];
      v.template_id = tmpl->tree_id;
      v.template_rank = rank;

      Vote& tally = votes[j][static_cast<std::size_t>(match.labels[j])];
      const double w = t_e[j] * match.tcp[j];
      tally.weight += w;
      ++tally.count;
      if (tally.count == 1 || w > tally.best.t_e * tally.best.tcp) tally.best = v;

      if (cfg.use_uq && !accepted[j]) {
        // line 8: no structural loss, or line 16: confident enough
        if (t_e[j] == 1.0 || w >= cfg.t_c) {
          accepted[j] = true;
          v.accepted = true;
          result.labels[j] = v.predicted;
          result.verdicts[j] = v;
        }
      }
    }
    if (cfg.use_uq &&
        std::all_of(accepted.begin(), accepted.end(), [](bool b) { return b; }))
      break;  // Algorithm 1 line 13
  }

  // open nodes: majority vote across templates, weighted by T_e * TCP in UQ
  // mode and by raw counts otherwise (the pre-UQ protocol)
  for (std::size_t j = 0; j < n; ++j) {
    if (accepted[j]) continue;
    int best_cls = -1;
    for (int c = 0; c < kNumClasses; ++c) {
      const Vote& cand = votes[j][static_cast<std::size_t>(c)];
      if (cand.count == 0) continue;
      if (best_cls < 0) {
        best_cls = c;
        continue;
      }
      const Vote& cur = votes[j][static_cast<std::size_t>(best_cls)];
      const bool better = cfg.use_uq
                              ? (cand.weight > cur.weight ||
                                 (cand.weight == cur.weight && cand.count > cur.count))
                              : (cand.count > cur.count ||
                                 (cand.count == cur.count && cand.weight > cur.weight));
      if (better) best_cls = c;
    }
    NodeVerdict v;
    v.node_id = test.node_ids[j];
    v.node_index = static_cast<int>(j);
    if (best_cls >= 0) {
      v = votes[j][static_cast<std::size_t>(best_cls)].best;
      v.accepted = false;
    } else {
      // no template ever resolved this node; fall back to the first class
      v.predicted = 0;
    }
    result.labels[j] = v.predicted;
    result.verdicts[j] = v;
  }

  result.wall_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace hagmn
