#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hagmn/artery.hpp"
#include "hagmn/assoc.hpp"
#include "hagmn/hungarian.hpp"
#include "hagmn/model.hpp"

namespace hagmn {

struct InferConfig {
  double t_c = 0.4;    // confidence threshold of Algorithm 1
  bool use_uq = true;  // false: compare every same-view template and vote
  enum class CostTransform { kNegLog, kOneMinusP };
  CostTransform cost = CostTransform::kNegLog;
  bool allow_lad_lcx_contact = false;
  int max_alignments = 6;
};

/// Per-node structural weight T_e: the fraction of tree neighbors whose
/// predicted-class pairing with this node's predicted class the anatomy table
/// allows. 1 means no structural loss; isolated nodes get 1; an unresolved
/// label (-1) makes every pairing inconsistent.
std::vector<double> structural_weight(const IndividualHypergraph& graph,
                                      const std::vector<int>& labels,
                                      const AnatomyTable& table);

/// One test-vs-template matching: forward pass, Hungarian discretization of
/// the match probabilities, label transfer from matched template nodes.
/// Unmatched test nodes are unresolved (-1) with tcp 0.
struct MatchOutcome {
  Assignment assignment;    // test rows -> template cols (canonical indices)
  std::vector<int> labels;  // per test node: class ordinal or -1
  std::vector<double> tcp;  // approximated TCP at the matched vertex
  DenseMatrix match_prob;   // test x template orientation
  std::uint64_t flops = 0;
};

MatchOutcome match_pair(const IndividualHypergraph& test,
                        const IndividualHypergraph& tmpl, ModelParams& params,
                        const InferConfig& cfg = {});

struct NodeVerdict {
  int node_id = 0;     // original tree node id
  int node_index = 0;  // canonical index
  int predicted = -1;  // class ordinal
  double t_e = 0.0;
  double tcp = 0.0;
  bool accepted = false;
  std::string template_id;
  int template_rank = -1;
};

struct InferResult {
  std::vector<int> labels;  // canonical order, class ordinals
  std::vector<NodeVerdict> verdicts;
  int templates_compared = 0;
  std::uint64_t flops = 0;
  double wall_s = 0.0;
};

/// Early-terminating template loop: iterate same-view templates in order;
/// accept a node when it has no structural loss (T_e = 1) or when
/// T_e * TCP >= T_c; stop once every node is accepted. Accepted verdicts are
/// frozen. Nodes still open after template exhaustion take the majority label
/// across per-template predictions weighted by T_e * TCP. With use_uq false
/// every same-view template is compared and all nodes are vote-labeled.
/// Throws when no same-view template exists.
InferResult infer_with_uq(const IndividualHypergraph& test,
                          const std::vector<const IndividualHypergraph*>& templates,
                          ModelParams& params, const InferConfig& cfg = {});

}  // namespace hagmn
