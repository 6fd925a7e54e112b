#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hagmn/artery.hpp"
#include "hagmn/matrix.hpp"

namespace hagmn {

/// Node triple in canonical order: [center, low, high] where center is the
/// triple's articulation node and the two others are ordered by canonical
/// node index.
struct Hyperedge {
  std::array<int, 3> nodes;
};

/// Attributed 3-uniform hypergraph of one labeled tree. Nodes are re-indexed
/// into a canonical order derived from intrinsic keys (depth, class,
/// geometry), so two trees differing only in node ids produce identical
/// hypergraphs; `node_ids` maps back to the original ids. Hyperedges are all
/// node triples whose induced tree subgraph is connected.
struct IndividualHypergraph {
  std::string tree_id;
  std::string view;
  std::size_t d = 0;

  std::vector<int> node_ids;                     // canonical index -> original id
  std::vector<ArteryClass> classes;              // canonical order
  std::vector<std::vector<std::size_t>> adjacency;  // tree edges, canonical indices
  DenseMatrix node_features;                     // n x d, canonical order
  std::vector<Hyperedge> edges;                  // sorted by (center, low, high)
  DenseMatrix edge_features;                     // n_e x 3d, [v_center, v_low, v_high]

  std::size_t n() const { return classes.size(); }
  std::size_t n_edges() const { return edges.size(); }

  /// Within-class rank in canonical order (the branch ordinal used by
  /// ground-truth matching).
  std::vector<std::size_t> class_ordinals() const;
};

/// Builds the hypergraph; trees with fewer than 3 nodes get an empty
/// hyperedge set (a warning is printed to stderr).
IndividualHypergraph build_individual(const LabeledTree& tree);

/// Ground-truth correspondence between two labeled hypergraphs: the k-th
/// segment of each class (by branch ordinal) in g1 matches the k-th in g2;
/// surplus segments map to zero rows/columns. Result is g1.n() x g2.n().
DenseMatrix ground_truth_assignment(const IndividualHypergraph& g1,
                                    const IndividualHypergraph& g2);

}  // namespace hagmn
