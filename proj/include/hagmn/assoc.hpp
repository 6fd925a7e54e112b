#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hagmn/hypergraph.hpp"

namespace hagmn {

struct AssocConfig {
  /// Association hyperedges generated per individual-hyperedge pair, one per
  /// bijective triple alignment, up to this cap (1..6).
  int max_alignments = 6;
};

/// One association hyperedge: the vertex triple it connects plus the pair of
/// individual hyperedges it was derived from.
struct AssocHyperedge {
  std::array<std::uint32_t, 3> vertices;  // sorted vertex indices
  std::uint32_t e1 = 0;
  std::uint32_t e2 = 0;
};

/// Hyper association graph over a pair of individual hypergraphs. Vertices
/// are node pairs (i, a), i from g1 and a from g2, with n1 <= n2 (inputs are
/// swapped when necessary and `swapped` records the orientation). Row and
/// column constraint elements carry scalar features initialized to zero.
struct AssocGraph {
  const IndividualHypergraph* g1 = nullptr;  // n1 <= n2
  const IndividualHypergraph* g2 = nullptr;
  bool swapped = false;
  std::size_t n1 = 0, n2 = 0, d = 0;

  DenseMatrix vertex_features;                       // (n1*n2) x 2d, [v_i, v_a]
  DenseMatrix edge_features;                         // n_e x 6d, [e_ijk, e_abc]
  std::vector<AssocHyperedge> edges;
  std::vector<std::vector<std::uint32_t>> vertex_edges;  // N_e(V) per vertex

  std::size_t vertex_count() const { return n1 * n2; }
  std::size_t vertex_index(std::size_t i, std::size_t a) const { return i * n2 + a; }
};

/// Builds the association graph. Both graphs must share the feature
/// dimension and be non-empty. The caller keeps the hypergraphs alive for
/// the lifetime of the result.
AssocGraph build_assoc(const IndividualHypergraph& a, const IndividualHypergraph& b,
                       const AssocConfig& cfg = {});

}  // namespace hagmn
