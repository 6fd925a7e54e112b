#include "hagmn/assoc.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace hagmn {

namespace {

constexpr int kAlignments[6][3] = {
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
};

struct TripleHash {
  std::size_t operator()(const std::array<std::uint32_t, 3>& t) const {
    std::size_t h = 1469598103934665603ull;
    for (std::uint32_t v : t) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

AssocGraph build_assoc(const IndividualHypergraph& a, const IndividualHypergraph& b,
                       const AssocConfig& cfg) {
  if (a.n() == 0 || b.n() == 0)
    throw std::invalid_argument("build_assoc: empty node set");
  if (a.d != b.d)
    throw std::invalid_argument("build_assoc: feature dimension mismatch (" +
                                std::to_string(a.d) + " vs " + std::to_string(b.d) + ")");
  if (cfg.max_alignments < 1 || cfg.max_alignments > 6)
    throw std::invalid_argument("build_assoc: max_alignments must be in 1..6");

  AssocGraph g;
  g.swapped = a.n() > b.n();
  g.g1 = g.swapped ? &b : &a;
  g.g2 = g.swapped ? &a : &b;
  g.n1 = g.g1->n();
  g.n2 = g.g2->n();
  g.d = a.d;

  const IndividualHypergraph& g1 = *g.g1;
  const IndividualHypergraph& g2 = *g.g2;

  // Eq. 3: v_ia = [v_i, v_a]
  g.vertex_features = DenseMatrix(g.n1 * g.n2, 2 * g.d);
  for (std::size_t i = 0; i < g.n1; ++i)
    for (std::size_t an = 0; an < g.n2; ++an) {
      const std::size_t row = g.vertex_index(i, an);
      for (std::size_t k = 0; k < g.d; ++k) {
        g.vertex_features.at(row, k) = g1.node_features.at(i, k);
        g.vertex_features.at(row, g.d + k) = g2.node_features.at(an, k);
      }
    }

  // one association hyperedge per bijective triple alignment, canonicalized
  // as a sorted vertex triple and deduplicated
  std::unordered_set<std::array<std::uint32_t, 3>, TripleHash> seen;
  for (std::uint32_t e1 = 0; e1 < g1.n_edges(); ++e1) {
    for (std::uint32_t e2 = 0; e2 < g2.n_edges(); ++e2) {
      for (int al = 0; al < cfg.max_alignments; ++al) {
        std::array<std::uint32_t, 3> verts;
        for (int t = 0; t < 3; ++t) {
          const auto i = static_cast<std::size_t>(g1.edges[e1].nodes[t]);
          const auto an = static_cast<std::size_t>(g2.edges[e2].nodes[kAlignments[al][t]]);
          verts[static_cast<std::size_t>(t)] =
              static_cast<std::uint32_t>(g.vertex_index(i, an));
        }
        std::sort(verts.begin(), verts.end());
        if (!seen.insert(verts).second) continue;
        g.edges.push_back({verts, e1, e2});
      }
    }
  }

  // Eq. 5: e_{ijk,abc} = [e_ijk, e_abc]
  g.edge_features = DenseMatrix(g.edges.size(), 6 * g.d);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    for (std::size_t k = 0; k < 3 * g.d; ++k) {
      g.edge_features.at(e, k) = g1.edge_features.at(g.edges[e].e1, k);
      g.edge_features.at(e, 3 * g.d + k) = g2.edge_features.at(g.edges[e].e2, k);
    }
  }

  g.vertex_edges.resize(g.vertex_count());
  for (std::uint32_t e = 0; e < g.edges.size(); ++e)
    for (std::uint32_t v : g.edges[e].vertices) g.vertex_edges[v].push_back(e);
  return g;
}

}  // namespace hagmn
